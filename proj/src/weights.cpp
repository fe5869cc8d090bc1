#include "rieszlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rieszlab/quadrature.hpp"
#include "rieszlab/spectral.hpp"

namespace rieszlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("exponent p must be in [1, inf)");
}

double ball_volume(int dim, double R) {
  return dim == 2 ? kPi * R * R : 4.0 / 3.0 * kPi * R * R * R;
}

// Measure of the sphere {|y| = r} intersected with the ball B(x, R), |x| = rho.
double shell_measure(int dim, double r, double rho, double R) {
  if (r <= 0.0) return 0.0;
  if (r <= R - rho) return dim == 2 ? kTau * r : 2.0 * kTau * r * r;  // full shell
  const double c = std::clamp((r * r + rho * rho - R * R) / (2.0 * r * rho), -1.0, 1.0);
  if (dim == 2) return 2.0 * r * std::acos(c);
  return kTau * r * r * (1.0 - c);  // spherical cap area
}

}  // namespace

double weight_eval(const WeightSpec& w, const std::array<double, 3>& x) {
  return std::pow(1.0 + radius_of(x), -w.gamma);
}

ScalarField weight_field(const GridSpec& g, double gamma) {
  return field_from_function(
      g, [gamma](const std::array<double, 3>& x) { return std::pow(1.0 + radius_of(x), -gamma); });
}

double weighted_norm(const ScalarField& f, double p, const WeightSpec& w) {
  require_exponent(p);
  if (!f.all_finite()) throw std::invalid_argument("weighted_norm: non-finite samples");
  const GridSpec& g = f.grid();
  double sum = 0.0;
  for_each_point(g, [&](std::int64_t idx, const std::array<double, 3>& x) {
    sum += std::pow(std::abs(f[idx]), p) * std::pow(1.0 + radius_of(x), -w.gamma);
  });
  return std::pow(sum * g.cell_measure(), 1.0 / p);
}

double weighted_norm(const VectorField& f, double p, const WeightSpec& w) {
  require_exponent(p);
  if (!f.all_finite()) throw std::invalid_argument("weighted_norm: non-finite samples");
  const GridSpec& g = f.grid();
  double sum = 0.0;
  for_each_point(g, [&](std::int64_t idx, const std::array<double, 3>& x) {
    double m2 = 0.0;
    for (int a = 0; a < g.dim; ++a) m2 += f.comp(a)[idx] * f.comp(a)[idx];
    sum += std::pow(m2, 0.5 * p) * std::pow(1.0 + radius_of(x), -w.gamma);
  });
  return std::pow(sum * g.cell_measure(), 1.0 / p);
}

namespace {

template <class FieldT>
double mixed_norm_impl(const TimeSeries<FieldT>& s, double a, double r, const WeightSpec& w) {
  if (s.samples.empty()) throw std::invalid_argument("mixed_norm: empty series");
  if (std::isinf(a)) {
    double m = 0.0;
    for (const auto& f : s.samples) m = std::max(m, weighted_norm(f, r, w));
    return m;
  }
  require_exponent(a);
  double sum = 0.0;
  for (const auto& f : s.samples) sum += std::pow(weighted_norm(f, r, w), a) * s.spacing;
  return std::pow(sum, 1.0 / a);
}

}  // namespace

double mixed_norm(const TimeSeries<ScalarField>& s, double a, double r, const WeightSpec& w) {
  return mixed_norm_impl(s, a, r, w);
}

double mixed_norm(const TimeSeries<VectorField>& s, double a, double r, const WeightSpec& w) {
  return mixed_norm_impl(s, a, r, w);
}

double ball_average_weight_power(int dim, double power, double center_dist, double radius,
                                 double rel_tol) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("ball average: dim must be 2 or 3");
  if (!(radius > 0.0)) throw std::invalid_argument("ball average: radius must be positive");
  if (center_dist < 0.0) throw std::invalid_argument("ball average: negative center distance");
  const double rho = center_dist;
  const double R = radius;
  auto fw = [power](double r) { return std::pow(1.0 + r, power); };
  const double V = ball_volume(dim, R);

  if (rho < 1e-14 * R) {  // centered ball: plain radial shells
    auto integrand = [&](double r) {
      return fw(r) * (dim == 2 ? kTau * r : 2.0 * kTau * r * r);
    };
    const double scale = std::max(fw(0.0), fw(R));
    return adaptive_simpson(integrand, 0.0, R, rel_tol * V * scale) / V;
  }

  auto integrand = [&](double r) { return fw(r) * shell_measure(dim, r, rho, R); };
  const double lo = std::max(0.0, rho - R);
  const double hi = rho + R;
  const double scale = std::max(fw(lo), fw(hi));
  const double tol = rel_tol * V * scale;
  double total = 0.0;
  if (rho < R) {
    // split at the full-shell/cap transition to keep each piece smooth
    total += adaptive_simpson(integrand, 0.0, R - rho, 0.5 * tol);
    total += adaptive_simpson(integrand, R - rho, hi, 0.5 * tol);
  } else {
    total = adaptive_simpson(integrand, lo, hi, tol);
  }
  return total / V;
}

double muckenhoupt_functional(const WeightSpec& w, double p, double center_dist, double radius,
                              double rel_tol) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("muckenhoupt_functional: p must be in (1, inf)");
  if (w.gamma < 0.0) throw std::invalid_argument("muckenhoupt_functional: negative exponent");
  const double avg_w = ball_average_weight_power(w.dim, -w.gamma, center_dist, radius, rel_tol);
  const double avg_dual =
      ball_average_weight_power(w.dim, w.gamma / (p - 1.0), center_dist, radius, rel_tol);
  return std::pow(avg_w, 1.0 / p) * std::pow(avg_dual, 1.0 - 1.0 / p);
}

std::string to_string(MuckenhouptCase c) {
  switch (c) {
    case MuckenhouptCase::SmallRadius: return "R<=1";
    case MuckenhouptCase::Far: return "far";
    case MuckenhouptCase::Near: return "near";
  }
  return "?";
}

MuckenhouptReport muckenhoupt_scan(const WeightSpec& w, double p,
                                   std::span<const double> center_dists,
                                   std::span<const double> radii) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("muckenhoupt_scan: p must be in (1, inf)");
  if (w.gamma < 0.0 || w.gamma >= static_cast<double>(w.dim))
    throw std::invalid_argument("muckenhoupt_scan: weight exponent must satisfy 0 <= delta < d");
  if (center_dists.empty() || radii.empty())
    throw std::invalid_argument("muckenhoupt_scan: empty lattice");

  const double delta = w.gamma;
  const double small_bound = std::pow(4.0, delta / p);
  const double far_bound = std::pow(11.0 / 9.0, delta / p);
  const double quad_slack = 1e-3;

  MuckenhouptReport rep;
  rep.weight = w;
  rep.p = p;
  rep.samples.resize(center_dists.size() * radii.size());

  const std::int64_t total = static_cast<std::int64_t>(rep.samples.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < total; ++t) {
    const std::size_t ci = static_cast<std::size_t>(t) / radii.size();
    const std::size_t ri = static_cast<std::size_t>(t) % radii.size();
    const double rho = center_dists[ci];
    const double R = radii[ri];
    MuckenhouptSample s;
    s.center_dist = rho;
    s.radius = R;
    s.value = muckenhoupt_functional(w, p, rho, R);
    const bool small_R = R <= 1.0;
    const bool far = rho > 10.0 * R;
    s.proof_case = small_R  ? MuckenhouptCase::SmallRadius
                   : far    ? MuckenhouptCase::Far
                            : MuckenhouptCase::Near;
    double bound = std::numeric_limits<double>::infinity();
    if (small_R) bound = std::min(bound, small_bound);
    if (far) bound = std::min(bound, far_bound);
    s.pass = std::isfinite(s.value) && s.value >= 1.0 - 1e-6;
    if (std::isfinite(bound)) {
      s.pass = s.pass && s.value <= bound * (1.0 + quad_slack);
      s.bound = bound;
    } else {
      s.bound = kNaN;
    }
    rep.samples[static_cast<std::size_t>(t)] = s;
  }

  rep.sampled_sup = 0.0;
  rep.all_pass = true;
  for (const auto& s : rep.samples) {
    rep.sampled_sup = std::max(rep.sampled_sup, s.value);
    rep.all_pass = rep.all_pass && s.pass;
  }
  return rep;
}

ScalarField maximal_function(const ScalarField& f, std::span<const double> radii) {
  const GridSpec& g = f.grid();
  if (radii.empty()) throw std::invalid_argument("maximal_function: empty radius set");
  for (double R : radii)
    if (!(R > 0.0) || R > 0.5 * g.box)
      throw std::invalid_argument("maximal_function: radius exceeding half the box");
  if (!f.all_finite()) throw std::invalid_argument("maximal_function: non-finite input");

  const int n = g.n;
  const double h = g.spacing();

  // offset stencils per radius (periodic minimum-image displacements)
  std::vector<std::vector<std::array<int, 3>>> stencils;
  for (double R : radii) {
    std::vector<std::array<int, 3>> st;
    const int K = std::min(static_cast<int>(std::floor(R / h)), n / 2);
    auto in_ball = [&](int a, int b, int c) {
      const double dx = a * h, dy = b * h, dz = c * h;
      return dx * dx + dy * dy + dz * dz <= R * R;
    };
    for (int a = -K; a <= K; ++a) {
      if (a == n / 2) continue;  // aliases -n/2
      for (int b = -K; b <= K; ++b) {
        if (b == n / 2) continue;
        if (g.dim == 2) {
          if (in_ball(a, b, 0)) st.push_back({a, b, 0});
        } else {
          for (int c = -K; c <= K; ++c) {
            if (c == n / 2) continue;
            if (in_ball(a, b, c)) st.push_back({a, b, c});
          }
        }
      }
    }
    stencils.push_back(std::move(st));
  }

  std::vector<double> absf(static_cast<std::size_t>(f.size()));
  for (std::int64_t i = 0; i < f.size(); ++i) absf[static_cast<std::size_t>(i)] = std::abs(f[i]);

  ScalarField out(g);
  auto wrap = [n](int i) { return ((i % n) + n) % n; };

  if (g.dim == 2) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double best = 0.0;
        for (const auto& st : stencils) {
          double sum = 0.0;
          for (const auto& o : st)
            sum += absf[static_cast<std::size_t>(wrap(i + o[0])) * n + wrap(j + o[1])];
          best = std::max(best, sum / static_cast<double>(st.size()));
        }
        out.at(i, j) = best;
      }
    }
  } else {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double best = 0.0;
          for (const auto& st : stencils) {
            double sum = 0.0;
            for (const auto& o : st)
              sum += absf[(static_cast<std::size_t>(wrap(i + o[0])) * n + wrap(j + o[1])) * n +
                          wrap(k + o[2])];
            best = std::max(best, sum / static_cast<double>(st.size()));
          }
          out.at(i, j, k) = best;
        }
      }
    }
  }
  return out;
}

double operator_bound_estimate(BoundedOp op, std::span<const ScalarField> corpus, double p,
                               const WeightSpec& w, int axis, std::span<const double> radii) {
  if (corpus.empty()) throw std::invalid_argument("operator_bound_estimate: empty corpus");
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("operator_bound_estimate: p must be in (1, inf)");
  if (w.gamma < 0.0 || w.gamma >= static_cast<double>(w.dim))
    throw std::invalid_argument("operator_bound_estimate: need 0 <= delta < d");
  double worst = 0.0;
  for (const ScalarField& f : corpus) {
    const double denom = weighted_norm(f, p, w);
    if (denom == 0.0) throw std::invalid_argument("operator_bound_estimate: zero-norm corpus member");
    const ScalarField g =
        op == BoundedOp::Riesz ? riesz_transform(f, axis) : maximal_function(f, radii);
    worst = std::max(worst, weighted_norm(g, p, w) / denom);
  }
  return worst;
}

B2Result b2_norm(const VectorField& u0, std::span<const double> radii) {
  const GridSpec& g = u0.grid();
  if (g.dim != 2) throw std::invalid_argument("b2_norm: defined for d = 2 only");
  if (radii.empty()) throw std::invalid_argument("b2_norm: empty radius set");
  for (double R : radii)
    if (!(R >= 1.0) || R > 0.5 * g.box)
      throw std::invalid_argument("b2_norm: radii must satisfy 1 <= R <= L/2");

  ScalarField mag2(g);
  for_each_point(g, [&](std::int64_t idx, const std::array<double, 3>&) {
    double m2 = 0.0;
    for (int a = 0; a < g.dim; ++a) m2 += u0.comp(a)[idx] * u0.comp(a)[idx];
    mag2[idx] = m2;
  });

  B2Result res;
  for (double R : radii) {
    double sum = 0.0;
    for_each_point(g, [&](std::int64_t idx, const std::array<double, 3>& x) {
      if (radius_of(x) <= R) sum += mag2[idx];
    });
    const double val = sum * g.cell_measure() / (R * R);
    res.table.emplace_back(R, val);
    if (val > res.sup) {
      res.sup = val;
      res.sup_radius = R;
    }
  }
  res.norm = std::sqrt(res.sup);
  return res;
}

}  // namespace rieszlab
