#include "rieszlab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rieszlab/quadrature.hpp"

namespace rieszlab {

namespace {

constexpr double kSlack = 1e-9;

void require_dim_gamma(int dim, double gamma) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dimension must be 2 or 3");
  if (!(gamma > 0.0) || !(gamma < static_cast<double>(dim)))
    throw std::invalid_argument("weight exponent must satisfy 0 < gamma < d");
}

double sqrtw_lp_norm(const ScalarField& f, double p, int dim, double gamma) {
  // || w^(1/2) f ||_p = weighted_norm with measure weight w_{gamma p / 2}
  return weighted_norm(f, p, WeightSpec{dim, gamma * p / 2.0, {}});
}

double sqrtw_l2_norm(const VectorField& f, double gamma) {
  return weighted_norm(f, 2.0, WeightSpec{f.grid().dim, gamma, {}});
}

double sqrtw_l2_norm(const TensorField& f, double gamma) {
  double s = 0.0;
  for (int i = 0; i < f.dim(); ++i)
    for (int j = 0; j < f.dim(); ++j) {
      const double n = weighted_norm(f.comp(i, j), 2.0, WeightSpec{f.grid().dim, gamma, {}});
      s += n * n;
    }
  return std::sqrt(s);
}

}  // namespace

double admissible_r_upper(int dim, double gamma) {
  return std::min(static_cast<double>(dim) / (dim - 1), static_cast<double>(dim) / gamma);
}

ExponentSet solve_exponents(int dim, double gamma, double r) {
  require_dim_gamma(dim, gamma);
  // the Sobolev endpoint r = d/(d-1) itself is admitted (b = 2d/(d-2) there)
  const double upper = admissible_r_upper(dim, gamma);
  if (!(r > 1.0) || !(r <= upper * (1.0 + 1e-12)))
    throw std::invalid_argument("r outside the admissible interval (1, min{d/(d-1), d/gamma})");
  ExponentSet e;
  e.dim = dim;
  e.gamma = gamma;
  e.r = r;
  e.a = 2.0 / (dim - dim / r);
  e.b = 1.0 / (1.0 / r - 0.5);
  return e;
}

ExponentSet select_sigma_eta(int dim, double gamma) {
  require_dim_gamma(dim, gamma);
  // limit identity behind the selection: as r -> 1+, d(2-r)/(2r) + gamma/2
  // tends to d/2 + gamma/2 < d, so the eta window opens for sigma near 1.
  const double d = static_cast<double>(dim);
  const double upper = admissible_r_upper(dim, gamma);
  const double sigma = 0.5 * (1.0 + upper);
  const double eta_lo = std::max(gamma, d * (2.0 - sigma) / (2.0 * sigma) + gamma / 2.0);
  const double eta_hi = d / sigma;
  if (!(eta_lo + 2.0 * kSlack < eta_hi))
    throw std::logic_error("select_sigma_eta: empty eta interval for valid input");
  const double eta = 0.5 * (eta_lo + eta_hi);

  auto strict = [](double lo, double x, double hi) {
    return lo + kSlack < x && x + kSlack < hi;
  };
  if (!strict(1.0, sigma, upper)) throw std::logic_error("select_sigma_eta: sigma window violated");
  if (!strict(eta_lo, eta, eta_hi) || !(eta_hi < d + kSlack) || !(sigma * eta < d))
    throw std::logic_error("select_sigma_eta: eta window violated");

  ExponentSet e;
  e.dim = dim;
  e.gamma = gamma;
  e.sigma = sigma;
  e.eta = eta;
  return e;
}

double gagliardo_nirenberg_ratio(const VectorField& u, const TensorField& grad_u,
                                 const WeightSpec& w, double b) {
  const int d = u.grid().dim;
  if (!(b > 2.0)) throw std::invalid_argument("GN ratio needs b > 2");
  const double theta = d / 2.0 - d / b;
  if (!(theta > 0.0) || !(theta < 1.0)) throw std::invalid_argument("GN exponent out of range");
  double ub = 0.0;  // || sqrt(w) u ||_b with vector magnitude
  {
    const GridSpec& g = u.grid();
    double sum = 0.0;
    for_each_point(g, [&](std::int64_t idx, const std::array<double, 3>& x) {
      double m2 = 0.0;
      for (int a = 0; a < d; ++a) m2 += u.comp(a)[idx] * u.comp(a)[idx];
      sum += std::pow(m2, 0.5 * b) * std::pow(1.0 + radius_of(x), -w.gamma * b / 2.0);
    });
    ub = std::pow(sum * g.cell_measure(), 1.0 / b);
  }
  const double u2 = sqrtw_l2_norm(u, w.gamma);
  const double g2 = sqrtw_l2_norm(grad_u, w.gamma);
  if (u2 == 0.0) throw std::invalid_argument("GN ratio: zero field");
  return ub / (std::pow(u2 + g2, theta) * std::pow(u2, 1.0 - theta));
}

InequalityCheck holder_product_check(const ScalarField& ui, const ScalarField& uj,
                                     const WeightSpec& w, double r, double b) {
  if (std::abs(1.0 / r - 0.5 - 1.0 / b) > 1e-12)
    throw std::invalid_argument("holder_product_check: exponent relation 1/r = 1/2 + 1/b violated");
  require_same_grid(ui.grid(), uj.grid(), "holder_product_check");
  const int d = ui.grid().dim;
  InequalityCheck c;
  c.lhs = weighted_norm(pointwise_product(ui, uj), r, WeightSpec{d, r * w.gamma, {}});
  c.rhs = sqrtw_lp_norm(ui, 2.0, d, w.gamma) * sqrtw_lp_norm(uj, b, d, w.gamma);
  c.pass = c.lhs <= c.rhs * (1.0 + kSlack);
  return c;
}

InequalityCheck sum_space_embedding_check(const ScalarField& g1, const ScalarField& g2,
                                          const ExponentSet& exps) {
  require_same_grid(g1.grid(), g2.grid(), "sum_space_embedding_check");
  const double sigma = exps.sigma;
  const double eta = exps.eta;
  const double gamma = exps.gamma;
  const int d = exps.dim;
  if (!(sigma > 1.0) || !(sigma < 2.0))
    throw std::invalid_argument("sum_space_embedding_check: sigma must lie in (1, 2)");
  if (!((eta - gamma / 2.0) * (2.0 * sigma / (2.0 - sigma)) > static_cast<double>(d)))
    throw std::invalid_argument("sum_space_embedding_check: exponent condition violated");

  const ScalarField g = g1 + g2;
  const GridSpec& grid = g.grid();
  InequalityCheck c;
  c.lhs = std::pow(weighted_norm(g, sigma, WeightSpec{d, sigma * eta, {}}), sigma);
  const double f1 = std::pow(weighted_norm(g, 2.0, WeightSpec{d, gamma, {}}), sigma);
  const double e = (sigma * eta - sigma * gamma / 2.0) * 2.0 / (2.0 - sigma);
  double wint = 0.0;
  for_each_point(grid, [&](std::int64_t, const std::array<double, 3>& x) {
    wint += std::pow(1.0 + radius_of(x), -e);
  });
  wint *= grid.cell_measure();
  c.rhs = f1 * std::pow(wint, 1.0 - sigma / 2.0);
  c.pass = c.lhs <= c.rhs * (1.0 + kSlack);
  return c;
}

GrowthTable polynomial_norm_growth(const std::array<int, 3>& alpha, const ExponentSet& exps,
                                   std::span<const double> radii) {
  const int d = exps.dim;
  const double sigma = exps.sigma;
  const double eta = exps.eta;
  int k = 0;
  for (int i = 0; i < 3; ++i) {
    if (alpha[i] < 0) throw std::invalid_argument("polynomial_norm_growth: negative exponent");
    if (i >= d && alpha[i] != 0)
      throw std::invalid_argument("polynomial_norm_growth: exponent beyond dimension");
    k += alpha[i];
  }
  if (k == 0)
    throw std::invalid_argument(
        "polynomial_norm_growth: constant polynomials are excluded from the divergence claim");
  if (!(sigma * eta < static_cast<double>(d)))
    throw std::invalid_argument("polynomial_norm_growth: requires sigma*eta < d");
  if (radii.size() < 2) throw std::invalid_argument("polynomial_norm_growth: need >= 2 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw std::invalid_argument("polynomial_norm_growth: radii must increase");

  // angular moment of prod |omega_i|^(sigma alpha_i) over the unit sphere
  double ang = 0.0;
  if (d == 2) {
    ang = gauss_panels(
        [&](double th) {
          return std::pow(std::abs(std::cos(th)), sigma * alpha[0]) *
                 std::pow(std::abs(std::sin(th)), sigma * alpha[1]);
        },
        0.0, kTau, 64);
  } else {
    ang = gauss_panels(
        [&](double phi) {
          const double sp = std::sin(phi);
          const double inner = gauss_panels(
              [&](double th) {
                return std::pow(std::abs(sp * std::cos(th)), sigma * alpha[0]) *
                       std::pow(std::abs(sp * std::sin(th)), sigma * alpha[1]);
              },
              0.0, kTau, 64);
          return inner * std::pow(std::abs(std::cos(phi)), sigma * alpha[2]) * sp;
        },
        0.0, kPi, 64);
  }

  const double pow_r = sigma * k + d - 1;
  auto radial = [&](double R) {
    return adaptive_simpson(
        [&](double r) { return std::pow(r, pow_r) * std::pow(1.0 + r, -sigma * eta); }, 0.0, R,
        1e-10 * std::pow(R, pow_r + 1.0));
  };

  GrowthTable table;
  table.asymptotic_ratio = std::pow(2.0, sigma * k + d - sigma * eta);
  table.strictly_increasing = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    GrowthRow row;
    row.radius = radii[i];
    row.integral = ang * radial(radii[i]);
    row.ratio = i == 0 ? std::numeric_limits<double>::quiet_NaN() : row.integral / prev;
    if (i > 0 && !(row.integral > prev)) table.strictly_increasing = false;
    prev = row.integral;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace rieszlab
