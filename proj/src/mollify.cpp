#include "rieszlab/mollify.hpp"

#include <cmath>
#include <limits>

#include "rieszlab/pressure.hpp"
#include "rieszlab/quadrature.hpp"
#include "rieszlab/spectral.hpp"

namespace rieszlab {

double bump_profile(double s) {
  const double q = 1.0 - s * s;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double bump_profile_deriv(double s) {
  const double q = 1.0 - s * s;
  if (!(q > 0.0)) return 0.0;
  return bump_profile(s) * (-2.0 * s) / (q * q);
}

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

double Mollifier1D::value(double t) const { return norm / support * bump_profile(t / support); }

double Mollifier1D::deriv(double t) const {
  return norm / (support * support) * bump_profile_deriv(t / support);
}

Mollifier1D standard_bump_1d(double support_radius) {
  if (!(support_radius > 0.0)) throw std::invalid_argument("mollifier support must be positive");
  const double mass = gauss_panels(bump_profile, -1.0, 1.0, 32);
  return Mollifier1D{support_radius, 1.0 / mass};
}

double MollifierRadial::value_radius(double r) const {
  return norm / std::pow(support, dim) * bump_profile(r / support);
}

MollifierRadial standard_bump(int dim, double support_radius) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("mollifier dimension must be 1, 2 or 3");
  if (!(support_radius > 0.0)) throw std::invalid_argument("mollifier support must be positive");
  const double sphere = dim == 1 ? 2.0 : dim == 2 ? kTau : 2.0 * kTau;
  const double mass =
      sphere * gauss_panels([dim](double s) { return bump_profile(s) * std::pow(s, dim - 1); },
                            0.0, 1.0, 32);
  return MollifierRadial{dim, support_radius, 1.0 / mass};
}

ScalarField MollifierRadial::sample_on_grid(const GridSpec& g) const {
  if (dim != g.dim) throw std::invalid_argument("mollifier/grid dimension mismatch");
  if (!(support < 0.5 * g.box))
    throw std::invalid_argument("mollifier support too large for the box");
  ScalarField beta = field_from_function(
      g, [this](const std::array<double, 3>& x) { return value(x); });
  double mass = 0.0;
  for (std::int64_t i = 0; i < beta.size(); ++i) mass += beta[i];
  mass *= g.cell_measure();
  if (!(mass > 0.0)) throw std::invalid_argument("mollifier unresolved on this grid");
  beta *= 1.0 / mass;
  return beta;
}

namespace {

double box_volume(const GridSpec& g) {
  return g.dim == 2 ? g.box * g.box : g.box * g.box * g.box;
}

}  // namespace

ScalarField mollify_space(const ScalarField& f, const MollifierRadial& beta) {
  const GridSpec& g = f.grid();
  Spectrum fs = forward_fft(f);
  Spectrum bs = forward_fft(beta.sample_on_grid(g));
  const double vol = box_volume(g);
  // grid indexing starts at -L/2, so recentering the kernel at the origin
  // contributes the phase (-1)^(sum of mode numbers)
  for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
    const int parity = (m[0] + m[1] + m[2]) & 1;
    fs.coeff[static_cast<std::size_t>(idx)] *=
        (parity ? -vol : vol) * bs.coeff[static_cast<std::size_t>(idx)];
  });
  return inverse_fft(fs);
}

VectorField residual_field(const TimeSeries<VectorField>& u, const TimeSeries<ScalarField>& q,
                           const TimeSeries<TensorField>* F, const SpaceTimeMollifier& m,
                           double t) {
  if (u.samples.empty() || u.samples.size() != q.samples.size())
    throw std::invalid_argument("residual_field: velocity/pressure series mismatch");
  if (F && !F->samples.empty() && F->samples.size() != u.samples.size())
    throw std::invalid_argument("residual_field: forcing series mismatch");
  if (!(u.spacing > 0.0)) throw std::invalid_argument("residual_field: invalid snapshot spacing");
  const GridSpec& g = u.samples.front().grid();
  const int d = g.dim;
  const double t_first = u.time(0);
  const double t_last = u.time(u.samples.size() - 1);
  const double eps0 = m.alpha.support;
  if (!(t - eps0 >= t_first - 1e-12) || !(t + eps0 <= t_last + 1e-12))
    throw std::invalid_argument("residual_field: t outside the admissible window");

  std::size_t k_lo = u.samples.size(), k_hi = 0;
  for (std::size_t k = 0; k < u.samples.size(); ++k) {
    if (std::abs(u.time(k) - t) < eps0) {
      k_lo = std::min(k_lo, k);
      k_hi = std::max(k_hi, k);
    }
  }
  if (k_lo > k_hi || k_hi - k_lo + 1 < 8)
    throw std::invalid_argument("residual_field: insufficient snapshots inside the mollifier support");

  const Spectrum beta_hat = forward_fft(m.beta.sample_on_grid(g));
  const double vol = box_volume(g);
  const std::size_t nc = beta_hat.coeff.size();

  std::vector<Spectrum> acc(static_cast<std::size_t>(d),
                            Spectrum{g, std::vector<std::complex<double>>(nc)});

  // frequency tables for the beta-derivative symbols; the parity factor
  // recenters the kernel (grid indexing starts at -L/2)
  std::vector<std::array<double, 3>> xi(nc);
  std::vector<double> xi2(nc);
  std::vector<double> parity(nc);
  for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& mm) {
    auto& v = xi[static_cast<std::size_t>(idx)];
    for (int a = 0; a < d; ++a) v[a] = odd_frequency(g, mm[a]);
    xi2[static_cast<std::size_t>(idx)] = squared_frequency(g, mm);
    parity[static_cast<std::size_t>(idx)] = ((mm[0] + mm[1] + mm[2]) & 1) ? -1.0 : 1.0;
  });

  const double dt = u.spacing;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const double tau = t - u.time(k);
    const double a_val = m.alpha.value(tau);
    const double a_der = m.alpha.deriv(tau);
    if (a_val == 0.0 && a_der == 0.0) continue;

    std::vector<Spectrum> u_hat(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) u_hat[static_cast<std::size_t>(i)] = forward_fft(u.samples[k].comp(i));
    const Spectrum q_hat = forward_fft(q.samples[k]);

    // g_{i,j} = -u_i u_j + F_{j,i} (F symmetric in practice)
    std::vector<Spectrum> g_hat(static_cast<std::size_t>(d * d));
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        ScalarField prod = pointwise_product(u.samples[k].comp(i), u.samples[k].comp(j));
        prod *= -1.0;
        if (F && !F->samples.empty()) prod += F->samples[k].comp(j, i);
        Spectrum ps = forward_fft(prod);
        if (j != i) g_hat[static_cast<std::size_t>(j * d + i)] = ps;
        g_hat[static_cast<std::size_t>(i * d + j)] = std::move(ps);
      }

    for (int i = 0; i < d; ++i) {
      auto& out = acc[static_cast<std::size_t>(i)].coeff;
      const auto& ui = u_hat[static_cast<std::size_t>(i)].coeff;
      for (std::size_t c = 0; c < nc; ++c) {
        const std::complex<double> bh = parity[c] * vol * beta_hat.coeff[c];
        // heat block: (-alpha' (x) beta + alpha (x) Lap beta) * u_i
        std::complex<double> term = (-a_der - a_val * xi2[c]) * bh * ui[c];
        // transport/forcing block: sum_j (alpha (x) d_j beta) * g_{i,j}
        for (int j = 0; j < d; ++j)
          term += a_val * std::complex<double>(0.0, xi[c][j]) * bh *
                  g_hat[static_cast<std::size_t>(i * d + j)].coeff[c];
        // pressure block: -(alpha (x) d_i beta) * q
        term -= a_val * std::complex<double>(0.0, xi[c][i]) * bh * q_hat.coeff[c];
        out[c] += dt * term;
      }
    }
  }

  VectorField A(g);
  for (int i = 0; i < d; ++i) A.comp(i) = inverse_fft(acc[static_cast<std::size_t>(i)]);
  return A;
}

double harmonic_residual(const ScalarField& f) { return laplacian(f).l2_norm(); }

EpsilonStudy epsilon_limit_study(const TimeSeries<VectorField>& u, const TimeSeries<ScalarField>& q,
                                 const TimeSeries<TensorField>* F, const SpaceTimeMollifier& base,
                                 std::span<const double> eps_sequence, double t) {
  if (eps_sequence.size() < 2)
    throw std::invalid_argument("epsilon_limit_study: need at least two scales");
  for (std::size_t i = 1; i < eps_sequence.size(); ++i)
    if (!(eps_sequence[i] < eps_sequence[i - 1]))
      throw std::invalid_argument("epsilon_limit_study: eps sequence must decrease");

  // target = grad(Riesz pressure) - grad(q) at the snapshot nearest to t
  const double pos = (t - u.t0) / u.spacing;
  const std::size_t k = static_cast<std::size_t>(std::llround(pos));
  if (k >= u.samples.size() || std::abs(u.time(k) - t) > 1e-6 * u.spacing)
    throw std::invalid_argument("epsilon_limit_study: t must coincide with a snapshot");
  const TensorField* Fk = (F && !F->samples.empty()) ? &F->samples[k] : nullptr;
  TensorField zeroF(u.samples[k].grid());
  const ScalarField p = riesz_pressure(u.samples[k], Fk ? *Fk : zeroF);
  VectorField target = gradient(p);
  target -= gradient(q.samples[k]);

  EpsilonStudy study;
  study.monotone = true;
  double prev_res = 0.0, prev_eps = 0.0;
  for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
    const double eps = eps_sequence[i];
    SpaceTimeMollifier m{base.alpha.scaled(eps), base.beta.scaled(eps)};
    VectorField A = residual_field(u, q, F, m, t);
    A -= target;
    EpsilonRow row;
    row.eps = eps;
    row.residual = A.l2_norm();
    row.order = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                       : std::log(prev_res / row.residual) / std::log(prev_eps / eps);
    if (i > 0 && !(row.residual < prev_res)) study.monotone = false;
    if (i > 0) study.final_order = row.order;
    prev_res = row.residual;
    prev_eps = eps;
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace rieszlab
