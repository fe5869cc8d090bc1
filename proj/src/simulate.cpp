#include "rieszlab/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "rieszlab/pressure.hpp"
#include "rieszlab/spectral.hpp"

namespace rieszlab {

namespace {

using SpectralVec = std::vector<Spectrum>;

SpectralVec to_spectra(const VectorField& u) {
  SpectralVec s;
  for (int a = 0; a < u.dim(); ++a) s.push_back(forward_fft(u.comp(a)));
  return s;
}

VectorField to_fields(const SpectralVec& s) {
  VectorField u(s.front().grid);
  for (std::size_t a = 0; a < s.size(); ++a) u.comp(static_cast<int>(a)) = inverse_fft(s[a]);
  return u;
}

void project_in_place(SpectralVec& s) {
  const GridSpec& g = s.front().grid;
  const int d = g.dim;
  for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    double q = 0.0;
    for (int a = 0; a < d; ++a) {
      xi[a] = odd_frequency(g, m[a]);
      q += xi[a] * xi[a];
    }
    if (q == 0.0) return;
    std::complex<double> dot(0.0, 0.0);
    for (int a = 0; a < d; ++a) dot += xi[a] * s[static_cast<std::size_t>(a)].coeff[static_cast<std::size_t>(idx)];
    for (int a = 0; a < d; ++a)
      s[static_cast<std::size_t>(a)].coeff[static_cast<std::size_t>(idx)] -= xi[a] / q * dot;
  });
}

double max_speed(const VectorField& u) {
  const GridSpec& g = u.grid();
  double m2 = 0.0;
  for (std::int64_t i = 0; i < g.point_count(); ++i) {
    double s = 0.0;
    for (int a = 0; a < g.dim; ++a) s += u.comp(a)[i] * u.comp(a)[i];
    m2 = std::max(m2, s);
  }
  return std::sqrt(m2);
}

// P[-div(u (x) u) + div F(t)], dealiased by the 2/3 rule. Also reports the
// physical max speed for the CFL guard.
SpectralVec projected_rhs(const SpectralVec& uh, const ForcingGenerator& forcing, double t,
                          double* speed_out) {
  const GridSpec& g = uh.front().grid;
  const int d = g.dim;
  const int kmax = g.n / 3;

  VectorField u = to_fields(uh);
  if (!u.all_finite()) throw std::runtime_error("simulator: non-finite state (blow-up guard)");
  if (speed_out) *speed_out = max_speed(u);

  SpectralVec rhs;
  for (int a = 0; a < d; ++a)
    rhs.push_back(Spectrum{g, std::vector<std::complex<double>>(
                                  static_cast<std::size_t>(spectrum_size(g)))});

  // -div(u (x) u): component i gets -sum_j d_j (u_i u_j)
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      Spectrum w = forward_fft(pointwise_product(u.comp(i), u.comp(j)));
      for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
        const std::complex<double> c = w.coeff[static_cast<std::size_t>(idx)];
        rhs[static_cast<std::size_t>(i)].coeff[static_cast<std::size_t>(idx)] -=
            std::complex<double>(0.0, odd_frequency(g, m[j])) * c;
        if (j != i)
          rhs[static_cast<std::size_t>(j)].coeff[static_cast<std::size_t>(idx)] -=
              std::complex<double>(0.0, odd_frequency(g, m[i])) * c;
      });
    }

  // + div F: component j gets sum_i d_i F_{i,j}
  if (forcing) {
    TensorField Ft = forcing(t);
    require_same_grid(g, Ft.grid(), "forcing");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Spectrum fs = forward_fft(Ft.comp(i, j));
        for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
          rhs[static_cast<std::size_t>(j)].coeff[static_cast<std::size_t>(idx)] +=
              std::complex<double>(0.0, odd_frequency(g, m[i])) *
              fs.coeff[static_cast<std::size_t>(idx)];
        });
      }
  }

  for (auto& s : rhs) truncate_modes(s, kmax);
  project_in_place(rhs);
  return rhs;
}

struct DecayTables {
  std::vector<double> half;  // exp(-nu |xi|^2 dt/2)
  std::vector<double> full;  // exp(-nu |xi|^2 dt)
};

DecayTables make_decay(const GridSpec& g, double nu, double dt) {
  DecayTables t;
  t.half.resize(static_cast<std::size_t>(spectrum_size(g)));
  t.full.resize(t.half.size());
  for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
    const double q = squared_frequency(g, m);
    t.half[static_cast<std::size_t>(idx)] = std::exp(-nu * q * 0.5 * dt);
    t.full[static_cast<std::size_t>(idx)] = std::exp(-nu * q * dt);
  });
  return t;
}

void scale_coeffs(SpectralVec& s, const std::vector<double>& f) {
  for (auto& comp : s)
    for (std::size_t i = 0; i < comp.coeff.size(); ++i) comp.coeff[i] *= f[i];
}

SpectralVec linear_combo(const SpectralVec& a, const SpectralVec& b, double cb) {
  SpectralVec out = a;
  for (std::size_t c = 0; c < out.size(); ++c)
    for (std::size_t i = 0; i < out[c].coeff.size(); ++i) out[c].coeff[i] += cb * b[c].coeff[i];
  return out;
}

// One integrating-factor RK4 step on the spectra; checks the CFL bound
// against the speed seen at the first stage.
SpectralVec if_rk4_step(const SpectralVec& uh, const ForcingGenerator& forcing, double t,
                        const SimConfig& cfg, const DecayTables& decay) {
  const double dt = cfg.dt;
  const double h = cfg.grid.spacing();
  double speed = 0.0;

  SpectralVec k1 = projected_rhs(uh, forcing, t, &speed);
  if (dt * speed / h > cfg.cfl_limit)
    throw std::runtime_error("simulator: advective CFL violation (reduce dt)");

  SpectralVec stage = linear_combo(uh, k1, 0.5 * dt);
  scale_coeffs(stage, decay.half);
  SpectralVec k2 = projected_rhs(stage, forcing, t + 0.5 * dt, nullptr);

  stage = uh;
  scale_coeffs(stage, decay.half);
  stage = linear_combo(stage, k2, 0.5 * dt);
  SpectralVec k3 = projected_rhs(stage, forcing, t + 0.5 * dt, nullptr);

  stage = uh;
  scale_coeffs(stage, decay.full);
  scale_coeffs(k3, decay.half);
  stage = linear_combo(stage, k3, dt);
  SpectralVec k4 = projected_rhs(stage, forcing, t + dt, nullptr);

  // u_{n+1} = E uh + dt/6 (E k1 + 2 E_half (k2 + E_half k3') + k4)
  // with k3 already carrying one half-decay from the stage above.
  SpectralVec out = uh;
  scale_coeffs(out, decay.full);
  scale_coeffs(k1, decay.full);
  scale_coeffs(k2, decay.half);
  // k3 currently equals E_half * k3_raw; that is exactly the weight it needs.
  for (std::size_t c = 0; c < out.size(); ++c)
    for (std::size_t i = 0; i < out[c].coeff.size(); ++i)
      out[c].coeff[i] += dt / 6.0 *
                         (k1[c].coeff[i] + 2.0 * (k2[c].coeff[i] + k3[c].coeff[i]) +
                          k4[c].coeff[i]);
  return out;
}

void require_divergence_free(const VectorField& u, const char* what) {
  const double div = divergence(u).linf_norm();
  const double scale = std::max(1.0, u.linf_norm());
  if (div > 1e-10 * scale)
    throw std::invalid_argument(std::string(what) + ": state is not divergence-free");
}

}  // namespace

VectorField step(const VectorField& u, const ForcingGenerator& forcing, double t,
                 const SimConfig& cfg) {
  require_same_grid(u.grid(), cfg.grid, "step");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (!u.all_finite()) throw std::runtime_error("step: non-finite state (blow-up guard)");
  require_divergence_free(u, "step");
  const DecayTables decay = make_decay(cfg.grid, cfg.viscosity, cfg.dt);
  SpectralVec uh = to_spectra(u);
  for (auto& s : uh) truncate_modes(s, cfg.grid.n / 3);
  uh = if_rk4_step(uh, forcing, t, cfg, decay);
  return to_fields(uh);
}

Trajectory run(const SimConfig& cfg, const VectorField& u0, const ForcingGenerator& forcing) {
  require_same_grid(u0.grid(), cfg.grid, "run");
  if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon))
    throw std::invalid_argument("run: need dt > 0 and finite horizon T > 0");
  if (cfg.snapshot_stride < 1) throw std::invalid_argument("run: snapshot stride must be >= 1");
  require_divergence_free(u0, "run");

  const GridSpec& g = cfg.grid;
  const WeightSpec w{g.dim, cfg.record_gamma, {}};
  const int steps = static_cast<int>(std::llround(cfg.horizon / cfg.dt));
  if (steps < 1) throw std::invalid_argument("run: horizon shorter than one step");
  const int stride = std::min(cfg.snapshot_stride, steps);
  if (steps % stride != 0)
    throw std::invalid_argument("run: snapshot stride must divide the step count");
  const double initial_scale = std::max(u0.linf_norm(), 1e-3);

  const DecayTables decay = make_decay(g, cfg.viscosity, cfg.dt);
  SpectralVec uh = to_spectra(u0);
  for (auto& s : uh) truncate_modes(s, g.n / 3);

  Trajectory traj;
  traj.config = cfg;
  traj.u.spacing = cfg.dt * stride;
  traj.q.spacing = traj.u.spacing;
  traj.F.spacing = traj.u.spacing;

  auto grad_norm = [&](const VectorField& u) {
    double s = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double n = weighted_norm(gradient(u.comp(a)), 2.0, w);
      s += n * n;
    }
    return std::sqrt(s);
  };

  auto record = [&](const VectorField& u, double t) {
    TensorField Ft = forcing ? forcing(t) : TensorField(g);
    traj.u.samples.push_back(u);
    traj.q.samples.push_back(riesz_pressure(u, Ft));
    if (forcing) traj.F.samples.push_back(std::move(Ft));
  };

  VectorField u = to_fields(uh);
  record(u, 0.0);
  for (int s = 0; s < steps; ++s) {
    const double t = s * cfg.dt;
    {
      const double un = weighted_norm(u, 2.0, w);
      const double gn = grad_norm(u);
      traj.norms.sup_u = std::max(traj.norms.sup_u, un);
      traj.norms.int_grad_sq += gn * gn * cfg.dt;
      traj.norms.int_sum_sq += (un + gn) * (un + gn) * cfg.dt;
    }
    uh = if_rk4_step(uh, forcing, t, cfg, decay);
    u = to_fields(uh);
    if (u.linf_norm() > cfg.blowup_factor * initial_scale)
      throw std::runtime_error("run: blow-up guard tripped");
    if ((s + 1) % stride == 0) record(u, (s + 1) * cfg.dt);
  }
  {
    const double un = weighted_norm(u, 2.0, w);
    traj.norms.sup_u = std::max(traj.norms.sup_u, un);
  }
  return traj;
}

namespace {

std::vector<double> momentum_residual_impl(const Trajectory& traj,
                                           const TimeSeries<ScalarField>* q_override,
                                           bool zero_pressure) {
  const auto& u = traj.u;
  if (u.samples.size() < 3)
    throw std::invalid_argument("momentum_residual: need at least three snapshots");
  const GridSpec& g = u.samples.front().grid();
  const double dt = u.spacing;
  const double nu = traj.config.viscosity;
  const TimeSeries<ScalarField>& q = q_override ? *q_override : traj.q;
  if (!zero_pressure && q.samples.size() != u.samples.size())
    throw std::invalid_argument("momentum_residual: pressure series mismatch");

  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < u.samples.size(); ++k) {
    VectorField res(g);
    // d_t u by centered differences
    res = u.samples[k + 1];
    res -= u.samples[k - 1];
    res *= 1.0 / (2.0 * dt);
    // - nu Lap u + div(u (x) u)
    for (int i = 0; i < g.dim; ++i) {
      res.comp(i).add_scaled(laplacian(u.samples[k].comp(i)), -nu);
      for (int j = 0; j < g.dim; ++j) {
        Spectrum w = forward_fft(pointwise_product(u.samples[k].comp(i), u.samples[k].comp(j)));
        for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
          w.coeff[static_cast<std::size_t>(idx)] *=
              std::complex<double>(0.0, odd_frequency(g, m[j]));
        });
        res.comp(i) += inverse_fft(w);
      }
    }
    // + grad q
    if (!zero_pressure) res += gradient(q.samples[k]);
    // - div F  (component j: sum_i d_i F_{i,j})
    if (!traj.F.samples.empty()) {
      const TensorField& Ft = traj.F.samples[k];
      for (int j = 0; j < g.dim; ++j)
        for (int i = 0; i < g.dim; ++i) {
          Spectrum fs = forward_fft(Ft.comp(i, j));
          for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
            fs.coeff[static_cast<std::size_t>(idx)] *=
                std::complex<double>(0.0, odd_frequency(g, m[i]));
          });
          res.comp(j) -= inverse_fft(fs);
        }
    }
    out.push_back(res.l2_norm());
  }
  return out;
}

}  // namespace

std::vector<double> momentum_residual(const Trajectory& traj, PressureChoice choice) {
  return momentum_residual_impl(traj, nullptr, choice == PressureChoice::Zero);
}

std::vector<double> momentum_residual(const Trajectory& traj, const TimeSeries<ScalarField>& q) {
  return momentum_residual_impl(traj, &q, false);
}

VectorField taylor_green_2d(const GridSpec& g, double amplitude) {
  if (g.dim != 2) throw std::invalid_argument("taylor_green_2d: d = 2 grid required");
  VectorField u(g);
  const double k = kTau / g.box;
  u.comp(0) = field_from_function(g, [&](const std::array<double, 3>& x) {
    return amplitude * std::cos(k * x[0]) * std::sin(k * x[1]);
  });
  u.comp(1) = field_from_function(g, [&](const std::array<double, 3>& x) {
    return -amplitude * std::sin(k * x[0]) * std::cos(k * x[1]);
  });
  return u;
}

VectorField taylor_green_3d(const GridSpec& g, double amplitude) {
  if (g.dim != 3) throw std::invalid_argument("taylor_green_3d: d = 3 grid required");
  VectorField u(g);
  const double k = kTau / g.box;
  u.comp(0) = field_from_function(g, [&](const std::array<double, 3>& x) {
    return amplitude * std::cos(k * x[0]) * std::sin(k * x[1]) * std::sin(k * x[2]);
  });
  u.comp(1) = field_from_function(g, [&](const std::array<double, 3>& x) {
    return -amplitude * std::sin(k * x[0]) * std::cos(k * x[1]) * std::sin(k * x[2]);
  });
  // third component zero; divergence vanishes identically
  return u;
}

}  // namespace rieszlab
