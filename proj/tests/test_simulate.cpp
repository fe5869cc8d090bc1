#include <doctest.h>

#include <cmath>

#include "rieszlab/corpus.hpp"
#include "rieszlab/simulate.hpp"
#include "rieszlab/spectral.hpp"

using namespace rieszlab;

TEST_CASE("zero data stays zero") {
  SimConfig cfg;
  cfg.grid = make_grid(2, 32);
  cfg.dt = 1e-2;
  cfg.horizon = 0.05;
  const Trajectory traj = run(cfg, VectorField(cfg.grid));
  for (const auto& s : traj.u.samples) CHECK(s.linf_norm() == 0.0);
}

TEST_CASE("parallel shear decays as pure heat") {
  // u = (sin x2, 0): the nonlinearity vanishes identically, and the
  // integrating factor makes the viscous decay exact per step
  SimConfig cfg;
  cfg.grid = make_grid(2, 32);
  cfg.dt = 1e-2;
  cfg.horizon = 0.05;
  VectorField u0(cfg.grid);
  u0.comp(0) = field_from_function(
      cfg.grid, [](const std::array<double, 3>& x) { return std::sin(x[1]); });
  const VectorField u1 = step(u0, {}, 0.0, cfg);
  VectorField expect = u0;
  expect *= std::exp(-cfg.dt);
  CHECK(rel_l2_error(u1, expect) < 1e-13);
}

TEST_CASE("taylor-green run: energy decay, divergence, monotonicity") {
  SimConfig cfg;
  cfg.grid = make_grid(2, 64);
  cfg.dt = 1e-3;
  cfg.horizon = 0.1;
  const Trajectory traj = run(cfg, taylor_green_2d(cfg.grid));
  const double e0 = traj.u.samples.front().l2_norm();
  double prev = e0;
  for (std::size_t k = 0; k < traj.u.samples.size(); ++k) {
    const double div = divergence(traj.u.samples[k]).linf_norm();
    CHECK(div < 1e-10);
    const double e = traj.u.samples[k].l2_norm();
    CHECK(e <= prev * (1.0 + 1e-12));
    prev = e;
    const double exact = e0 * std::exp(-2.0 * traj.u.time(k));
    CHECK(std::abs(e - exact) < 1e-6 * exact);
  }
}

TEST_CASE("momentum residual identifies the pressure") {
  SimConfig cfg;
  cfg.grid = make_grid(2, 64);
  cfg.dt = 1e-3;
  cfg.horizon = 0.05;
  const Trajectory traj = run(cfg, taylor_green_2d(cfg.grid));

  const auto stored = momentum_residual(traj, PressureChoice::Stored);
  const auto zero = momentum_residual(traj, PressureChoice::Zero);
  double s = 0.0, z = 0.0;
  for (double v : stored) s = std::max(s, v);
  for (double v : zero) z = std::max(z, v);
  CHECK(z > 1e3 * s);

  // adding a constant to q leaves the residual unchanged
  TimeSeries<ScalarField> q_shift = traj.q;
  for (auto& f : q_shift.samples) f += ScalarField(cfg.grid, 3.0);
  const auto shifted = momentum_residual(traj, q_shift);
  for (std::size_t k = 0; k < stored.size(); ++k)
    CHECK(shifted[k] == doctest::Approx(stored[k]).epsilon(1e-12));
}

TEST_CASE("rk4 self-convergence with active nonlinearity") {
  SimConfig base;
  base.grid = make_grid(2, 32);
  base.horizon = 0.02;
  VectorField u0 = taylor_green_2d(base.grid);
  VectorField pert(base.grid);
  pert.comp(0) = field_from_function(
      base.grid, [](const std::array<double, 3>& x) { return 0.5 * std::sin(2.0 * x[1]); });
  pert.comp(1) = field_from_function(
      base.grid, [](const std::array<double, 3>& x) { return 0.5 * std::sin(x[0]); });
  u0 += pert;

  auto final_state = [&](double dt) {
    SimConfig cfg = base;
    cfg.dt = dt;
    cfg.snapshot_stride = 1 << 20;  // first and last snapshot only
    return run(cfg, u0).u.samples.back();
  };
  const VectorField ref = final_state(2.5e-4);
  VectorField e1 = final_state(2e-3);
  VectorField e2 = final_state(1e-3);
  e1 -= ref;
  e2 -= ref;
  const double factor = e1.l2_norm() / e2.l2_norm();
  CHECK(factor >= 8.0);
  CHECK(factor <= 32.0);
}

TEST_CASE("linear response to small forcing") {
  SimConfig cfg;
  cfg.grid = make_grid(2, 32);
  cfg.dt = 1e-3;
  cfg.horizon = 0.02;
  auto forcing_with = [&](double amp) {
    return [amp, &cfg](double) {
      TensorField F(cfg.grid);
      F.comp(0, 0) = field_from_function(
          cfg.grid, [amp](const std::array<double, 3>& x) { return amp * std::sin(x[0] + x[1]); });
      return F;
    };
  };
  const Trajectory t1 = run(cfg, VectorField(cfg.grid), forcing_with(1e-3));
  const Trajectory t2 = run(cfg, VectorField(cfg.grid), forcing_with(2e-3));
  const double r1 = t1.u.samples.back().l2_norm();
  const double r2 = t2.u.samples.back().l2_norm();
  CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("3-d short-horizon smoke run") {
  SimConfig cfg;
  cfg.grid = make_grid(3, 16);
  cfg.dt = 2.5e-3;
  cfg.horizon = 0.01;
  const Trajectory traj = run(cfg, taylor_green_3d(cfg.grid));
  for (const auto& s : traj.u.samples) {
    const double div = divergence(s).linf_norm();
    CHECK(div < 1e-10);
    CHECK(s.all_finite());
  }
}

TEST_CASE("guards") {
  SimConfig cfg;
  cfg.grid = make_grid(2, 32);
  cfg.dt = 10.0;  // grossly violates the advective CFL for |u| ~ 1
  cfg.horizon = 20.0;
  CHECK_THROWS_AS(run(cfg, taylor_green_2d(cfg.grid)), std::runtime_error);

  // non-divergence-free initial data rejected
  SimConfig ok;
  ok.grid = make_grid(2, 32);
  ok.dt = 1e-3;
  ok.horizon = 0.01;
  VectorField grad_field = gradient(random_band_limited(ok.grid, 3, 4));
  CHECK_THROWS_AS(run(ok, grad_field), std::invalid_argument);

  // recorded hypothesis norms are finite and positive for nonzero data
  const Trajectory traj = run(ok, taylor_green_2d(ok.grid));
  CHECK(traj.norms.sup_u > 0.0);
  CHECK(traj.norms.int_grad_sq > 0.0);
  CHECK(traj.norms.int_sum_sq >= traj.norms.int_grad_sq);
}
