#pragma once

#include <functional>
#include <vector>

#include "rieszlab/grid.hpp"

namespace rieszlab {

/// Time-dependent forcing tensor; an empty function means F = 0.
using ForcingGenerator = std::function<TensorField(double)>;

struct SimConfig {
  GridSpec grid;
  double dt = 1e-3;
  double horizon = 0.1;       // T, finite
  double viscosity = 1.0;     // unit viscosity matches the Laplacian term
  int snapshot_stride = 1;    // record every k-th step
  double cfl_limit = 0.5;     // advective CFL dt * max|u| / h
  double blowup_factor = 1e6;
  double record_gamma = 1.0;  // weight exponent for the recorded norms
};

/// Norms of the trajectory recorded for the estimate checks:
/// sup_t ||u||_{L^2_w}, int ||grad u||^2_{L^2_w} dt and
/// int (||u|| + ||grad u||)^2 dt.
struct HypothesisNorms {
  double sup_u = 0.0;
  double int_grad_sq = 0.0;
  double int_sum_sq = 0.0;
};

struct Trajectory {
  SimConfig config;
  TimeSeries<VectorField> u;
  TimeSeries<ScalarField> q;  // Riesz-formula pressure per snapshot
  TimeSeries<TensorField> F;  // empty when the forcing is zero
  HypothesisNorms norms;
};

/// One integrating-factor RK4 step of the Leray-projected equation
/// du/dt = nu Lap u - P div(u (x) u) + P div F, with 2/3-rule dealiasing of
/// the quadratic term. Throws on CFL violation or non-finite state.
VectorField step(const VectorField& u, const ForcingGenerator& forcing, double t,
                 const SimConfig& cfg);

/// Integrate from u0 over [0, T], recording snapshots and hypothesis norms.
Trajectory run(const SimConfig& cfg, const VectorField& u0, const ForcingGenerator& forcing = {});

enum class PressureChoice { Stored, Zero };

/// || d_t u - nu Lap u + div(u (x) u) + grad q - div F ||_{L^2(box)} per
/// interior snapshot, with d_t by centered differences. Small iff q is the
/// pressure closing the equation. Quadratic terms are evaluated spectrally
/// without extra truncation; presets keep products inside the dealias band.
std::vector<double> momentum_residual(const Trajectory& traj, PressureChoice choice);
std::vector<double> momentum_residual(const Trajectory& traj, const TimeSeries<ScalarField>& q);

/// Classical 2-D Taylor-Green data on [-L/2, L/2]^2 (unit wavenumber).
VectorField taylor_green_2d(const GridSpec& g, double amplitude = 1.0);
/// 3-D Taylor-Green-type data (single-mode, divergence-free).
VectorField taylor_green_3d(const GridSpec& g, double amplitude = 1.0);

}  // namespace rieszlab
