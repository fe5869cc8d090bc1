#pragma once

#include <cstdint>

#include "rieszlab/grid.hpp"

namespace rieszlab {

/// Band-limited random fields for property tests and empirical constants.
/// Deterministic for a fixed seed. Fields are mean-free and normalized to
/// unit box L^2 norm unless stated otherwise.
ScalarField random_band_limited(const GridSpec& g, std::uint64_t seed, int max_mode);
VectorField random_vector(const GridSpec& g, std::uint64_t seed, int max_mode);
/// Divergence-free random velocity (Leray-projected band-limited noise).
VectorField random_divergence_free(const GridSpec& g, std::uint64_t seed, int max_mode);
TensorField random_tensor(const GridSpec& g, std::uint64_t seed, int max_mode);

/// Divergence-free vortex with exactly compact support: the curl of the
/// radial stream function psi(r) = A (1 - (r/R)^2)^5 centered at `center`
/// (a z-axis vortex in 3-D). The polynomial profile keeps u (x) u well
/// resolved on moderate grids, and a centered vortex is centrally
/// antisymmetric, which keeps periodic-image effects tiny.
VectorField vortex_bump(const GridSpec& g, double support_radius, double amplitude = 1.0,
                        const std::array<double, 3>& center = {0.0, 0.0, 0.0});

/// Isotropic compactly supported tensor F_ij = delta_ij * A (1 - (r/R)^2)^5.
TensorField isotropic_bump_tensor(const GridSpec& g, double support_radius,
                                  double amplitude = 1.0);

/// Compactly supported (u, F) pair for free-space/periodic pressure
/// cross-checks: a fat vortex plus a smooth forcing bump, with the forcing
/// chosen so the box moment of u (x) u - F is isotropic (the leading
/// periodic-image multipole of the pressure then cancels).
struct GreenTestData {
  VectorField u;
  TensorField F;
};

GreenTestData green_cross_check_data(const GridSpec& g);

}  // namespace rieszlab
