#pragma once

#include <span>
#include <vector>

#include "rieszlab/grid.hpp"

namespace rieszlab {

/// The standard C-infinity profile exp(-1/(1-s^2)) on (-1, 1), zero outside.
double bump_profile(double s);
double bump_profile_deriv(double s);
/// C-infinity monotone step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s);

/// Nonnegative, compactly supported, mass-one time mollifier
/// alpha(t) = (C/rho) * bump_profile(t/rho).
struct Mollifier1D {
  double support = 1.0;
  double norm = 1.0;  // continuous normalization constant C

  double value(double t) const;
  double deriv(double t) const;
  Mollifier1D scaled(double eps) const { return Mollifier1D{support * eps, norm}; }
};

Mollifier1D standard_bump_1d(double support_radius);

/// Radial space mollifier beta(x) = (C/rho^d) * bump_profile(|x|/rho).
struct MollifierRadial {
  int dim = 2;
  double support = 1.0;
  double norm = 1.0;

  double value_radius(double r) const;
  double value(const std::array<double, 3>& x) const { return value_radius(radius_of(x)); }
  MollifierRadial scaled(double eps) const { return MollifierRadial{dim, support * eps, norm}; }

  /// Samples on the grid, renormalized so the discrete mass h^d * sum = 1
  /// exactly (mean preservation holds to rounding).
  ScalarField sample_on_grid(const GridSpec& g) const;
};

MollifierRadial standard_bump(int dim, double support_radius);

/// Periodic convolution f * beta computed spectrally.
ScalarField mollify_space(const ScalarField& f, const MollifierRadial& beta);

struct SpaceTimeMollifier {
  Mollifier1D alpha;
  MollifierRadial beta;
};

/// The mollified pressure-defect field of the trajectory at time t:
///   A_i = ((-alpha' (x) beta + alpha (x) Lap beta) * u_i)
///       + sum_j ((alpha (x) d_j beta) * (-u_i u_j + F_{j,i}))
///       - ((alpha (x) d_i beta) * q).
/// The passed q series occupies the pressure slot; trajectories produced by
/// the simulator store q = the Riesz-formula pressure per snapshot, for which
/// A vanishes up to time-quadrature error. F may be null (no forcing).
VectorField residual_field(const TimeSeries<VectorField>& u, const TimeSeries<ScalarField>& q,
                           const TimeSeries<TensorField>* F, const SpaceTimeMollifier& m,
                           double t);

/// || Laplacian f ||_{L^2(box)}.
double harmonic_residual(const ScalarField& f);

struct EpsilonRow {
  double eps = 0.0;
  double residual = 0.0;
  double order = 0.0;  // NaN on the first row
};

struct EpsilonStudy {
  std::vector<EpsilonRow> rows;
  bool monotone = false;
  double final_order = 0.0;
};

/// Residuals || A_eps - target || for a decreasing eps sequence, where
/// target = grad(riesz pressure at t) - grad(q at t). Both mollifier scales
/// shrink together: alpha_eps (x) beta_eps.
EpsilonStudy epsilon_limit_study(const TimeSeries<VectorField>& u, const TimeSeries<ScalarField>& q,
                                 const TimeSeries<TensorField>* F, const SpaceTimeMollifier& base,
                                 std::span<const double> eps_sequence, double t);

}  // namespace rieszlab
