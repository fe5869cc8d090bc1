#pragma once

#include "rieszlab/grid.hpp"
#include "rieszlab/weights.hpp"

namespace rieszlab {

/// p = sum_{i,j} R_i R_j (u_i u_j - F_{i,j}), zero-mean by the zero-mode
/// convention. Computed as the composed Riesz symbols in one spectral pass.
ScalarField riesz_pressure(const VectorField& u, const TensorField& F);

/// Same pressure through the Poisson route: assemble
/// -sum_{i,j} d_i d_j (u_i u_j - F_{i,j}) spectrally, then invert the
/// Laplacian. Agrees with riesz_pressure to rounding (identical symbols).
ScalarField poisson_pressure(const VectorField& u, const TensorField& F);

/// Smooth radial cut-off: 1 on [0, plateau], 0 beyond support.
struct CutoffSpec {
  double plateau_radius = 0.0;
  double support_radius = 0.0;

  double operator()(double r) const;
};

/// Real-space convolution of the split Green-function Hessian kernel
/// phi*H + (1-phi)*H against g = u (x) u - F, with the principal-value
/// treatment of the singular cell and the -tr(g)/d delta contribution.
/// Requires compactly supported data (support radius <= L/4) and
/// phi supported in a ball of radius <= L/8. Result is mean-subtracted.
ScalarField green_convolution_pressure(const VectorField& u, const TensorField& F,
                                       const CutoffSpec& phi);

/// Hessian of the Laplace fundamental solution, evaluated off-grid.
double green_hessian_contraction(int dim, const std::array<double, 3>& z,
                                 const std::array<double, 6>& g_sym);

/// Exact integrals of d_i d_j G over the axis-aligned cell of side `side`
/// centered at z (origin outside the cell interior), divided by the cell
/// volume. Component order: (11, 22, 33, 12, 13, 23).
std::array<double, 6> green_hessian_cell_average(int dim, const std::array<double, 3>& z,
                                                 double side);

/// Band-limited samples on the h/4-shifted double-density lattice (the
/// centers of the 2^d subcells of every grid cell). Entry k of the result
/// lies at fine-grid coordinate + h/4 per axis.
ScalarField subcell_samples(const ScalarField& f);

VectorField pressure_gradient(const ScalarField& p);

/// Laplace fundamental solution G_d (log in 2-D, 1/(4 pi r) in 3-D).
double green_function(int dim, double r);

/// Relative L^2 discrepancy over the inner half-box |x|_inf <= L/4 after
/// matching means there (pressures are defined up to constants).
double inner_halfbox_rel_l2(const ScalarField& a, const ScalarField& b);

struct EstimateReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// || sum R_i R_j F_ij ||_{L^2((0,T), L^2_{w_gamma})} against
/// sum_ij || F_ij || in the same space (empirical constant of the
/// forcing estimate).
EstimateReport riesz_forcing_estimate(const TimeSeries<TensorField>& F, double gamma);

/// || sum R_i R_j (u_i u_j) ||_{L^a((0,T), L^r_{w_{r gamma}})} against the
/// constant-free combination
/// ||u||_{L^inf L^2_w}^{1+(a-2)/a} * (int_0^T (||u|| + ||grad u||)^2 dt)^{1/a}.
EstimateReport riesz_velocity_estimate(const TimeSeries<VectorField>& u, double gamma, double r);

}  // namespace rieszlab
