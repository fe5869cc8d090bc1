#pragma once

#include <span>
#include <vector>

#include "rieszlab/grid.hpp"
#include "rieszlab/weights.hpp"

namespace rieszlab {

/// Exponents tied together by the admissibility relations
///   2/a + d/r = d,  1/r = 1/2 + 1/b,  1 < r < min{d/(d-1), d/gamma},
/// and the selection windows for (sigma, eta).
struct ExponentSet {
  int dim = 3;
  double gamma = 1.0;
  double r = 0.0;
  double a = 0.0;
  double b = 0.0;
  double sigma = 0.0;
  double eta = 0.0;
};

double admissible_r_upper(int dim, double gamma);

/// Fill (a, b) from (d, gamma, r); throws on inadmissible r.
ExponentSet solve_exponents(int dim, double gamma, double r);

/// Midpoint selection of (sigma, eta); all window inequalities re-verified
/// with slack >= 1e-9.
ExponentSet select_sigma_eta(int dim, double gamma);

/// ||sqrt(w) u||_b / ((||sqrt(w) u||_2 + ||sqrt(w) grad u||_2)^theta
///                    * ||sqrt(w) u||_2^(1-theta)),  theta = d/2 - d/b.
double gagliardo_nirenberg_ratio(const VectorField& u, const TensorField& grad_u,
                                 const WeightSpec& w, double b);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// Holder step: ||u_i u_j||_{L^r_{w_{r gamma}}} <= ||sqrt(w) u_i||_2 ||sqrt(w) u_j||_b,
/// requires 1/r = 1/2 + 1/b.
InequalityCheck holder_product_check(const ScalarField& ui, const ScalarField& uj,
                                     const WeightSpec& w, double r, double b);

/// Sum-space embedding: integral |g|^sigma w_{sigma eta}
///   <= (integral |g|^2 w_gamma)^(sigma/2) * (integral (1+|x|)^(-(sigma eta - sigma gamma/2) * 2/(2-sigma)))^(1-sigma/2)
/// for g = g1 + g2; also verifies (eta - gamma/2) * 2 sigma/(2-sigma) > d.
InequalityCheck sum_space_embedding_check(const ScalarField& g1, const ScalarField& g2,
                                          const ExponentSet& exps);

struct GrowthRow {
  double radius = 0.0;
  double integral = 0.0;
  double ratio = 0.0;  // integral(R) / integral(R/2); NaN on the first row
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
  double asymptotic_ratio = 0.0;  // expected 2^(sigma k + d - sigma eta)
  bool strictly_increasing = false;
};

/// Truncated norms of a monomial x^alpha in L^sigma_{w_{sigma eta}} over
/// doubling radii; diverges at rate 2^(sigma k + d - sigma eta) when
/// sigma*eta < d. Constant polynomials (k = 0) are rejected.
GrowthTable polynomial_norm_growth(const std::array<int, 3>& alpha, const ExponentSet& exps,
                                   std::span<const double> radii);

}  // namespace rieszlab
