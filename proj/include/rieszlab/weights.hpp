#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rieszlab/grid.hpp"

namespace rieszlab {

/// Parameters of the radial weight w_gamma(x) = (1 + |x|)^(-gamma).
struct WeightSpec {
  int dim = 3;
  double gamma = 1.0;
  std::optional<double> p;  // Lebesgue exponent of the associated weighted space
};

double weight_eval(const WeightSpec& w, const std::array<double, 3>& x);

/// Samples of w_gamma on the grid (for weighted quadratures).
ScalarField weight_field(const GridSpec& g, double gamma);

/// (integral over the box of |f|^p * w_gamma dx)^(1/p), rectangle rule.
double weighted_norm(const ScalarField& f, double p, const WeightSpec& w);
double weighted_norm(const VectorField& f, double p, const WeightSpec& w);

/// Space-time norm (integral_0^T ||f(t)||^a dt)^(1/a) with the rectangle
/// rule in time; a may be +infinity (max over snapshots).
double mixed_norm(const TimeSeries<ScalarField>& s, double a, double r, const WeightSpec& w);
double mixed_norm(const TimeSeries<VectorField>& s, double a, double r, const WeightSpec& w);

/// Average of (1+r)^power over the ball B(x, R) with |x| = center_dist,
/// reduced to a 1-D radial integral via exact sphere-cap measures.
double ball_average_weight_power(int dim, double power, double center_dist, double radius,
                                 double rel_tol = 1e-6);

/// The reverse-Holder functional
///   (avg_B w)^(1/p) * (avg_B w^(-1/(p-1)))^(1-1/p)  on B(x, R).
double muckenhoupt_functional(const WeightSpec& w, double p, double center_dist, double radius,
                              double rel_tol = 1e-6);

enum class MuckenhouptCase { SmallRadius, Far, Near };

std::string to_string(MuckenhouptCase c);

struct MuckenhouptSample {
  double center_dist = 0.0;
  double radius = 0.0;
  MuckenhouptCase proof_case = MuckenhouptCase::Near;
  double value = 0.0;
  double bound = 0.0;  // NaN when no explicit bound applies
  bool pass = false;
};

struct MuckenhouptReport {
  WeightSpec weight;
  double p = 2.0;
  std::vector<MuckenhouptSample> samples;
  double sampled_sup = 0.0;
  bool all_pass = false;
};

/// Evaluate the functional over a (center distance, radius) lattice; check the
/// explicit case bounds 4^(delta/p) for R <= 1 and (11/9)^(delta/p) for
/// |x| > 10R, plus the Jensen lower bound, at 1e-3 relative quadrature slack.
MuckenhouptReport muckenhoupt_scan(const WeightSpec& w, double p,
                                   std::span<const double> center_dists,
                                   std::span<const double> radii);

/// Hardy-Littlewood maximal function discretized over the given radius set:
/// at every grid point the max over R of the ball average of |f|.
ScalarField maximal_function(const ScalarField& f, std::span<const double> radii);

enum class BoundedOp { Riesz, Maximal };

/// Empirical operator norm: max over the corpus of
/// ||op f||_{L^p_w} / ||f||_{L^p_w}.
double operator_bound_estimate(BoundedOp op, std::span<const ScalarField> corpus, double p,
                               const WeightSpec& w, int axis = 1,
                               std::span<const double> radii = {});

struct B2Result {
  double norm = 0.0;        // sqrt of the sampled sup
  double sup = 0.0;         // sup_R R^-2 integral_{|y|<=R} |u0|^2
  double sup_radius = 0.0;  // radius attaining the sup
  std::vector<std::pair<double, double>> table;  // (R, R^-2 integral)
};

/// d = 2 only; radii must satisfy 1 <= R <= L/2.
B2Result b2_norm(const VectorField& u0, std::span<const double> radii);

}  // namespace rieszlab
