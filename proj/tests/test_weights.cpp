#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "rieszlab/corpus.hpp"
#include "rieszlab/mollify.hpp"
#include "rieszlab/weights.hpp"

using namespace rieszlab;

TEST_CASE("weight_eval") {
  CHECK(weight_eval({3, 2.0, {}}, {0, 0, 0}) == doctest::Approx(1.0));
  CHECK(weight_eval({2, 1.0, {}}, {1, 0, 0}) == doctest::Approx(0.5));
  CHECK(weight_eval({3, 3.0, {}}, {9, 0, 0}) == doctest::Approx(1e-3));
}

TEST_CASE("weighted norm: zero, homogeneity, triangle") {
  const GridSpec g = make_grid(2, 64);
  const WeightSpec w{2, 1.0, {}};
  CHECK(weighted_norm(ScalarField(g), 2.0, w) == 0.0);

  const ScalarField f = random_band_limited(g, 3, 8);
  const ScalarField h = random_band_limited(g, 5, 8);
  ScalarField lf = f;
  lf *= -2.5;
  CHECK(weighted_norm(lf, 3.0, w) ==
        doctest::Approx(2.5 * weighted_norm(f, 3.0, w)).epsilon(1e-12));
  CHECK(weighted_norm(f + h, 2.0, w) <=
        (weighted_norm(f, 2.0, w) + weighted_norm(h, 2.0, w)) * (1.0 + 1e-10));

  ScalarField bad = f;
  bad[0] = std::nan("");
  CHECK_THROWS_AS(weighted_norm(bad, 2.0, w), std::invalid_argument);
}

TEST_CASE("weighted norm of the smoothed unit-disk indicator") {
  // squared norm -> 2 pi int_0^1 r/(1+r) dr = 2 pi (1 - ln 2)
  const GridSpec g = make_grid(2, 128);
  const ScalarField f = field_from_function(g, [](const std::array<double, 3>& x) {
    return smooth_step((1.0 - radius_of(x)) / 0.08 + 0.5);
  });
  const double norm = weighted_norm(f, 2.0, WeightSpec{2, 1.0, {}});
  const double exact = 2.0 * kPi * (1.0 - std::log(2.0));
  CHECK(norm * norm == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("mixed norm") {
  const GridSpec g = make_grid(2, 32);
  const WeightSpec w{2, 0.0, {}};
  const double vol = g.box * g.box;

  // constant-in-time series reproduces the space norm for every a
  TimeSeries<ScalarField> s{0.0, 0.25, std::vector<ScalarField>(4, ScalarField(g, 2.0))};
  const double space = weighted_norm(s.samples[0], 2.0, w);
  for (double a : {1.0, 2.0, 7.0})
    CHECK(mixed_norm(s, a, 2.0, w) == doctest::Approx(space).epsilon(1e-12));
  CHECK(mixed_norm(s, std::numeric_limits<double>::infinity(), 2.0, w) ==
        doctest::Approx(space).epsilon(1e-12));

  // two snapshots with space norms 1 and 2, T = 1, a = 2 -> sqrt(2.5)
  TimeSeries<ScalarField> two{0.0, 0.5, {}};
  two.samples.emplace_back(g, 1.0 / std::sqrt(vol));
  two.samples.emplace_back(g, 2.0 / std::sqrt(vol));
  CHECK(mixed_norm(two, 2.0, 2.0, w) == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));

  TimeSeries<ScalarField> empty{0.0, 0.1, {}};
  CHECK_THROWS_AS(mixed_norm(empty, 2.0, 2.0, w), std::invalid_argument);
}

TEST_CASE("muckenhoupt functional values") {
  // degenerate weight: both ball averages are 1
  CHECK(muckenhoupt_functional({3, 0.0, {}}, 2.0, 0.7, 1.3) == doctest::Approx(1.0).epsilon(1e-6));

  // centered ball, d=3, delta=2, p=2: closed radial integrals give
  // sqrt(3(3/2 - 2 ln 2) * 31/10)
  const double exact = std::sqrt(3.0 * (1.5 - 2.0 * std::log(2.0)) * 3.1);
  CHECK(muckenhoupt_functional({3, 2.0, {}}, 2.0, 0.0, 1.0) ==
        doctest::Approx(exact).epsilon(1e-4));
  CHECK(exact > 1.0);
  CHECK(exact < 4.0);

  // far sample obeys the (11/9)^(delta/p) bound
  const double far = muckenhoupt_functional({3, 2.0, {}}, 2.0, 30.0, 2.0);
  CHECK(far <= std::pow(11.0 / 9.0, 1.0) * (1.0 + 1e-3));
  CHECK(far >= 1.0 - 1e-6);
}

TEST_CASE("muckenhoupt functional agrees with rejection sampling") {
  // the Monte Carlo ball average over the bounding box is the independent
  // quadrature oracle for the deterministic shell reduction
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto mc_avg = [&](int dim, double power, double rho, double R) {
    double sum = 0.0;
    std::int64_t kept = 0;
    while (kept < 200000) {
      std::array<double, 3> y{0.0, 0.0, 0.0};
      double r2 = 0.0;
      for (int a = 0; a < dim; ++a) {
        y[a] = unif(rng) * R;
        r2 += y[a] * y[a];
      }
      if (r2 > R * R) continue;
      y[0] += rho;  // center on the axis at distance rho
      sum += std::pow(1.0 + radius_of(y), power);
      ++kept;
    }
    return sum / static_cast<double>(kept);
  };
  const std::tuple<int, double, double> cases[] = {{2, 1.7, 0.9}, {3, 4.0, 2.5}};
  for (const auto& [dim, rho, R] : cases) {
    const double det = ball_average_weight_power(dim, -1.5, rho, R);
    const double mc = mc_avg(dim, -1.5, rho, R);
    CHECK(det == doctest::Approx(mc).epsilon(0.02));
  }
}

TEST_CASE("muckenhoupt scan") {
  std::vector<double> centers;
  for (double c = 0.0; c <= 40.0; c += 2.0) centers.push_back(c);
  std::vector<double> radii;
  for (int i = -3; i <= 6; ++i) radii.push_back(std::pow(2.0, i));

  const MuckenhouptReport rep = muckenhoupt_scan({3, 2.0, {}}, 2.0, centers, radii);
  CHECK(rep.all_pass);
  CHECK(std::isfinite(rep.sampled_sup));
  CHECK(rep.sampled_sup >= 1.0);
  for (const auto& s : rep.samples) {
    if (s.radius <= 1.0) CHECK(s.value <= std::pow(4.0, 1.0) * (1.0 + 1e-3));
    if (s.center_dist > 10.0 * s.radius)
      CHECK(s.value <= std::pow(11.0 / 9.0, 1.0) * (1.0 + 1e-3));
    CHECK(s.value >= 1.0 - 1e-6);
  }

  // degenerate delta = 0: every value 1
  const MuckenhouptReport flat = muckenhoupt_scan({3, 0.0, {}}, 2.0, centers, radii);
  for (const auto& s : flat.samples) CHECK(s.value == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(muckenhoupt_scan({3, 3.5, {}}, 2.0, centers, radii), std::invalid_argument);

  // refinement stability of the sampled sup (d=2, delta=1.5, p=3)
  const MuckenhouptReport coarse = muckenhoupt_scan({2, 1.5, {}}, 3.0, centers, radii);
  std::vector<double> centers2, radii2;
  for (double c = 0.0; c <= 40.0; c += 1.0) centers2.push_back(c);
  for (double r = -3.0; r <= 6.0; r += 0.5) radii2.push_back(std::pow(2.0, r));
  const MuckenhouptReport fine = muckenhoupt_scan({2, 1.5, {}}, 3.0, centers2, radii2);
  CHECK(std::abs(fine.sampled_sup - coarse.sampled_sup) <= 0.05 * coarse.sampled_sup);
}

TEST_CASE("maximal function") {
  const GridSpec g = make_grid(2, 64);
  const std::vector<double> radii{0.3, 0.8, 1.6};

  CHECK(maximal_function(ScalarField(g), radii).linf_norm() == 0.0);
  const ScalarField c(g, -2.0);
  const ScalarField mc = maximal_function(c, radii);
  for (std::int64_t i = 0; i < mc.size(); ++i) CHECK(mc[i] == doctest::Approx(2.0));

  // centered bump: the origin value is the smallest-ball average and
  // dominates the small-ball averages everywhere
  const ScalarField f = field_from_function(g, [&](const std::array<double, 3>& x) {
    return std::exp(-radius_of(x) * radius_of(x));
  });
  const ScalarField mf = maximal_function(f, radii);
  const ScalarField small = maximal_function(f, std::vector<double>{0.3});
  const int c0 = g.n / 2;
  CHECK(mf.at(c0, c0) == doctest::Approx(small.at(c0, c0)));
  for (std::int64_t i = 0; i < f.size(); ++i) CHECK(mf[i] >= small[i] - 1e-14);

  CHECK_THROWS_AS(maximal_function(f, std::vector<double>{4.0}), std::invalid_argument);
  CHECK_THROWS_AS(maximal_function(f, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("operator bound estimates") {
  const GridSpec g = make_grid(2, 32);
  std::vector<ScalarField> corpus;
  for (std::uint64_t s = 0; s < 8; ++s) corpus.push_back(random_band_limited(g, s + 1, 8));

  // unweighted Riesz bound is 1 (unimodular symbol + Parseval)
  const double unweighted = operator_bound_estimate(BoundedOp::Riesz, corpus, 2.0, {2, 0.0, {}}, 1);
  CHECK(unweighted <= 1.0 + 1e-10);

  // maximal operator on constants has ratio exactly 1
  std::vector<ScalarField> consts{ScalarField(g, 4.0)};
  const std::vector<double> radii{0.5, 1.0};
  CHECK(operator_bound_estimate(BoundedOp::Maximal, consts, 2.0, {2, 0.5, {}}, 1, radii) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // weighted Riesz constant: finite and stable under grid refinement
  const WeightSpec w3{3, 2.0, {}};
  std::vector<ScalarField> c16, c32;
  const GridSpec g16 = make_grid(3, 16);
  const GridSpec g32 = make_grid(3, 32);
  for (std::uint64_t s = 0; s < 6; ++s) {
    c16.push_back(random_band_limited(g16, 100 + s, 4));
    c32.push_back(random_band_limited(g32, 100 + s, 4));
  }
  const double b16 = operator_bound_estimate(BoundedOp::Riesz, c16, 2.0, w3, 1);
  const double b32 = operator_bound_estimate(BoundedOp::Riesz, c32, 2.0, w3, 1);
  CHECK(std::isfinite(b16));
  CHECK(b32 <= 2.0 * b16);
  CHECK(b16 <= 2.0 * b32);

  std::vector<ScalarField> with_zero{ScalarField(g)};
  CHECK_THROWS_AS(operator_bound_estimate(BoundedOp::Riesz, with_zero, 2.0, {2, 0.5, {}}, 1),
                  std::invalid_argument);
}

TEST_CASE("b2 norm") {
  const GridSpec g = make_grid(2, 128);
  const std::vector<double> radii{1.0, 1.5, 2.0, 2.5, 3.0};

  VectorField ones(g);
  ones.comp(0) = ScalarField(g, 1.0);
  const B2Result c = b2_norm(ones, radii);
  CHECK(c.sup == doctest::Approx(kPi).epsilon(0.03));
  for (const auto& [R, val] : c.table) CHECK(val == doctest::Approx(kPi).epsilon(0.03));

  CHECK(b2_norm(VectorField(g), radii).norm == 0.0);

  // compactly supported bump inside the unit disk: sup at R = 1, decreasing
  VectorField bump = vortex_bump(g, 1.0);
  const B2Result b = b2_norm(bump, radii);
  CHECK(b.sup_radius == doctest::Approx(1.0));
  for (std::size_t i = 1; i < b.table.size(); ++i)
    CHECK(b.table[i].second < b.table[i - 1].second);

  CHECK_THROWS_AS(b2_norm(ones, std::vector<double>{0.5}), std::invalid_argument);
  CHECK_THROWS_AS(b2_norm(ones, std::vector<double>{10.0}), std::invalid_argument);
  VectorField v3(make_grid(3, 16));
  CHECK_THROWS_AS(b2_norm(v3, radii), std::invalid_argument);
}

TEST_CASE("embedding chain norm dominations on a corpus") {
  // L^2_{w_gamma} in B_2 in L^p_{w_delta} for 0 < gamma <= 2 < delta,
  // restated as finite-corpus norm dominations with positive constants
  const double gamma = 1.0;
  const double delta = 2.5;
  const double p = 2.0;
  auto constants = [&](int n) {
    const GridSpec g = make_grid(2, n);
    std::vector<double> radii;
    for (double R = 1.0; R <= 0.45 * g.box; R += 0.25) radii.push_back(R);
    double c1 = std::numeric_limits<double>::infinity();
    double c2 = std::numeric_limits<double>::infinity();
    for (std::uint64_t s = 0; s < 6; ++s) {
      const VectorField u = random_vector(g, 300 + s, 6);
      const double l2w = weighted_norm(u, 2.0, {2, gamma, {}});
      const double b2 = b2_norm(u, radii).norm;
      const double lpw = weighted_norm(u, p, {2, delta, {}});
      c1 = std::min(c1, l2w / b2);
      c2 = std::min(c2, b2 / lpw);
    }
    return std::pair{c1, c2};
  };
  const auto [c1a, c2a] = constants(32);
  const auto [c1b, c2b] = constants(64);
  CHECK(c1a > 0.0);
  CHECK(c2a > 0.0);
  CHECK(c1b > 0.5 * c1a);
  CHECK(c1b < 2.0 * c1a);
  CHECK(c2b > 0.5 * c2a);
  CHECK(c2b < 2.0 * c2a);
}
