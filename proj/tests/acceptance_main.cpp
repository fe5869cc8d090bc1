// Acceptance suite: one line per criterion, exit code 0 iff all pass.
// Criterion 10 exercises the command-line driver; pass its path with
// --cli PATH (defaults to ./rieszlab next to this binary).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rieszlab/corpus.hpp"
#include "rieszlab/exponents.hpp"
#include "rieszlab/io.hpp"
#include "rieszlab/mollify.hpp"
#include "rieszlab/pressure.hpp"
#include "rieszlab/simulate.hpp"
#include "rieszlab/spectral.hpp"
#include "rieszlab/weights.hpp"

using namespace rieszlab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void record(int criterion, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %-28s %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------

void criterion_1_riesz_calculus() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_single = 0.0;
  double worst_comp = 0.0;
  for (int dim : {2, 3}) {
    const GridSpec g = make_grid(dim, dim == 2 ? 64 : 32);
    const ScalarField sinx = field_from_function(
        g, [](const std::array<double, 3>& x) { return std::sin(x[0]); });
    const ScalarField cosx = field_from_function(
        g, [](const std::array<double, 3>& x) { return std::cos(x[0]); });
    worst_single = std::max(worst_single, rel_linf_error(riesz_transform(sinx, 1), cosx));
    for (std::uint64_t s = 0; s < 30; ++s) {
      const ScalarField f = random_band_limited(g, 1000 + s, g.n / 4);
      ScalarField sum(g);
      for (int a = 1; a <= dim; ++a) sum += riesz_transform(riesz_transform(f, a), a);
      sum *= -1.0;
      worst_comp = std::max(worst_comp, rel_l2_error(sum, f));
    }
  }
  const double dt = seconds_since(t0);
  const bool pass = worst_single <= 1e-10 && worst_comp <= 1e-10 && dt < 10.0;
  record(1, "riesz calculus", pass,
         "R1 sin err=" + fmt(worst_single) + ", composition err=" + fmt(worst_comp) +
             ", runtime=" + fmt(dt) + " s (< 10 s)");
}

void criterion_2_muckenhoupt() {
  const auto t0 = std::chrono::steady_clock::now();
  bool bounds_ok = true;
  bool sup_ok = true;
  std::string sups;
  const std::tuple<int, double, double> configs[] = {{3, 2.0, 2.0}, {2, 1.0, 2.0}, {3, 1.0, 3.0}};
  for (const auto& [d, delta, p] : configs) {
    std::vector<double> centers, radii;
    for (double c = 0.0; c <= 100.0; c += 1.0) centers.push_back(c);
    for (int i = 0; i < 10; ++i)
      radii.push_back(0.125 * std::pow(512.0 / 0.125 * 0.125, i / 9.0));  // 2^-3 .. 2^6
    for (int i = 0; i < 10; ++i) radii[static_cast<std::size_t>(i)] = std::pow(2.0, -3 + i);
    const MuckenhouptReport rep = muckenhoupt_scan({d, delta, p}, p, centers, radii);
    const double small_bound = std::pow(4.0, delta / p);
    const double far_bound = std::pow(11.0 / 9.0, delta / p);
    for (const auto& s : rep.samples) {
      if (s.radius <= 1.0) bounds_ok = bounds_ok && s.value <= small_bound * (1.0 + 1e-3);
      if (s.center_dist > 10.0 * s.radius)
        bounds_ok = bounds_ok && s.value <= far_bound * (1.0 + 1e-3);
      bounds_ok = bounds_ok && std::isfinite(s.value);
    }
    // lattice refinement: double the center and radius density
    std::vector<double> centers2, radii2;
    for (double c = 0.0; c <= 100.0; c += 0.5) centers2.push_back(c);
    for (double e = -3.0; e <= 6.0 + 1e-9; e += 0.5) radii2.push_back(std::pow(2.0, e));
    const MuckenhouptReport fine = muckenhoupt_scan({d, delta, p}, p, centers2, radii2);
    sup_ok = sup_ok && std::isfinite(rep.sampled_sup) &&
             std::abs(fine.sampled_sup - rep.sampled_sup) <= 0.05 * rep.sampled_sup;
    sups += (sups.empty() ? "" : ", ") + fmt(rep.sampled_sup);
  }
  const double dt = seconds_since(t0);
  const bool pass = bounds_ok && sup_ok && dt < 120.0;
  record(2, "muckenhoupt lemma constants", pass,
         "case bounds hold, sups {" + sups + "} stable within 5%, runtime=" + fmt(dt) +
             " s (< 2 min)");
}

void criterion_3_pressure_oracle() {
  double worst_pair = 0.0;
  for (int dim : {2, 3}) {
    const GridSpec g = make_grid(dim, dim == 2 ? 64 : 32);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const VectorField u = random_vector(g, 2000 + s, g.n / 4);
      const TensorField F = random_tensor(g, 3000 + s, g.n / 4);
      worst_pair = std::max(worst_pair, rel_l2_error(riesz_pressure(u, F), poisson_pressure(u, F)));
    }
  }
  const GridSpec g = make_grid(2, 128);
  const VectorField u = taylor_green_2d(g);
  ScalarField exact = field_from_function(g, [](const std::array<double, 3>& x) {
    return -0.25 * (std::cos(2.0 * x[0]) + std::cos(2.0 * x[1]));
  });
  exact.subtract_mean();
  const double tg = rel_l2_error(riesz_pressure(u, TensorField(g)), exact);
  const bool pass = worst_pair <= 1e-12 && tg <= 1e-10;
  record(3, "pressure oracle equality", pass,
         "riesz vs poisson=" + fmt(worst_pair) + " (<= 1e-12), taylor-green=" + fmt(tg) +
             " (<= 1e-10)");
}

void criterion_4_green_cross_check() {
  const auto t0 = std::chrono::steady_clock::now();
  double agree2 = 0.0, agree3 = 0.0, inv2 = 0.0, inv3 = 0.0;
  {
    const GridSpec g = make_grid(2, 128);
    const GreenTestData data = green_cross_check_data(g);
    const ScalarField pr = riesz_pressure(data.u, data.F);
    const CutoffSpec phi{g.box / 24.0, g.box / 8.0};
    const ScalarField pg = green_convolution_pressure(data.u, data.F, phi);
    agree2 = inner_halfbox_rel_l2(pg, pr);
    const CutoffSpec phi2{2.0 * phi.plateau_radius, phi.support_radius};
    inv2 = inner_halfbox_rel_l2(green_convolution_pressure(data.u, data.F, phi2), pg);
  }
  {
    const GridSpec g = make_grid(3, 64);
    const GreenTestData data = green_cross_check_data(g);
    const ScalarField pr = riesz_pressure(data.u, data.F);
    const CutoffSpec phi{g.box / 24.0, g.box / 8.0};
    const ScalarField pg = green_convolution_pressure(data.u, data.F, phi);
    agree3 = inner_halfbox_rel_l2(pg, pr);
    const CutoffSpec phi2{2.0 * phi.plateau_radius, phi.support_radius};
    inv3 = inner_halfbox_rel_l2(green_convolution_pressure(data.u, data.F, phi2), pg);
  }
  const double dt = seconds_since(t0);
  const bool pass =
      agree2 <= 1e-3 && agree3 <= 1e-3 && inv2 <= 1e-3 && inv3 <= 1e-3 && dt < 300.0;
  record(4, "green-function cross-check", pass,
         "agree d2=" + fmt(agree2) + " d3=" + fmt(agree3) + ", plateau-doubling d2=" + fmt(inv2) +
             " d3=" + fmt(inv3) + " (<= 1e-3), runtime=" + fmt(dt) + " s (< 5 min)");
}

void criteria_5_6_closure_and_mollification() {
  SimConfig cfg;
  cfg.grid = make_grid(2, 128);
  cfg.dt = 1e-3;
  cfg.horizon = 0.2;
  const Trajectory traj = run(cfg, taylor_green_2d(cfg.grid));

  auto max_of = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  };

  // criterion 5: second-order differencing floor and pressure sensitivity
  const double res_stored = max_of(momentum_residual(traj, PressureChoice::Stored));
  const double res_zero = max_of(momentum_residual(traj, PressureChoice::Zero));
  double halving = 0.0;
  {
    SimConfig fine = cfg;
    fine.dt = 5e-4;
    const Trajectory traj2 = run(fine, taylor_green_2d(cfg.grid));
    halving = res_stored / max_of(momentum_residual(traj2, PressureChoice::Stored));
  }
  const bool pass5 =
      halving >= 3.5 && halving <= 4.5 && res_zero >= 1e3 * res_stored;
  record(5, "theorem closure", pass5,
         "dt-halving factor=" + fmt(halving) + " (in [3.5, 4.5]), zero-pressure ratio=" +
             fmt(res_zero / res_stored) + " (>= 1e3)");

  // criterion 6: mollified defect on the same trajectory
  SpaceTimeMollifier mol{standard_bump_1d(0.08), standard_bump(2, cfg.grid.box / 6.0)};
  const double t = 0.1;
  const VectorField A = residual_field(traj.u, traj.q, nullptr, mol, t);
  const double scale = gradient(traj.q.samples[100]).l2_norm();
  const double floor_ratio = A.l2_norm() / scale;

  TimeSeries<ScalarField> q_shift = traj.q;
  const ScalarField mode = field_from_function(
      cfg.grid, [](const std::array<double, 3>& x) { return std::sin(x[0]); });
  for (auto& s : q_shift.samples) s += mode;
  const double eps[3] = {1.0, 0.5, 0.25};
  const EpsilonStudy study = epsilon_limit_study(traj.u, q_shift, nullptr, mol, eps, t);

  TimeSeries<ScalarField> q_const = traj.q;
  for (auto& s : q_const.samples) s += ScalarField(cfg.grid, 42.0);
  VectorField A_const = residual_field(traj.u, q_const, nullptr, mol, t);
  A_const -= A;
  const double shift_err = A_const.linf_norm() / std::max(1.0, A.linf_norm());

  const bool pass6 = floor_ratio <= 1e-6 && study.monotone && study.final_order >= 1.0 &&
                     shift_err <= 1e-12;
  record(6, "mollification", pass6,
         "defect/scale=" + fmt(floor_ratio) + " (<= 1e-6), eps-order=" + fmt(study.final_order) +
             " (>= 1, monotone=" + (study.monotone ? std::string("yes") : std::string("no")) +
             "), const-shift=" + fmt(shift_err) + " (<= 1e-12)");
}

void criterion_7_exponents() {
  bool pass = true;
  std::string detail;
  const ExponentSet a = solve_exponents(3, 1.0, 1.5);
  pass = pass && std::abs(a.a - 2.0) < 1e-12 && std::abs(a.b - 6.0) < 1e-12;
  const ExponentSet b = solve_exponents(2, 1.0, 4.0 / 3.0);
  pass = pass && std::abs(b.a - 4.0) < 1e-12 && std::abs(b.b - 4.0) < 1e-12;
  const ExponentSet se = select_sigma_eta(3, 2.0);
  pass = pass && std::abs(se.sigma - 1.25) < 1e-12 && std::abs(se.eta - 2.2) < 1e-12;
  // strict window inequalities with slack
  pass = pass && 1.0 < se.sigma && se.sigma < admissible_r_upper(3, 2.0);
  pass = pass && std::max(2.0, 3.0 * (2.0 - se.sigma) / (2.0 * se.sigma) + 1.0) < se.eta;
  pass = pass && se.eta < 3.0 / se.sigma && 3.0 / se.sigma < 3.0;
  bool rejected = false;
  try {
    solve_exponents(3, 2.0, 1.6);
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  pass = pass && rejected;
  record(7, "exponent arithmetic", pass,
         "(3,1,3/2)->(2,6), (2,1,4/3)->(4,4), (3,2)->(1.25,2.2), inadmissible r rejected");
}

void criterion_8_inequality_suites() {
  const GridSpec g = make_grid(2, 64);
  const WeightSpec w{2, 1.0, {}};
  const ExponentSet e = solve_exponents(2, 1.0, 4.0 / 3.0);
  const ExponentSet se = select_sigma_eta(2, 1.0);
  bool holder_ok = true, embed_ok = true;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const ScalarField ui = random_band_limited(g, 5000 + 3 * s, g.n / 4);
    const ScalarField uj = random_band_limited(g, 6000 + 3 * s, g.n / 4);
    const InequalityCheck hc = holder_product_check(ui, uj, w, e.r, e.b);
    holder_ok = holder_ok && hc.pass;
    const InequalityCheck ec = sum_space_embedding_check(ui, uj, se);
    embed_ok = embed_ok && ec.pass;
  }

  // GN homogeneity
  const VectorField u = random_divergence_free(g, 77, g.n / 4);
  TensorField gu(g);
  for (int i = 0; i < 2; ++i) {
    const VectorField gi = gradient(u.comp(i));
    for (int j = 0; j < 2; ++j) gu.comp(j, i) = gi.comp(j);
  }
  VectorField lu = u;
  lu *= 1234.5;
  TensorField lgu = gu;
  lgu *= 1234.5;
  const double r1 = gagliardo_nirenberg_ratio(u, gu, w, e.b);
  const double r2 = gagliardo_nirenberg_ratio(lu, lgu, w, e.b);
  const double gn_err = std::abs(r1 - r2) / r1;

  // polynomial growth for P = x1 at sigma=1.5, eta=7/6
  std::vector<double> radii;
  for (int k = 4; k <= 14; ++k) radii.push_back(std::pow(2.0, k));
  const GrowthTable t = polynomial_norm_growth({1, 0, 0}, se, radii);
  const double rate_err =
      std::abs(t.rows.back().ratio - t.asymptotic_ratio) / t.asymptotic_ratio;

  const bool pass = holder_ok && embed_ok && gn_err <= 1e-10 && rate_err <= 0.10 &&
                    t.strictly_increasing;
  record(8, "inequality suites", pass,
         std::string("holder/embedding over 100 members: ") +
             (holder_ok && embed_ok ? "clean" : "violated") + ", GN homogeneity=" + fmt(gn_err) +
             " (<= 1e-10), growth-rate err=" + fmt(rate_err) + " (<= 10%)");
}

void criterion_9_simulator() {
  SimConfig cfg;
  cfg.grid = make_grid(2, 128);
  cfg.dt = 1e-3;
  cfg.horizon = 0.2;
  const Trajectory traj = run(cfg, taylor_green_2d(cfg.grid));
  const double e0 = traj.u.samples.front().l2_norm();
  double energy_err = 0.0, max_div = 0.0;
  for (std::size_t k = 0; k < traj.u.samples.size(); ++k) {
    const double exact = e0 * e0 * std::exp(-4.0 * traj.u.time(k));
    const double e = traj.u.samples[k].l2_norm();
    energy_err = std::max(energy_err, std::abs(e * e - exact) / exact);
    max_div = std::max(max_div, divergence(traj.u.samples[k]).linf_norm());
  }

  // RK4 refinement on perturbed data with an active nonlinearity
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
    SimConfig c = base;
    c.dt = dt;
    c.snapshot_stride = 1 << 20;
    return run(c, u0).u.samples.back();
  };
  const VectorField ref = final_state(2.5e-4);
  VectorField e1 = final_state(2e-3);
  VectorField e2 = final_state(1e-3);
  e1 -= ref;
  e2 -= ref;
  const double factor = e1.l2_norm() / e2.l2_norm();

  const bool pass =
      energy_err <= 1e-6 && max_div <= 1e-10 && factor >= 8.0 && factor <= 32.0;
  record(9, "simulator", pass,
         "energy decay err=" + fmt(energy_err) + " (<= 1e-6), max div=" + fmt(max_div) +
             " (<= 1e-10), rk4 factor=" + fmt(factor) + " (in [8, 32])");
}

void criterion_10_determinism(const std::string& cli) {
  const fs::path base = fs::temp_directory_path() / "rieszlab_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  auto run_cli = [&](const std::string& args, const fs::path& out) {
    const std::string cmd = cli + " " + args + " --out " + out.string() + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  bool pass = true;
  std::string detail;
  const std::string cases[] = {
      "riesz-check --seed 42 --json --set n=32 --set fields=5",
      "muckenhoupt-scan --json --set centers_max=20",
      "estimates-report --seed 42 --json --set d=3 --set gamma=2 --set corpus=5 --set n=16",
  };
  int idx = 0;
  for (const std::string& c : cases) {
    const fs::path o1 = base / ("a" + std::to_string(idx));
    const fs::path o2 = base / ("b" + std::to_string(idx));
    const int r1 = run_cli(c, o1);
    const int r2 = run_cli(c, o2);
    if (r1 != 0 || r2 != 0) {
      pass = false;
      detail += " exit!=0;";
      ++idx;
      continue;
    }
    for (const auto& entry : fs::directory_iterator(o1)) {
      std::ifstream f1(entry.path(), std::ios::binary);
      std::ifstream f2(o2 / entry.path().filename(), std::ios::binary);
      const std::string s1((std::istreambuf_iterator<char>(f1)), {});
      const std::string s2((std::istreambuf_iterator<char>(f2)), {});
      if (s1.empty() || s1 != s2) {
        pass = false;
        detail += " mismatch:" + entry.path().filename().string() + ";";
      }
    }
    ++idx;
  }
  // exit-code contract: bad config exits 2
  const int bad = std::system(
      (cli + " riesz-check --set n=7 --out " + (base / "bad").string() + " >/dev/null 2>&1")
          .c_str());
  const bool code2 = WIFEXITED(bad) && WEXITSTATUS(bad) == 2;
  pass = pass && code2;
  record(10, "cli determinism", pass,
         detail.empty() ? std::string("byte-identical reports for fixed seeds, config errors exit 2")
                        : detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = (fs::path(argv[0]).parent_path() / "rieszlab").string();
  for (int i = 1; i + 1 < argc; i += 2)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  const auto t0 = std::chrono::steady_clock::now();
  criterion_1_riesz_calculus();
  criterion_2_muckenhoupt();
  criterion_3_pressure_oracle();
  criterion_4_green_cross_check();
  criteria_5_6_closure_and_mollification();
  criterion_7_exponents();
  criterion_8_inequality_suites();
  criterion_9_simulator();
  criterion_10_determinism(cli);
  std::printf("%s: %d criterion(s) failed, total runtime %.1f s\n",
              g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", g_failures,
              seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
