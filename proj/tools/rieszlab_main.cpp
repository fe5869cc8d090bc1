// rieszlab: batch driver for the spectral verification suites.
//
// Subcommands: riesz-check, muckenhoupt-scan, pressure-verify, ns-run,
// mollify-check, estimates-report. Each reads an optional key=value config
// file; the flags --out/--json/--threads/--seed override file values.
// Exit codes: 0 all checks pass, 1 check failure, 2 usage/config error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "rieszlab/corpus.hpp"
#include "rieszlab/exponents.hpp"
#include "rieszlab/io.hpp"
#include "rieszlab/mollify.hpp"
#include "rieszlab/pressure.hpp"
#include "rieszlab/simulate.hpp"
#include "rieszlab/spectral.hpp"
#include "rieszlab/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rieszlab;

namespace {

struct Config {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  std::string str(const std::string& key, const std::string& def) const {
    auto it = kv.find(key);
    return it == kv.end() ? def : it->second;
  }
  double num(const std::string& key, double def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("config: bad number for " + key);
    return v;
  }
  int integer(const std::string& key, int def) const {
    const double v = num(key, def);
    if (v != std::floor(v)) throw std::invalid_argument("config: integer expected for " + key);
    return static_cast<int>(v);
  }
  std::vector<double> list(const std::string& key, const std::vector<double>& def) const {
    auto it = kv.find(key);
    if (it == kv.end()) return def;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
  }
};

Config load_config(const std::string& path, const std::vector<std::string>& overrides) {
  Config cfg;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not found: " + path);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (!key.empty()) cfg.kv[key] = val;
    }
  }
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("override must be key=value: " + ov);
    cfg.kv[ov.substr(0, eq)] = ov.substr(eq + 1);
  }
  return cfg;
}

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  bool emit_json = false;
  int threads = 0;
  std::uint64_t seed = 42;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "key=value config file");
  sub->add_option("--out", c.out_dir, "output directory");
  sub->add_flag("--json", c.emit_json, "also emit a JSON summary");
  sub->add_option("--threads", c.threads, "worker thread cap");
  sub->add_option("--seed", c.seed, "seed for randomized corpora");
  sub->add_option("--set", c.overrides, "override a config key (key=value)")->take_all();
}

void apply_threads(const Common& c) {
#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(c.threads);
#else
  (void)c;
#endif
}

struct CheckTable {
  std::vector<std::array<std::string, 5>> rows;  // check, params, value, threshold, pass
  bool all_pass = true;

  void add(const std::string& name, const std::string& params, double value, double threshold,
           bool pass) {
    rows.push_back({name, params, format_double(value), format_double(threshold),
                    pass ? "true" : "false"});
    all_pass = all_pass && pass;
    std::cout << (pass ? "  [ok]   " : "  [FAIL] ") << name << "  (" << params
              << ")  value=" << format_double(value) << " thr=" << format_double(threshold)
              << "\n";
  }

  void write_csv(const fs::path& path) const {
    CsvWriter csv(path);
    csv.row({"check", "params", "value", "threshold", "pass"});
    for (const auto& r : rows) csv.row({r[0], r[1], r[2], r[3], r[4]});
  }
};

GridSpec grid_from(const Config& cfg, int def_d, int def_n) {
  return make_grid(cfg.integer("d", def_d), cfg.integer("n", def_n), cfg.num("L", kTau));
}

// ---------------------------------------------------------------- riesz-check

int run_riesz_check(const Common& com) {
  const Config cfg = load_config(com.config_path, com.overrides);
  apply_threads(com);
  const GridSpec g = grid_from(cfg, 2, 64);
  const int fields = cfg.integer("fields", 30);
  const double tol = cfg.num("tolerance", 1e-10);
  const std::uint64_t seed = cfg.has("seed") ? static_cast<std::uint64_t>(cfg.num("seed", 42)) : com.seed;
  const int max_mode = cfg.integer("max_mode", std::max(2, g.n / 4));

  std::cout << "riesz-check on " << g.dim << "-d grid n=" << g.n << "\n";
  CheckTable table;

  {
    const ScalarField f = field_from_function(
        g, [&](const std::array<double, 3>& x) { return std::sin(kTau / g.box * x[0]); });
    const ScalarField expect = field_from_function(
        g, [&](const std::array<double, 3>& x) { return std::cos(kTau / g.box * x[0]); });
    table.add("riesz_single_mode", "R1 sin(x1) = cos(x1)",
              rel_linf_error(riesz_transform(f, 1), expect), tol,
              rel_linf_error(riesz_transform(f, 1), expect) <= tol);
  }
  {
    double worst = 0.0;
    for (int k = 0; k < fields; ++k) {
      const ScalarField f = random_band_limited(g, seed + static_cast<std::uint64_t>(k), max_mode);
      ScalarField sum(g);
      for (int a = 1; a <= g.dim; ++a) sum += riesz_transform(riesz_transform(f, a), a);
      sum *= -1.0;
      worst = std::max(worst, rel_l2_error(sum, f));
    }
    table.add("riesz_composition", "sum_j R_j^2 = -I over " + std::to_string(fields) + " fields",
              worst, tol, worst <= tol);
  }
  {
    const ScalarField f = random_band_limited(g, seed + 101, max_mode);
    const ScalarField p = random_band_limited(g, seed + 202, max_mode);
    double worst = 0.0;
    for (int a = 1; a <= g.dim; ++a) {
      const ScalarField rf = riesz_transform(f, a);
      const ScalarField rp = riesz_transform(p, a);
      double ip1 = 0.0, ip2 = 0.0;
      for (std::int64_t i = 0; i < f.size(); ++i) {
        ip1 += rf[i] * p[i];
        ip2 += f[i] * rp[i];
      }
      worst = std::max(worst, std::abs(ip1 + ip2) * g.cell_measure());
    }
    table.add("riesz_antisymmetry", "<R_j f, g> = -<f, R_j g>", worst, tol, worst <= tol);
  }
  {
    const ScalarField f = random_band_limited(g, seed + 303, max_mode);
    const double direct = f.l2_norm();
    const double viaspec = spectral_l2(forward_fft(f));
    const double err = std::abs(direct - viaspec) / direct;
    table.add("parseval", "grid vs coefficient L2", err, 1e-12, err <= 1e-12);
  }

  fs::create_directories(com.out_dir);
  table.write_csv(fs::path(com.out_dir) / "riesz_check.csv");
  if (com.emit_json) {
    json j;
    j["grid"] = {{"d", g.dim}, {"n", g.n}, {"L", g.box}};
    j["all_pass"] = table.all_pass;
    std::ofstream(fs::path(com.out_dir) / "riesz_check.json") << j.dump(2) << "\n";
  }
  return table.all_pass ? 0 : 1;
}

// ----------------------------------------------------------- muckenhoupt-scan

int run_muckenhoupt(const Common& com) {
  const Config cfg = load_config(com.config_path, com.overrides);
  apply_threads(com);
  const int d = cfg.integer("d", 3);
  const double delta = cfg.num("delta", 2.0);
  const double p = cfg.num("p", 2.0);
  const double centers_max = cfg.num("centers_max", 100.0);
  const double centers_step = cfg.num("centers_step", 1.0);
  const double radii_min = cfg.num("radii_min", 0.125);
  const double radii_max = cfg.num("radii_max", 64.0);
  const int radii_count = cfg.integer("radii_count", 10);

  std::vector<double> centers;
  for (double c = 0.0; c <= centers_max + 1e-12; c += centers_step) centers.push_back(c);
  std::vector<double> radii;
  for (int i = 0; i < radii_count; ++i)
    radii.push_back(radii_min * std::pow(radii_max / radii_min,
                                         radii_count == 1 ? 0.0 : static_cast<double>(i) / (radii_count - 1)));

  const WeightSpec w{d, delta, p};
  const MuckenhouptReport rep = muckenhoupt_scan(w, p, centers, radii);

  std::cout << "muckenhoupt-scan d=" << d << " delta=" << format_double(delta)
            << " p=" << format_double(p) << ": " << rep.samples.size()
            << " samples, sup=" << format_double(rep.sampled_sup)
            << (rep.all_pass ? " (all bounds hold)" : " (BOUND VIOLATION)") << "\n";

  fs::create_directories(com.out_dir);
  {
    CsvWriter csv(fs::path(com.out_dir) / "muckenhoupt.csv");
    csv.row({"center", "radius", "case", "value", "bound", "pass"});
    for (const auto& s : rep.samples)
      csv.row({format_double(s.center_dist), format_double(s.radius), to_string(s.proof_case),
               format_double(s.value), std::isnan(s.bound) ? "" : format_double(s.bound),
               s.pass ? "true" : "false"});
  }
  if (com.emit_json) {
    json j;
    j["d"] = d;
    j["delta"] = delta;
    j["p"] = p;
    j["samples"] = rep.samples.size();
    j["sampled_sup"] = rep.sampled_sup;
    j["all_pass"] = rep.all_pass;
    std::ofstream(fs::path(com.out_dir) / "muckenhoupt.json") << j.dump(2) << "\n";
  }
  return rep.all_pass ? 0 : 1;
}

// ----------------------------------------------------------- pressure-verify

int run_pressure_verify(const Common& com) {
  const Config cfg = load_config(com.config_path, com.overrides);
  apply_threads(com);
  const std::string preset = cfg.str("preset", "taylor-green");
  CheckTable table;
  json report;
  report["method"] = preset;

  if (preset == "zero") {
    const GridSpec g = grid_from(cfg, 2, 64);
    const VectorField u(g);
    const TensorField F(g);
    const double rp = riesz_pressure(u, F).linf_norm();
    const double pp = poisson_pressure(u, F).linf_norm();
    table.add("zero_data", "riesz and poisson vanish", std::max(rp, pp), 1e-14,
              std::max(rp, pp) <= 1e-14);
    report["grid"] = {{"d", g.dim}, {"n", g.n}, {"L", g.box}};
  } else if (preset == "taylor-green") {
    const GridSpec g = grid_from(cfg, 2, 128);
    const VectorField u = taylor_green_2d(g);
    const TensorField F(g);
    const ScalarField pr = riesz_pressure(u, F);
    const ScalarField pp = poisson_pressure(u, F);
    const double k = kTau / g.box;
    ScalarField exact = field_from_function(g, [&](const std::array<double, 3>& x) {
      return -0.25 * (std::cos(2.0 * k * x[0]) + std::cos(2.0 * k * x[1]));
    });
    exact.subtract_mean();
    const double d1 = rel_l2_error(pr, pp);
    const double d2 = rel_l2_error(pr, exact);
    table.add("riesz_vs_poisson", "identical multipliers", d1, 1e-12, d1 <= 1e-12);
    table.add("taylor_green_closed_form", "-(1/4)(cos 2x1 + cos 2x2)", d2, 1e-10, d2 <= 1e-10);
    report["grid"] = {{"d", g.dim}, {"n", g.n}, {"L", g.box}};
    report["relative_discrepancies"] = {{"riesz_vs_poisson", d1}, {"riesz_vs_exact", d2}};
    report["constants"] = {{"pressure_linf", pr.linf_norm()}, {"velocity_linf", u.linf_norm()}};
  } else if (preset == "gaussian-bump") {
    const GridSpec g = grid_from(cfg, 2, 128);
    const GreenTestData data = green_cross_check_data(g);
    const ScalarField pr = riesz_pressure(data.u, data.F);
    const ScalarField pp = poisson_pressure(data.u, data.F);
    const double d1 = rel_l2_error(pr, pp);
    table.add("riesz_vs_poisson", "identical multipliers", d1, 1e-12, d1 <= 1e-12);

    const CutoffSpec phi{cfg.num("plateau", g.box / 24.0), cfg.num("phi_support", g.box / 8.0)};
    const ScalarField pg = green_convolution_pressure(data.u, data.F, phi);
    const double d2 = inner_halfbox_rel_l2(pg, pr);
    table.add("green_vs_riesz", "inner half-box, constant-adjusted", d2, 1e-3, d2 <= 1e-3);

    const CutoffSpec phi2{2.0 * phi.plateau_radius, phi.support_radius};
    const ScalarField pg2 = green_convolution_pressure(data.u, data.F, phi2);
    const double d3 = inner_halfbox_rel_l2(pg2, pg);
    table.add("cutoff_independence", "plateau doubled", d3, 1e-3, d3 <= 1e-3);
    report["grid"] = {{"d", g.dim}, {"n", g.n}, {"L", g.box}};
    report["relative_discrepancies"] = {
        {"riesz_vs_poisson", d1}, {"riesz_vs_green", d2}, {"cutoff_independence", d3}};
    report["constants"] = {{"pressure_linf", pr.linf_norm()},
                           {"velocity_linf", data.u.linf_norm()},
                           {"cutoff_plateau", phi.plateau_radius},
                           {"cutoff_support", phi.support_radius}};
  } else {
    throw std::invalid_argument("pressure-verify: unknown preset " + preset);
  }

  fs::create_directories(com.out_dir);
  table.write_csv(fs::path(com.out_dir) / "pressure_verify.csv");
  if (com.emit_json)
    std::ofstream(fs::path(com.out_dir) / "pressure_verify.json") << report.dump(2) << "\n";
  return table.all_pass ? 0 : 1;
}

// ------------------------------------------------------------------- ns-run

int run_ns(const Common& com) {
  const Config cfg = load_config(com.config_path, com.overrides);
  apply_threads(com);
  const std::string preset = cfg.str("preset", "taylor-green2d");
  SimConfig sim;
  sim.grid = grid_from(cfg, preset == "taylor-green3d" ? 3 : 2,
                       preset == "taylor-green3d" ? 32 : 64);
  sim.dt = cfg.num("dt", 1e-3);
  sim.horizon = cfg.num("T", 0.1);
  sim.viscosity = cfg.num("viscosity", 1.0);
  sim.snapshot_stride = cfg.integer("stride", 1);
  sim.record_gamma = cfg.num("gamma", 1.0);

  VectorField u0(sim.grid);
  if (preset == "taylor-green2d")
    u0 = taylor_green_2d(sim.grid, cfg.num("amplitude", 1.0));
  else if (preset == "taylor-green3d")
    u0 = taylor_green_3d(sim.grid, cfg.num("amplitude", 1.0));
  else if (preset == "shear")
    u0.comp(0) = field_from_function(sim.grid, [&](const std::array<double, 3>& x) {
      return cfg.num("amplitude", 1.0) * std::sin(kTau / sim.grid.box * x[1]);
    });
  else
    throw std::invalid_argument("ns-run: unknown preset " + preset);

  std::cout << "ns-run " << preset << " n=" << sim.grid.n << " T=" << format_double(sim.horizon)
            << " dt=" << format_double(sim.dt) << "\n";
  const Trajectory traj = run(sim, u0);

  double max_div = 0.0;
  for (const auto& s : traj.u.samples) max_div = std::max(max_div, divergence(s).linf_norm());
  std::cout << "  snapshots=" << traj.u.samples.size() << " max|div|=" << format_double(max_div)
            << " sup||u||_w=" << format_double(traj.norms.sup_u) << "\n";

  const fs::path dir = fs::path(com.out_dir) / cfg.str("name", "traj");
  save_trajectory(dir, traj);
  std::cout << "  trajectory written to " << dir.string() << "\n";
  return 0;
}

// ------------------------------------------------------------- mollify-check

int run_mollify(const Common& com) {
  const Config cfg = load_config(com.config_path, com.overrides);
  apply_threads(com);
  const std::string traj_dir = cfg.str("traj", (fs::path(com.out_dir) / "traj").string());
  const Trajectory traj = load_trajectory(traj_dir);
  const double T = traj.u.time(traj.u.samples.size() - 1);
  const double t = cfg.num("t", 0.5 * T);
  const GridSpec& g = traj.config.grid;

  SpaceTimeMollifier base{standard_bump_1d(cfg.num("alpha_support", 0.4 * T)),
                          standard_bump(g.dim, cfg.num("beta_support", g.box / 6.0))};
  const std::vector<double> eps = cfg.list("eps", {1.0, 0.5, 0.25});
  // the quadrature floor depends on the snapshot density inside the alpha
  // window; the default matches the bundled ns-run presets
  const double floor = cfg.num("floor", 1e-4);

  CheckTable table;
  const TimeSeries<TensorField>* F = traj.F.samples.empty() ? nullptr : &traj.F;

  // consistency: A built with the trajectory's stored pressure
  const VectorField A = residual_field(traj.u, traj.q, F, base, t);
  const std::size_t k = static_cast<std::size_t>(std::llround((t - traj.q.t0) / traj.q.spacing));
  const double scale = gradient(traj.q.samples[k]).l2_norm();
  table.add("residual_floor", "A with the trajectory pressure", A.l2_norm(),
            floor * std::max(scale, 1.0), A.l2_norm() <= floor * std::max(scale, 1.0));

  // convergence: shift the pressure by a known mean-zero mode and track the
  // mollified defect against its exact limit
  TimeSeries<ScalarField> q_shift = traj.q;
  const ScalarField mode = field_from_function(
      g, [&](const std::array<double, 3>& x) { return std::sin(kTau / g.box * x[0]); });
  for (auto& s : q_shift.samples) s += mode;
  const EpsilonStudy study = epsilon_limit_study(traj.u, q_shift, F, base, eps, t);
  table.add("epsilon_monotone", "residual decreases with eps", study.monotone ? 1.0 : 0.0, 1.0,
            study.monotone);
  table.add("epsilon_order", "empirical order >= 1", study.final_order, 1.0,
            study.final_order >= 1.0);

  fs::create_directories(com.out_dir);
  {
    CsvWriter csv(fs::path(com.out_dir) / "mollify_convergence.csv");
    csv.row({"eps", "residual", "order"});
    for (const auto& r : study.rows)
      csv.row({format_double(r.eps), format_double(r.residual),
               std::isnan(r.order) ? "" : format_double(r.order)});
  }
  table.write_csv(fs::path(com.out_dir) / "mollify_check.csv");
  return table.all_pass ? 0 : 1;
}

// --------------------------------------------------------- estimates-report

int run_estimates(const Common& com) {
  const Config cfg = load_config(com.config_path, com.overrides);
  apply_threads(com);
  const int d = cfg.integer("d", 3);
  const double gamma = cfg.num("gamma", 2.0);
  const std::uint64_t seed = cfg.has("seed") ? static_cast<std::uint64_t>(cfg.num("seed", 42)) : com.seed;

  CheckTable table;
  fs::create_directories(com.out_dir);
  CsvWriter csv(fs::path(com.out_dir) / "estimates_report.csv");
  csv.row({"check", "params", "lhs", "rhs", "pass"});

  const double upper = admissible_r_upper(d, gamma);
  const double r = cfg.has("r") ? cfg.num("r", 0.0) : 0.5 * (1.0 + upper);
  const ExponentSet e = solve_exponents(d, gamma, r);
  const ExponentSet se = select_sigma_eta(d, gamma);
  std::cout << "exponents d=" << d << " gamma=" << format_double(gamma)
            << ": r=" << format_double(r) << " a=" << format_double(e.a)
            << " b=" << format_double(e.b) << " sigma=" << format_double(se.sigma)
            << " eta=" << format_double(se.eta) << "\n";
  csv.row({"solve_exponents", "r=" + format_double(r), format_double(e.a), format_double(e.b),
           "true"});
  csv.row({"select_sigma_eta", "gamma=" + format_double(gamma), format_double(se.sigma),
           format_double(se.eta), "true"});

  // randomized inequality suites on a small corpus
  const GridSpec g = grid_from(cfg, d, d == 2 ? 64 : 16);
  const int count = cfg.integer("corpus", 20);
  const WeightSpec w{d, gamma, {}};
  bool holder_ok = true, embed_ok = true;
  for (int kx = 0; kx < count; ++kx) {
    const ScalarField ui = random_band_limited(g, seed + 11 * static_cast<std::uint64_t>(kx), g.n / 4);
    const ScalarField uj = random_band_limited(g, seed + 13 * static_cast<std::uint64_t>(kx) + 7, g.n / 4);
    const InequalityCheck hc = holder_product_check(ui, uj, w, e.r, e.b);
    holder_ok = holder_ok && hc.pass;
    ExponentSet full = se;
    const InequalityCheck ec = sum_space_embedding_check(ui, uj, full);
    embed_ok = embed_ok && ec.pass;
  }
  table.add("holder_suite", std::to_string(count) + " corpus members", holder_ok ? 1.0 : 0.0, 1.0,
            holder_ok);
  table.add("sum_space_suite", std::to_string(count) + " corpus members", embed_ok ? 1.0 : 0.0,
            1.0, embed_ok);
  csv.row({"holder_suite", "corpus=" + std::to_string(count), holder_ok ? "1" : "0", "1",
           holder_ok ? "true" : "false"});
  csv.row({"sum_space_suite", "corpus=" + std::to_string(count), embed_ok ? "1" : "0", "1",
           embed_ok ? "true" : "false"});

  if (com.emit_json) {
    json j;
    j["d"] = d;
    j["gamma"] = gamma;
    j["r"] = r;
    j["a"] = e.a;
    j["b"] = e.b;
    j["sigma"] = se.sigma;
    j["eta"] = se.eta;
    j["all_pass"] = table.all_pass;
    std::ofstream(fs::path(com.out_dir) / "estimates_report.json") << j.dump(2) << "\n";
  }
  return table.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral verification lab for weighted Riesz-transform pressure analysis"};
  app.require_subcommand(1);

  Common com;
  std::string cmd;
  auto* c1 = app.add_subcommand("riesz-check", "Fourier-multiplier identity suite");
  auto* c2 = app.add_subcommand("muckenhoupt-scan", "reverse-Holder functional over a lattice");
  auto* c3 = app.add_subcommand("pressure-verify", "cross-check the pressure reconstructions");
  auto* c4 = app.add_subcommand("ns-run", "integrate a trajectory and persist it");
  auto* c5 = app.add_subcommand("mollify-check", "mollified defect and eps-limit study");
  auto* c6 = app.add_subcommand("estimates-report", "exponent arithmetic and inequality suites");
  for (auto* sub : {c1, c2, c3, c4, c5, c6}) add_common(sub, com);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c1->parsed()) return run_riesz_check(com);
    if (c2->parsed()) return run_muckenhoupt(com);
    if (c3->parsed()) return run_pressure_verify(com);
    if (c4->parsed()) return run_ns(com);
    if (c5->parsed()) return run_mollify(com);
    if (c6->parsed()) return run_estimates(com);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
