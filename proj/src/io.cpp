#include "rieszlab/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace rieszlab {

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

using nlohmann::json;

void write_snapshot(const std::filesystem::path& base, const Snapshot& snap) {
  if (snap.components.empty() || snap.components.size() != snap.component_names.size())
    throw std::invalid_argument("write_snapshot: component/name mismatch");
  std::filesystem::path raw = base;
  raw += ".f64";
  std::ofstream out(raw, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + raw.string());
  for (const ScalarField& f : snap.components) {
    require_same_grid(f.grid(), snap.grid, "write_snapshot");
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(sizeof(double) * f.values().size()));
  }
  out.close();

  json side;
  side["d"] = snap.grid.dim;
  side["n"] = snap.grid.n;
  side["L"] = snap.grid.box;
  side["component_names"] = snap.component_names;
  side["time"] = snap.time;
  std::filesystem::path meta = base;
  meta += ".json";
  std::ofstream js(meta, std::ios::trunc);
  if (!js) throw std::runtime_error("write_snapshot: cannot open " + meta.string());
  js << side.dump(2) << "\n";
}

Snapshot read_snapshot(const std::filesystem::path& base) {
  std::filesystem::path meta = base;
  meta += ".json";
  std::ifstream js(meta);
  if (!js) throw std::runtime_error("read_snapshot: cannot open " + meta.string());
  json side = json::parse(js);

  Snapshot snap;
  snap.grid = make_grid(side.at("d").get<int>(), side.at("n").get<int>(), side.at("L").get<double>());
  snap.time = side.at("time").get<double>();
  snap.component_names = side.at("component_names").get<std::vector<std::string>>();

  std::filesystem::path raw = base;
  raw += ".f64";
  std::ifstream in(raw, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + raw.string());
  for (std::size_t c = 0; c < snap.component_names.size(); ++c) {
    ScalarField f(snap.grid);
    in.read(reinterpret_cast<char*>(f.values().data()),
            static_cast<std::streamsize>(sizeof(double) * f.values().size()));
    if (!in) throw std::runtime_error("read_snapshot: truncated data in " + raw.string());
    snap.components.push_back(std::move(f));
  }
  return snap;
}

namespace {

std::string snap_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06zu", k);
  return buf;
}

}  // namespace

void save_trajectory(const std::filesystem::path& dir, const Trajectory& traj) {
  std::filesystem::create_directories(dir);
  const GridSpec& g = traj.config.grid;
  const bool forced = !traj.F.samples.empty();

  for (std::size_t k = 0; k < traj.u.samples.size(); ++k) {
    Snapshot snap;
    snap.grid = g;
    snap.time = traj.u.time(k);
    for (int a = 0; a < g.dim; ++a) {
      snap.component_names.push_back("u" + std::to_string(a + 1));
      snap.components.push_back(traj.u.samples[k].comp(a));
    }
    snap.component_names.push_back("q");
    snap.components.push_back(traj.q.samples[k]);
    if (forced) {
      for (int i = 0; i < g.dim; ++i)
        for (int j = 0; j < g.dim; ++j) {
          snap.component_names.push_back("F" + std::to_string(i + 1) + std::to_string(j + 1));
          snap.components.push_back(traj.F.samples[k].comp(i, j));
        }
    }
    write_snapshot(dir / snap_name(k), snap);
  }

  json man;
  man["d"] = g.dim;
  man["n"] = g.n;
  man["L"] = g.box;
  man["dt"] = traj.config.dt;
  man["horizon"] = traj.config.horizon;
  man["viscosity"] = traj.config.viscosity;
  man["snapshot_stride"] = traj.config.snapshot_stride;
  man["record_gamma"] = traj.config.record_gamma;
  man["snapshot_count"] = traj.u.samples.size();
  man["snapshot_spacing"] = traj.u.spacing;
  man["forced"] = forced;
  man["norms"] = {{"sup_u_weighted_l2", traj.norms.sup_u},
                  {"int_grad_sq", traj.norms.int_grad_sq},
                  {"int_sum_sq", traj.norms.int_sum_sq}};
  if (traj.u.samples.size() >= 3) {
    const std::vector<double> res = momentum_residual(traj, PressureChoice::Stored);
    man["momentum_residual_max"] = *std::max_element(res.begin(), res.end());
  }
  std::ofstream js(dir / "manifest.json", std::ios::trunc);
  if (!js) throw std::runtime_error("save_trajectory: cannot write manifest");
  js << man.dump(2) << "\n";
}

Trajectory load_trajectory(const std::filesystem::path& dir) {
  std::ifstream js(dir / "manifest.json");
  if (!js) throw std::runtime_error("load_trajectory: missing manifest in " + dir.string());
  json man = json::parse(js);

  Trajectory traj;
  traj.config.grid =
      make_grid(man.at("d").get<int>(), man.at("n").get<int>(), man.at("L").get<double>());
  traj.config.dt = man.at("dt").get<double>();
  traj.config.horizon = man.at("horizon").get<double>();
  traj.config.viscosity = man.at("viscosity").get<double>();
  traj.config.snapshot_stride = man.at("snapshot_stride").get<int>();
  traj.config.record_gamma = man.at("record_gamma").get<double>();
  traj.norms.sup_u = man.at("norms").at("sup_u_weighted_l2").get<double>();
  traj.norms.int_grad_sq = man.at("norms").at("int_grad_sq").get<double>();
  traj.norms.int_sum_sq = man.at("norms").at("int_sum_sq").get<double>();

  const std::size_t count = man.at("snapshot_count").get<std::size_t>();
  const bool forced = man.at("forced").get<bool>();
  const GridSpec& g = traj.config.grid;
  traj.u.spacing = man.at("snapshot_spacing").get<double>();
  traj.q.spacing = traj.u.spacing;
  traj.F.spacing = traj.u.spacing;

  for (std::size_t k = 0; k < count; ++k) {
    Snapshot snap = read_snapshot(dir / snap_name(k));
    VectorField u(g);
    for (int a = 0; a < g.dim; ++a) u.comp(a) = snap.components.at(static_cast<std::size_t>(a));
    traj.u.samples.push_back(std::move(u));
    traj.q.samples.push_back(snap.components.at(static_cast<std::size_t>(g.dim)));
    if (forced) {
      TensorField F(g);
      for (int i = 0; i < g.dim; ++i)
        for (int j = 0; j < g.dim; ++j)
          F.comp(i, j) =
              snap.components.at(static_cast<std::size_t>(g.dim + 1 + i * g.dim + j));
      traj.F.samples.push_back(std::move(F));
    }
  }
  return traj;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::filesystem::path& path) : impl_(new Impl) {
  impl_->out.open(path, std::ios::trunc);
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("CsvWriter: cannot open " + path.string());
  }
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string& c = cells[i];
    const bool quote = c.find_first_of(",\"\n\r") != std::string::npos;
    if (i) impl_->out << ',';
    if (quote) {
      impl_->out << '"';
      for (char ch : c) {
        if (ch == '"') impl_->out << '"';
        impl_->out << ch;
      }
      impl_->out << '"';
    } else {
      impl_->out << c;
    }
  }
  impl_->out << "\r\n";
}

}  // namespace rieszlab
