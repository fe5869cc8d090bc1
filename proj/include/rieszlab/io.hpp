#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rieszlab/grid.hpp"
#include "rieszlab/simulate.hpp"

namespace rieszlab {

/// One multi-component snapshot: raw little-endian doubles (components
/// concatenated, each row-major) in <base>.f64 plus a JSON sidecar
/// <base>.json with {d, n, L, component_names, time}.
struct Snapshot {
  GridSpec grid;
  double time = 0.0;
  std::vector<std::string> component_names;
  std::vector<ScalarField> components;
};

void write_snapshot(const std::filesystem::path& base, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& base);

/// Trajectory directory: manifest.json plus snap_INDEX.{f64,json} files.
void save_trajectory(const std::filesystem::path& dir, const Trajectory& traj);
Trajectory load_trajectory(const std::filesystem::path& dir);

/// Deterministic double formatting used by every report ("%.17g").
std::string format_double(double v);

/// RFC-4180-style CSV writer: fields containing comma, quote or newline are
/// quoted, embedded quotes doubled.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& cells);

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace rieszlab
