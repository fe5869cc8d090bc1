#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rieszlab {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTau = 2.0 * kPi;

/// Origin-centered periodic box with n points per axis.
/// Grid coordinates are x_k = -L/2 + k*L/n; Fourier frequencies are
/// xi = 2*pi*m/L with integer mode numbers m in [-n/2, n/2).
struct GridSpec {
  int dim = 2;    // 2 or 3
  int n = 64;     // points per axis, power of two, >= 8
  double box = kTau;

  double spacing() const { return box / n; }
  double cell_measure() const {
    double h = spacing();
    return dim == 2 ? h * h : h * h * h;
  }
  std::int64_t point_count() const {
    std::int64_t nn = n;
    return dim == 2 ? nn * nn : nn * nn * nn;
  }
  double coord(int k) const { return -0.5 * box + k * spacing(); }
  double frequency(int mode) const { return kTau * mode / box; }

  bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(int dim, int n, double box = kTau);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

/// Real samples on a GridSpec, stored row-major (last axis contiguous).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, double fill = 0.0)
      : grid_(g), v_(static_cast<std::size_t>(g.point_count()), fill) {}

  const GridSpec& grid() const { return grid_; }
  std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }
  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }
  double& operator[](std::int64_t i) { return v_[static_cast<std::size_t>(i)]; }
  double operator[](std::int64_t i) const { return v_[static_cast<std::size_t>(i)]; }

  std::int64_t flat(int i, int j) const { return static_cast<std::int64_t>(i) * grid_.n + j; }
  std::int64_t flat(int i, int j, int k) const {
    return (static_cast<std::int64_t>(i) * grid_.n + j) * grid_.n + k;
  }
  double& at(int i, int j) { return v_[static_cast<std::size_t>(flat(i, j))]; }
  double& at(int i, int j, int k) { return v_[static_cast<std::size_t>(flat(i, j, k))]; }
  double at(int i, int j) const { return v_[static_cast<std::size_t>(flat(i, j))]; }
  double at(int i, int j, int k) const { return v_[static_cast<std::size_t>(flat(i, j, k))]; }

  double mean() const;
  void subtract_mean();
  double linf_norm() const;
  double l2_norm() const;   // sqrt(h^d * sum f^2), box L^2 norm
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  void add_scaled(const ScalarField& o, double s);

 private:
  GridSpec grid_;
  std::vector<double> v_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double s);
ScalarField pointwise_product(const ScalarField& a, const ScalarField& b);

/// max_i |a_i - b_i| / max(1, max|b|): relative sup discrepancy.
double rel_linf_error(const ScalarField& a, const ScalarField& b);
/// ||a - b||_2 / ||b||_2 (0/0 -> 0).
double rel_l2_error(const ScalarField& a, const ScalarField& b);

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const GridSpec& g) : comps_(g.dim, ScalarField(g)) {}

  const GridSpec& grid() const { return comps_.at(0).grid(); }
  int dim() const { return static_cast<int>(comps_.size()); }
  ScalarField& comp(int i) { return comps_.at(static_cast<std::size_t>(i)); }
  const ScalarField& comp(int i) const { return comps_.at(static_cast<std::size_t>(i)); }

  double linf_norm() const;
  double l2_norm() const;
  bool all_finite() const;
  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  void add_scaled(const VectorField& o, double s);

 private:
  std::vector<ScalarField> comps_;
};

double rel_l2_error(const VectorField& a, const VectorField& b);

class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(const GridSpec& g) : d_(g.dim), comps_(g.dim * g.dim, ScalarField(g)) {}

  const GridSpec& grid() const { return comps_.at(0).grid(); }
  int dim() const { return d_; }
  ScalarField& comp(int i, int j) { return comps_.at(static_cast<std::size_t>(i * d_ + j)); }
  const ScalarField& comp(int i, int j) const {
    return comps_.at(static_cast<std::size_t>(i * d_ + j));
  }
  bool all_finite() const;
  TensorField& operator+=(const TensorField& o);
  TensorField& operator*=(double s);

 private:
  int d_ = 0;
  std::vector<ScalarField> comps_;
};

/// u (x) u, exactly symmetric by construction.
TensorField outer_product(const VectorField& u);
TensorField symmetrize(const TensorField& f);

/// Uniformly sampled snapshots; each sample stands for a time slab of
/// width `spacing` (rectangle rule), so sum of slabs = horizon().
template <class T>
struct TimeSeries {
  double t0 = 0.0;
  double spacing = 0.0;
  std::vector<T> samples;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t i) const { return t0 + spacing * static_cast<double>(i); }
  double horizon() const { return spacing * static_cast<double>(samples.size()); }
};

/// Visit every grid point: f(flat_index, coords) with coords[2] = 0 in 2-D.
template <class F>
void for_each_point(const GridSpec& g, F&& f) {
  if (g.dim == 2) {
    std::int64_t idx = 0;
    for (int i = 0; i < g.n; ++i) {
      const double x = g.coord(i);
      for (int j = 0; j < g.n; ++j, ++idx) f(idx, std::array<double, 3>{x, g.coord(j), 0.0});
    }
  } else {
    std::int64_t idx = 0;
    for (int i = 0; i < g.n; ++i) {
      const double x = g.coord(i);
      for (int j = 0; j < g.n; ++j) {
        const double y = g.coord(j);
        for (int k = 0; k < g.n; ++k, ++idx) f(idx, std::array<double, 3>{x, y, g.coord(k)});
      }
    }
  }
}

template <class F>
ScalarField field_from_function(const GridSpec& g, F&& f) {
  ScalarField out(g);
  for_each_point(g, [&](std::int64_t idx, const std::array<double, 3>& x) { out[idx] = f(x); });
  return out;
}

inline double radius_of(const std::array<double, 3>& x) {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

}  // namespace rieszlab
