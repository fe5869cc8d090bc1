#include "rieszlab/grid.hpp"

#include <algorithm>
#include <limits>

namespace rieszlab {

GridSpec make_grid(int dim, int n, double box) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("grid dimension must be 2 or 3");
  if (n < 8) throw std::invalid_argument("grid resolution must be at least 8");
  if ((n & (n - 1)) != 0) throw std::invalid_argument("grid resolution must be a power of two");
  if (!(box > 0.0) || !std::isfinite(box)) throw std::invalid_argument("box side must be positive");
  return GridSpec{dim, n, box};
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

double ScalarField::mean() const {
  double s = 0.0;
  for (double x : v_) s += x;
  return v_.empty() ? 0.0 : s / static_cast<double>(v_.size());
}

void ScalarField::subtract_mean() {
  const double m = mean();
  for (double& x : v_) x -= m;
}

double ScalarField::linf_norm() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double ScalarField::l2_norm() const {
  double s = 0.0;
  for (double x : v_) s += x * x;
  return std::sqrt(s * grid_.cell_measure());
}

bool ScalarField::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "field sum");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "field difference");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

void ScalarField::add_scaled(const ScalarField& o, double s) {
  require_same_grid(grid_, o.grid_, "field axpy");
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += s * o.v_[i];
}

ScalarField operator+(ScalarField a, const ScalarField& b) {
  a += b;
  return a;
}

ScalarField operator-(ScalarField a, const ScalarField& b) {
  a -= b;
  return a;
}

ScalarField operator*(ScalarField a, double s) {
  a *= s;
  return a;
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise product");
  ScalarField out(a.grid());
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] * bv[i];
  return out;
}

double rel_linf_error(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "rel_linf_error");
  double diff = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  return diff / std::max(1.0, b.linf_norm());
}

double rel_l2_error(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "rel_l2_error");
  double num = 0.0, den = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    num += d * d;
    den += b[i] * b[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

double VectorField::linf_norm() const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, c.linf_norm());
  return m;
}

double VectorField::l2_norm() const {
  double s = 0.0;
  for (const auto& c : comps_) {
    const double n = c.l2_norm();
    s += n * n;
  }
  return std::sqrt(s);
}

bool VectorField::all_finite() const {
  for (const auto& c : comps_)
    if (!c.all_finite()) return false;
  return true;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int i = 0; i < dim(); ++i) comp(i) += o.comp(i);
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (int i = 0; i < dim(); ++i) comp(i) -= o.comp(i);
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : comps_) c *= s;
  return *this;
}

void VectorField::add_scaled(const VectorField& o, double s) {
  for (int i = 0; i < dim(); ++i) comp(i).add_scaled(o.comp(i), s);
}

double rel_l2_error(const VectorField& a, const VectorField& b) {
  double num = 0.0, den = 0.0;
  for (int c = 0; c < a.dim(); ++c) {
    for (std::int64_t i = 0; i < a.comp(c).size(); ++i) {
      const double d = a.comp(c)[i] - b.comp(c)[i];
      num += d * d;
      den += b.comp(c)[i] * b.comp(c)[i];
    }
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

bool TensorField::all_finite() const {
  for (const auto& c : comps_)
    if (!c.all_finite()) return false;
  return true;
}

TensorField& TensorField::operator+=(const TensorField& o) {
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
  return *this;
}

TensorField& TensorField::operator*=(double s) {
  for (auto& c : comps_) c *= s;
  return *this;
}

TensorField outer_product(const VectorField& u) {
  TensorField t(u.grid());
  const int d = u.dim();
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      ScalarField prod = pointwise_product(u.comp(i), u.comp(j));
      if (j > i) t.comp(j, i) = prod;  // exact symmetry: shared values
      t.comp(i, j) = std::move(prod);
    }
  return t;
}

TensorField symmetrize(const TensorField& f) {
  TensorField t(f.grid());
  const int d = f.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      ScalarField s = f.comp(i, j);
      s += f.comp(j, i);
      s *= 0.5;
      t.comp(i, j) = std::move(s);
    }
  return t;
}

}  // namespace rieszlab
