#include "rieszlab/spectral.hpp"

#include <functional>

namespace rieszlab {

namespace {

void require_axis(const GridSpec& g, int axis) {
  if (axis < 1 || axis > g.dim) throw std::invalid_argument("axis index out of range");
}

void require_finite(const ScalarField& f, const char* what) {
  if (!f.all_finite()) throw std::invalid_argument(std::string(what) + ": non-finite input");
}

std::vector<std::complex<double>> make_symbol(
    const GridSpec& g,
    const std::function<std::complex<double>(const std::array<int, 3>&)>& fn) {
  std::vector<std::complex<double>> sym(static_cast<std::size_t>(spectrum_size(g)));
  for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
    sym[static_cast<std::size_t>(idx)] = fn(m);
  });
  return sym;
}

}  // namespace

double odd_frequency(const GridSpec& g, int mode) {
  if (2 * std::abs(mode) == g.n) return 0.0;
  return g.frequency(mode);
}

double squared_frequency(const GridSpec& g, const std::array<int, 3>& m) {
  double s = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    const double xi = g.frequency(m[a]);
    s += xi * xi;
  }
  return s;
}

MultiplierOp MultiplierOp::identity(const GridSpec& g) {
  return MultiplierOp(g, make_symbol(g, [](const std::array<int, 3>&) {
                        return std::complex<double>(1.0, 0.0);
                      }));
}

MultiplierOp MultiplierOp::derivative(const GridSpec& g, int axis) {
  require_axis(g, axis);
  return MultiplierOp(g, make_symbol(g, [&](const std::array<int, 3>& m) {
                        return std::complex<double>(0.0, odd_frequency(g, m[axis - 1]));
                      }));
}

MultiplierOp MultiplierOp::riesz(const GridSpec& g, int axis) {
  require_axis(g, axis);
  return MultiplierOp(g, make_symbol(g, [&](const std::array<int, 3>& m) {
                        const double q = squared_frequency(g, m);
                        if (q == 0.0) return std::complex<double>(0.0, 0.0);
                        return std::complex<double>(0.0, odd_frequency(g, m[axis - 1]) / std::sqrt(q));
                      }));
}

MultiplierOp MultiplierOp::laplacian(const GridSpec& g) {
  return MultiplierOp(g, make_symbol(g, [&](const std::array<int, 3>& m) {
                        return std::complex<double>(-squared_frequency(g, m), 0.0);
                      }));
}

MultiplierOp MultiplierOp::inverse_laplacian(const GridSpec& g) {
  return MultiplierOp(g, make_symbol(g, [&](const std::array<int, 3>& m) {
                        const double q = squared_frequency(g, m);
                        if (q == 0.0) return std::complex<double>(0.0, 0.0);
                        return std::complex<double>(-1.0 / q, 0.0);
                      }));
}

ScalarField MultiplierOp::apply(const ScalarField& f) const {
  require_same_grid(grid_, f.grid(), "multiplier");
  Spectrum s = forward_fft(f);
  apply_in_place(s);
  return inverse_fft(s);
}

void MultiplierOp::apply_in_place(Spectrum& s) const {
  require_same_grid(grid_, s.grid, "multiplier");
  for (std::size_t i = 0; i < s.coeff.size(); ++i) s.coeff[i] *= symbol_[i];
}

ScalarField riesz_transform(const ScalarField& f, int axis) {
  require_axis(f.grid(), axis);
  require_finite(f, "riesz_transform");
  return MultiplierOp::riesz(f.grid(), axis).apply(f);
}

ScalarField inverse_laplacian(const ScalarField& f) {
  require_finite(f, "inverse_laplacian");
  return MultiplierOp::inverse_laplacian(f.grid()).apply(f);
}

ScalarField laplacian(const ScalarField& f) {
  require_finite(f, "laplacian");
  return MultiplierOp::laplacian(f.grid()).apply(f);
}

VectorField gradient(const ScalarField& f) {
  require_finite(f, "gradient");
  const GridSpec& g = f.grid();
  Spectrum s = forward_fft(f);
  VectorField out(g);
  for (int a = 0; a < g.dim; ++a) {
    Spectrum da = s;
    for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
      da.coeff[static_cast<std::size_t>(idx)] *=
          std::complex<double>(0.0, odd_frequency(g, m[a]));
    });
    out.comp(a) = inverse_fft(da);
  }
  return out;
}

ScalarField divergence(const VectorField& v) {
  const GridSpec& g = v.grid();
  for (int a = 1; a < g.dim; ++a) require_same_grid(g, v.comp(a).grid(), "divergence");
  Spectrum acc{g, std::vector<std::complex<double>>(static_cast<std::size_t>(spectrum_size(g)))};
  for (int a = 0; a < g.dim; ++a) {
    Spectrum s = forward_fft(v.comp(a));
    for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
      acc.coeff[static_cast<std::size_t>(idx)] +=
          std::complex<double>(0.0, odd_frequency(g, m[a])) *
          s.coeff[static_cast<std::size_t>(idx)];
    });
  }
  return inverse_fft(acc);
}

VectorField leray_project(const VectorField& v) {
  const GridSpec& g = v.grid();
  for (int a = 1; a < g.dim; ++a) require_same_grid(g, v.comp(a).grid(), "leray_project");
  std::vector<Spectrum> s(static_cast<std::size_t>(g.dim));
  for (int a = 0; a < g.dim; ++a) s[static_cast<std::size_t>(a)] = forward_fft(v.comp(a));
  // P = I - xi xi^T / |xi|^2 with the odd-frequency convention; modes whose
  // odd frequency vanishes entirely (zero mode, pure-Nyquist modes) are
  // already divergence-free and pass through.
  for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    double q = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      xi[a] = odd_frequency(g, m[a]);
      q += xi[a] * xi[a];
    }
    if (q == 0.0) return;
    std::complex<double> dot(0.0, 0.0);
    for (int a = 0; a < g.dim; ++a) dot += xi[a] * s[static_cast<std::size_t>(a)].coeff[static_cast<std::size_t>(idx)];
    for (int a = 0; a < g.dim; ++a)
      s[static_cast<std::size_t>(a)].coeff[static_cast<std::size_t>(idx)] -= xi[a] / q * dot;
  });
  VectorField out(g);
  for (int a = 0; a < g.dim; ++a) out.comp(a) = inverse_fft(s[static_cast<std::size_t>(a)]);
  return out;
}

void truncate_modes(Spectrum& s, int max_mode) {
  for_each_mode(s.grid, [&](std::int64_t idx, const std::array<int, 3>& m) {
    for (int a = 0; a < s.grid.dim; ++a) {
      if (std::abs(m[a]) > max_mode) {
        s.coeff[static_cast<std::size_t>(idx)] = 0.0;
        return;
      }
    }
  });
}

}  // namespace rieszlab
