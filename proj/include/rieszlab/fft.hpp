#pragma once

#include <complex>
#include <vector>

#include "rieszlab/grid.hpp"

namespace rieszlab {

/// Fourier coefficients of a real field in the real-to-complex half layout:
/// the last axis stores modes 0..n/2 only, conjugate symmetry supplies the
/// rest. Coefficients are normalized so that coeff[0] is the field mean.
struct Spectrum {
  GridSpec grid;
  std::vector<std::complex<double>> coeff;
};

std::int64_t spectrum_size(const GridSpec& g);

Spectrum forward_fft(const ScalarField& f);
ScalarField inverse_fft(const Spectrum& s);

/// Signed mode number for a full axis index (i = n/2 maps to -n/2).
inline int signed_mode(int i, int n) { return i < n / 2 ? i : i - n; }

/// Visit every stored mode: f(flat_index, mode_numbers) with m[2] = 0 in 2-D.
/// The last axis carries only m >= 0.
template <class F>
void for_each_mode(const GridSpec& g, F&& f) {
  const int n = g.n;
  const int nh = n / 2 + 1;
  if (g.dim == 2) {
    std::int64_t idx = 0;
    for (int i = 0; i < n; ++i) {
      const int m0 = signed_mode(i, n);
      for (int j = 0; j < nh; ++j, ++idx) f(idx, std::array<int, 3>{m0, j, 0});
    }
  } else {
    std::int64_t idx = 0;
    for (int i = 0; i < n; ++i) {
      const int m0 = signed_mode(i, n);
      for (int j = 0; j < n; ++j) {
        const int m1 = signed_mode(j, n);
        for (int k = 0; k < nh; ++k, ++idx) f(idx, std::array<int, 3>{m0, m1, k});
      }
    }
  }
}

/// Parseval sum: box L^2 norm computed from the coefficients.
double spectral_l2(const Spectrum& s);

}  // namespace rieszlab
