#pragma once

#include "rieszlab/fft.hpp"
#include "rieszlab/grid.hpp"

namespace rieszlab {

/// Fourier-multiplier operator: one complex symbol value per stored mode,
/// with an explicit value at the zero mode.
///
/// Conventions shared by every factory here:
///  - odd symbols (first derivatives, Riesz transforms) vanish on their own
///    Nyquist plane |m_axis| = n/2, which keeps outputs exactly real;
///  - |xi|^2 in denominators is the full squared frequency;
///  - the zero mode of Riesz and inverse-Laplacian symbols is 0, so those
///    outputs are mean-free.
class MultiplierOp {
 public:
  static MultiplierOp identity(const GridSpec& g);
  static MultiplierOp derivative(const GridSpec& g, int axis);
  static MultiplierOp riesz(const GridSpec& g, int axis);
  static MultiplierOp laplacian(const GridSpec& g);
  static MultiplierOp inverse_laplacian(const GridSpec& g);

  const GridSpec& grid() const { return grid_; }
  std::span<const std::complex<double>> symbol() const { return symbol_; }

  ScalarField apply(const ScalarField& f) const;
  void apply_in_place(Spectrum& s) const;

 private:
  MultiplierOp(const GridSpec& g, std::vector<std::complex<double>> sym)
      : grid_(g), symbol_(std::move(sym)) {}
  GridSpec grid_;
  std::vector<std::complex<double>> symbol_;
};

/// Frequency of an odd (sign-carrying) symbol factor: zero on the Nyquist
/// plane, 2*pi*m/L otherwise.
double odd_frequency(const GridSpec& g, int mode);
/// Full squared frequency |xi|^2 of a stored mode.
double squared_frequency(const GridSpec& g, const std::array<int, 3>& m);

ScalarField riesz_transform(const ScalarField& f, int axis);   // axis in [1, d]
ScalarField inverse_laplacian(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
VectorField leray_project(const VectorField& v);

/// Zero every coefficient with any |m_axis| > max_mode.
void truncate_modes(Spectrum& s, int max_mode);

}  // namespace rieszlab
