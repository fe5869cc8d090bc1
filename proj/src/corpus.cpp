#include "rieszlab/corpus.hpp"

#include <random>

#include "rieszlab/spectral.hpp"

namespace rieszlab {

ScalarField random_band_limited(const GridSpec& g, std::uint64_t seed, int max_mode) {
  if (max_mode < 1 || max_mode >= g.n / 2) throw std::invalid_argument("max_mode out of range");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ScalarField noise(g);
  for (std::int64_t i = 0; i < noise.size(); ++i) noise[i] = gauss(rng);
  Spectrum s = forward_fft(noise);
  truncate_modes(s, max_mode);
  s.coeff[0] = 0.0;
  ScalarField f = inverse_fft(s);
  const double norm = f.l2_norm();
  if (norm > 0.0) f *= 1.0 / norm;
  return f;
}

VectorField random_vector(const GridSpec& g, std::uint64_t seed, int max_mode) {
  VectorField v(g);
  for (int a = 0; a < g.dim; ++a)
    v.comp(a) = random_band_limited(g, seed * 1000003ULL + static_cast<std::uint64_t>(a), max_mode);
  return v;
}

VectorField random_divergence_free(const GridSpec& g, std::uint64_t seed, int max_mode) {
  VectorField v = leray_project(random_vector(g, seed, max_mode));
  const double norm = v.l2_norm();
  if (norm > 0.0) v *= 1.0 / norm;
  return v;
}

TensorField random_tensor(const GridSpec& g, std::uint64_t seed, int max_mode) {
  TensorField t(g);
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j)
      t.comp(i, j) = random_band_limited(
          g, seed * 1000033ULL + static_cast<std::uint64_t>(i * 3 + j), max_mode);
  return t;
}

namespace {

// (1 - s^2)^m for s < 1, else 0
double poly_bump(double s2, int m) {
  const double q = 1.0 - s2;
  if (!(q > 0.0)) return 0.0;
  double v = 1.0;
  for (int i = 0; i < m; ++i) v *= q;
  return v;
}

}  // namespace

VectorField vortex_bump(const GridSpec& g, double support_radius, double amplitude,
                        const std::array<double, 3>& center) {
  if (!(support_radius > 0.0) || support_radius > 0.25 * g.box)
    throw std::invalid_argument("vortex_bump: support radius must lie in (0, L/4]");
  const double R = support_radius;
  // u = curl(psi e_z) = psi'(r)/r * (x2, -x1, 0); psi'(r)/r = -10 A/R^2 (1-s^2)^4
  auto ring = [&](double r2) { return -10.0 * amplitude / (R * R) * poly_bump(r2 / (R * R), 4); };
  VectorField u(g);
  u.comp(0) = field_from_function(g, [&](const std::array<double, 3>& x) {
    const std::array<double, 3> z{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
    return ring(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]) * z[1];
  });
  u.comp(1) = field_from_function(g, [&](const std::array<double, 3>& x) {
    const std::array<double, 3> z{x[0] - center[0], x[1] - center[1], x[2] - center[2]};
    return -ring(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]) * z[0];
  });
  return u;
}

TensorField isotropic_bump_tensor(const GridSpec& g, double support_radius, double amplitude) {
  if (!(support_radius > 0.0) || support_radius > 0.25 * g.box)
    throw std::invalid_argument("isotropic_bump_tensor: support radius must lie in (0, L/4]");
  ScalarField b = field_from_function(g, [&](const std::array<double, 3>& x) {
    const double r = radius_of(x);
    return amplitude * poly_bump(r * r / (support_radius * support_radius), 5);
  });
  TensorField F(g);
  for (int i = 0; i < g.dim; ++i) F.comp(i, i) = b;
  return F;
}

GreenTestData green_cross_check_data(const GridSpec& g) {
  GreenTestData data;
  data.u = vortex_bump(g, 0.24 * g.box, 1.0);
  data.F = isotropic_bump_tensor(g, 0.2 * g.box, -0.5);
  if (g.dim == 3) {
    // the z-vortex carries box moment int u (x) u = diag(m, m, 0); a
    // mass-m bump in F_33 makes the moment of u (x) u - F isotropic
    double m = 0.0;
    for (std::int64_t i = 0; i < data.u.comp(0).size(); ++i)
      m += data.u.comp(0)[i] * data.u.comp(0)[i];
    m *= g.cell_measure();
    ScalarField bump = field_from_function(g, [&](const std::array<double, 3>& x) {
      const double s = radius_of(x) / (0.2 * g.box);
      return poly_bump(s * s, 5);
    });
    double mass = 0.0;
    for (std::int64_t i = 0; i < bump.size(); ++i) mass += bump[i];
    mass *= g.cell_measure();
    bump *= -m / mass;
    data.F.comp(2, 2) += bump;
  }
  return data;
}

}  // namespace rieszlab
