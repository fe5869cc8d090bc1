#include "rieszlab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <memory>
#include <mutex>

namespace rieszlab {

std::int64_t spectrum_size(const GridSpec& g) {
  const std::int64_t n = g.n;
  const std::int64_t nh = g.n / 2 + 1;
  return g.dim == 2 ? n * nh : n * n * nh;
}

namespace {

// One FFTW plan pair with its own aligned buffers. Plans are pooled per
// (dim, n); execution on distinct pool entries is safe concurrently, and
// plan creation is serialized (the FFTW planner is not thread-safe).
struct PlanSet {
  int dim = 0;
  int n = 0;
  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  bool in_use = false;

  ~PlanSet() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (rbuf) fftw_free(rbuf);
    if (cbuf) fftw_free(cbuf);
  }
};

std::mutex g_pool_mutex;
std::vector<std::unique_ptr<PlanSet>>& pool() {
  static std::vector<std::unique_ptr<PlanSet>> p;
  return p;
}

PlanSet* acquire_plans(const GridSpec& g) {
  std::lock_guard<std::mutex> lock(g_pool_mutex);
  for (auto& ps : pool()) {
    if (!ps->in_use && ps->dim == g.dim && ps->n == g.n) {
      ps->in_use = true;
      return ps.get();
    }
  }
  auto ps = std::make_unique<PlanSet>();
  ps->dim = g.dim;
  ps->n = g.n;
  const std::int64_t np = g.point_count();
  const std::int64_t nc = spectrum_size(g);
  ps->rbuf = fftw_alloc_real(static_cast<std::size_t>(np));
  ps->cbuf = fftw_alloc_complex(static_cast<std::size_t>(nc));
  if (g.dim == 2) {
    ps->fwd = fftw_plan_dft_r2c_2d(g.n, g.n, ps->rbuf, ps->cbuf, FFTW_ESTIMATE);
    ps->bwd = fftw_plan_dft_c2r_2d(g.n, g.n, ps->cbuf, ps->rbuf, FFTW_ESTIMATE);
  } else {
    ps->fwd = fftw_plan_dft_r2c_3d(g.n, g.n, g.n, ps->rbuf, ps->cbuf, FFTW_ESTIMATE);
    ps->bwd = fftw_plan_dft_c2r_3d(g.n, g.n, g.n, ps->cbuf, ps->rbuf, FFTW_ESTIMATE);
  }
  ps->in_use = true;
  pool().push_back(std::move(ps));
  return pool().back().get();
}

void release_plans(PlanSet* ps) {
  std::lock_guard<std::mutex> lock(g_pool_mutex);
  ps->in_use = false;
}

struct PlanLease {
  PlanSet* ps;
  explicit PlanLease(const GridSpec& g) : ps(acquire_plans(g)) {}
  ~PlanLease() { release_plans(ps); }
  PlanLease(const PlanLease&) = delete;
  PlanLease& operator=(const PlanLease&) = delete;
};

}  // namespace

Spectrum forward_fft(const ScalarField& f) {
  const GridSpec& g = f.grid();
  PlanLease lease(g);
  std::memcpy(lease.ps->rbuf, f.values().data(), sizeof(double) * f.values().size());
  fftw_execute(lease.ps->fwd);
  Spectrum s{g, std::vector<std::complex<double>>(static_cast<std::size_t>(spectrum_size(g)))};
  const double scale = 1.0 / static_cast<double>(g.point_count());
  const fftw_complex* c = lease.ps->cbuf;
  for (std::size_t i = 0; i < s.coeff.size(); ++i)
    s.coeff[i] = std::complex<double>(c[i][0] * scale, c[i][1] * scale);
  return s;
}

ScalarField inverse_fft(const Spectrum& s) {
  const GridSpec& g = s.grid;
  PlanLease lease(g);
  fftw_complex* c = lease.ps->cbuf;
  for (std::size_t i = 0; i < s.coeff.size(); ++i) {
    c[i][0] = s.coeff[i].real();
    c[i][1] = s.coeff[i].imag();
  }
  fftw_execute(lease.ps->bwd);
  ScalarField f(g);
  std::memcpy(f.values().data(), lease.ps->rbuf, sizeof(double) * f.values().size());
  return f;
}

double spectral_l2(const Spectrum& s) {
  const GridSpec& g = s.grid;
  const int half = g.n / 2;
  double sum = 0.0;
  for_each_mode(g, [&](std::int64_t idx, const std::array<int, 3>& m) {
    const int mk = m[g.dim - 1];  // last-axis mode, 0..n/2
    const double w = (mk == 0 || mk == half) ? 1.0 : 2.0;
    sum += w * std::norm(s.coeff[static_cast<std::size_t>(idx)]);
  });
  const double vol = g.dim == 2 ? g.box * g.box : g.box * g.box * g.box;
  return std::sqrt(vol * sum);
}

}  // namespace rieszlab
