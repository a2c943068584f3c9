#include "vortexflow/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "vortexflow/errors.hpp"

namespace vortexflow {

namespace {

// FFTW's planner is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

FftwBuffer<double> alloc_real(std::size_t count) {
  return FftwBuffer<double>(fftw_alloc_real(count));
}

FftwBuffer<fftw_complex> alloc_complex(std::size_t count) {
  return FftwBuffer<fftw_complex>(fftw_alloc_complex(count));
}

}  // namespace

double green_function(double r) { return -std::log(r) / (2.0 * std::numbers::pi); }

double green_self_cell(double h) {
  // Mean of log|x| over [-h/2, h/2]^2.
  const double mean_log = std::log(h / 2.0) - 1.5 + std::numbers::pi / 4.0 + 0.5 * std::numbers::ln2;
  return -mean_log / (2.0 * std::numbers::pi);
}

struct PoissonSolver::Plans {
  int m = 0;  // padded size
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

PoissonSolver::PoissonSolver(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  const int n = grid.n;
  const int m = 2 * n;
  const std::size_t real_count = static_cast<std::size_t>(m) * m;
  const std::size_t spec_count = static_cast<std::size_t>(m) * (m / 2 + 1);
  plans_->m = m;

  auto real = alloc_real(real_count);
  auto spec = alloc_complex(spec_count);
  {
    std::lock_guard lock(planner_mutex());
    plans_->forward = fftw_plan_dft_r2c_2d(m, m, real.get(), spec.get(), FFTW_ESTIMATE);
    plans_->backward = fftw_plan_dft_c2r_2d(m, m, spec.get(), real.get(), FFTW_ESTIMATE);
  }
  if (!plans_->forward || !plans_->backward) {
    throw Error(ErrorCode::kInvalidArgument, "FFTW planning failed");
  }

  // Kernel on the doubled grid, offsets wrapped periodically. The wrapped
  // entry at offset n is never reached from the zero-padded source.
  const double self = green_self_cell(grid.h);
  for (int q = 0; q < m; ++q) {
    const int dy = q <= n ? q : q - m;
    for (int p = 0; p < m; ++p) {
      const int dx = p <= n ? p : p - m;
      const double r = grid.h * std::hypot(static_cast<double>(dx), static_cast<double>(dy));
      real[static_cast<std::size_t>(q) * m + p] = (dx == 0 && dy == 0) ? self : green_function(r);
    }
  }
  fftw_execute_dft_r2c(plans_->forward, real.get(), spec.get());
  // Fold the cell area and the unnormalized inverse transform into the kernel.
  const double scale = grid.h * grid.h / static_cast<double>(real_count);
  kernel_hat_.resize(spec_count);
  for (std::size_t k = 0; k < spec_count; ++k) {
    kernel_hat_[k] = std::complex<double>(spec[k][0], spec[k][1]) * scale;
  }
}

PoissonSolver::~PoissonSolver() = default;

ScalarField PoissonSolver::solve(const ScalarField& omega) const {
  if (!(omega.grid() == grid_)) {
    throw Error(ErrorCode::kInvalidArgument, "field grid does not match solver grid");
  }
  if (!omega.all_finite()) {
    throw Error(ErrorCode::kNonFinite, "vorticity contains non-finite values");
  }
  const int n = grid_.n;
  const int m = plans_->m;
  const std::size_t real_count = static_cast<std::size_t>(m) * m;
  const std::size_t spec_count = static_cast<std::size_t>(m) * (m / 2 + 1);

  auto real = alloc_real(real_count);
  auto spec = alloc_complex(spec_count);
  std::fill(real.get(), real.get() + real_count, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) real[static_cast<std::size_t>(j) * m + i] = omega(i, j);
  }
  fftw_execute_dft_r2c(plans_->forward, real.get(), spec.get());
  for (std::size_t k = 0; k < spec_count; ++k) {
    const std::complex<double> z(spec[k][0], spec[k][1]);
    const std::complex<double> w = z * kernel_hat_[k];
    spec[k][0] = w.real();
    spec[k][1] = w.imag();
  }
  fftw_execute_dft_c2r(plans_->backward, spec.get(), real.get());

  ScalarField psi(grid_);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) psi(i, j) = real[static_cast<std::size_t>(j) * m + i];
  }
  return psi;
}

const PoissonSolver& poisson_solver_for(const Grid& grid) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, double>, std::unique_ptr<PoissonSolver>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{grid.n, grid.half_width}];
  if (!slot) slot = std::make_unique<PoissonSolver>(grid);
  return *slot;
}

ScalarField solve_streamfunction(const ScalarField& omega) {
  return poisson_solver_for(omega.grid()).solve(omega);
}

VectorField velocity(const ScalarField& psi) {
  const Grid& g = psi.grid();
  const int n = g.n;
  VectorField u(g, Staggering::kCell);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double dpsi_dx = i == 0       ? (psi(1, j) - psi(0, j)) / g.h
                             : i == n - 1 ? (psi(n - 1, j) - psi(n - 2, j)) / g.h
                                          : (psi(i + 1, j) - psi(i - 1, j)) / (2.0 * g.h);
      const double dpsi_dy = j == 0       ? (psi(i, 1) - psi(i, 0)) / g.h
                             : j == n - 1 ? (psi(i, n - 1) - psi(i, n - 2)) / g.h
                                          : (psi(i, j + 1) - psi(i, j - 1)) / (2.0 * g.h);
      const std::size_t k = g.index(i, j);
      u.ux[k] = -dpsi_dy;
      u.uy[k] = dpsi_dx;
    }
  }
  return u;
}

}  // namespace vortexflow
