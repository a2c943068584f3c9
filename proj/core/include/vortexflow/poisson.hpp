#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "vortexflow/grid.hpp"

namespace vortexflow {

/// Free-space Green's function of -Laplacian in the plane, g(x) = -log|x| / (2 pi).
double green_function(double r);

/// Mean of g over one h x h cell centered on the singularity.
double green_self_cell(double h);

/// Free-space solver for -Laplacian(psi) = omega on a truncated plane.
///
/// psi = g * omega is computed as a discrete convolution on the doubled
/// (2n x 2n, zero-padded) grid, so no periodic images enter. The kernel is
/// g at cell-center offsets except the self cell, which uses the cell mean.
/// `solve` is const and reentrant; instances may be shared across threads.
class PoissonSolver {
 public:
  explicit PoissonSolver(const Grid& grid);
  ~PoissonSolver();
  PoissonSolver(const PoissonSolver&) = delete;
  PoissonSolver& operator=(const PoissonSolver&) = delete;

  const Grid& grid() const { return grid_; }
  ScalarField solve(const ScalarField& omega) const;

 private:
  struct Plans;
  Grid grid_;
  std::unique_ptr<Plans> plans_;
  std::vector<std::complex<double>> kernel_hat_;
};

/// Shared solver for a grid, built once per (n, half_width) and cached.
const PoissonSolver& poisson_solver_for(const Grid& grid);

/// psi = -Laplacian^{-1} omega with the decaying-log free-space gauge.
ScalarField solve_streamfunction(const ScalarField& omega);

/// u = grad-perp psi = (-d_y psi, d_x psi) by centered differences at cells.
VectorField velocity(const ScalarField& psi);

}  // namespace vortexflow
