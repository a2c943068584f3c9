#pragma once

#include <functional>
#include <vector>

#include "vortexflow/grid.hpp"

namespace vortexflow {

/// Oseen vortex (4 pi nu (t+1))^{-1} exp(-|x|^2 / (4 nu (t+1))), sampled and
/// renormalized to unit grid mass. Throws kMassLoss if the grid holds less
/// than 0.999 of it.
ScalarField oseen_field(const Grid& grid, double t, double nu);

/// Unit-mass Gaussian of per-axis variance sigma2 around `center`.
ScalarField gaussian_field(const Grid& grid, double sigma2, Vec2 center = {});

/// Vortex patch of radius R with edge profile (1 - tanh(2 (r - R) / eps)) / 2,
/// unit mass.
ScalarField patch_field(const Grid& grid, double R, double eps);

/// Fixed point W of the rescaled equation: the Gaussian with I = 2.
ScalarField rescaled_oseen(const Grid& grid);

/// Samples f at the nodes and renormalizes to unit grid mass; kMassLoss
/// below `min_mass` captured.
ScalarField sample_normalized(const Grid& grid, const std::function<double(double, double)>& f,
                              double min_mass = 0.999);

/// Piecewise-constant drift gamma(t): value gammas[k] on [breaks[k], breaks[k+1]),
/// breaks[0] = 0 and the last value extends to +inf. B(t) = int_0^t gamma.
class DriftCurve {
 public:
  DriftCurve(std::vector<double> breaks, std::vector<double> gammas, double bound);
  static DriftCurve constant(double gamma);

  double gamma(double t) const;
  double B(double t) const;
  double bound() const { return bound_; }

  /// Per-axis variance 2 nu int_tau^t exp(2 nu (B(s) - B(t))) ds of the kernel.
  double kernel_variance(double nu, double t, double tau) const;
  /// exp(nu (B(t) - B(tau))), the dilation applied to the initial datum.
  double dilation(double nu, double t, double tau) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> gammas_;
  double bound_;
};

/// Exact solution at time t of  d_t w = nu (Laplacian w + gamma(t) div(x w))
/// from w(tau) = omega0:
///   w(x) = lambda^2 int G_kappa(x - y) omega0(lambda y) dy,
/// lambda = dilation, kappa = kernel_variance. Evaluated by substituting
/// z = lambda y, which makes the quadrature a separable transform over the
/// source cells. Throws kMassLoss if more than 1e-8 of the mass leaves the grid.
ScalarField fp_exact(const ScalarField& omega0, const DriftCurve& curve, double nu, double t, double tau);

/// d/dt I = alpha I + beta under the fixed-(a, b) equation.
struct InertiaLaw {
  double alpha = 0.0;
  double beta = 0.0;
  double alpha_quadrature = 0.0;  ///< route (i)
  double beta_quadrature = 0.0;
  double alpha_simulation = 0.0;  ///< route (ii)
  double beta_simulation = 0.0;
  double disagreement = 0.0;  ///< max |rate_i - rate_ii| / max |rate| over the sampled I range
  std::vector<double> times;
  std::vector<double> inertia;  ///< closed-form I(t) of the agreed law

  /// Closed-form solution with I(0) = I0.
  double evaluate(double I0, double t) const;
};

struct InertiaOracleOptions {
  int n = 128;                 ///< grid of the simulation route
  double half_width = 0.0;     ///< 0 picks 8 sqrt(max(I0, stationary I))
  int curve_points = 101;
  double tolerance = 0.02;
};

/// Determines (alpha, beta) two ways and requires agreement within
/// `tolerance`: (i) moment identities d/dt I = nu (2 + b V + a int |x|^2 omega)
/// evaluated by radial quadrature on Gaussians of several widths and fitted
/// by least squares; (ii) a fixed_ab simulation from a Gaussian of inertia
/// I0, with dI/dt regressed on I. Throws kOracleDisagreement otherwise.
InertiaLaw inertia_ode_oracle(double a, double b, double nu, double I0, double horizon,
                              const InertiaOracleOptions& options = {});

}  // namespace vortexflow
