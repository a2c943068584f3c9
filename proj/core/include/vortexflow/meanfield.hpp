#pragma once

#include <optional>
#include <vector>

#include "vortexflow/grid.hpp"

namespace vortexflow {

/// Radial shooting for the mean-field equation
///
///   omega = exp(b psi + a |x|^2 / 2),   -Laplacian psi = omega,
///
/// in log-radius t = log r with H = b psi + 2t, which turns the radial
/// problem into  H'' = -b exp(a e^{2t} / 2) exp(H),  H ~ 2t + chi as t -> -inf.
/// The shift chi is the free parameter; the mass it produces is
/// Z(chi) = (2 pi / b)(H'(-inf) - H'(+inf)), and a solution is the chi with Z = 1.
/// Internally the ODE is integrated for y = H - 2t - chi (so y, y' -> 0 on the
/// left) together with running quadratures of mass, inertia, entropy and energy.

struct ShootingOptions {
  double t_min = -14.0;  ///< left end of the log-radius window (widened for large chi)
  double t_max = 6.0;    ///< right end (widened until the exp(a r^2/2) factor is dead)
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  double sample_step = 0.01;  ///< spacing of the tabulated profile in t
};

struct ShootingProfile {
  double a = 0.0;
  double b = 0.0;
  double chi = 0.0;
  double Z = 0.0;
  std::vector<double> t;     ///< log r samples
  std::vector<double> H;     ///< b psi + 2 t (ODE gauge for psi)
  std::vector<double> Hdot;  ///< dH/dt
  std::vector<double> omega; ///< exp(b psi + a r^2 / 2), unnormalized
  // Running quadratures from t.front(); the back() entries are totals.
  std::vector<double> mass;
  std::vector<double> inertia;
  std::vector<double> entropy;
  std::vector<double> energy_ode_gauge;  ///< 1/2 int psi omega with the ODE gauge

  /// Auxiliary energy 1/2 H'^2 + b e^G, G = H + a e^{2t} / 2; nonincreasing.
  double auxiliary_energy(std::size_t k) const;
  /// Constant c with psi_ode = psi_decaying + c, read off the far field.
  double far_field_gauge() const;
};

/// Integrates the shooting problem for a < 0, 0 < b < 8 pi at shift chi.
/// Throws kNonFinite if exp(H) overflows, kInvalidArgument on bad (a, b).
ShootingProfile shoot(double a, double b, double chi, const ShootingOptions& options = {});

/// Z(chi) only; cheaper than a full profile.
double shooting_mass(double a, double b, double chi, const ShootingOptions& options = {});

struct NormalizeOptions {
  std::optional<double> initial_guess;  ///< defaults to log|a|
  double bracket_step = 4.0;
  double z_tol = 1e-10;
  ShootingOptions shooting;
};

/// Finds chi* with |Z(chi*) - 1| <= z_tol. Z is nondecreasing in chi, so the
/// root is bracketed by expansion from the initial guess and refined by
/// bisection-safeguarded root finding. Throws kOutOfRange for b >= 8 pi and
/// kBracketFailure if the bracket cannot be closed.
double normalize(double a, double b, const NormalizeOptions& options = {});

/// Radially symmetric solution of the mean-field equation for a < 0,
/// 0 <= b < 8 pi. For b = 0 this is the exact Gaussian (|a| / 2 pi) e^{a r^2/2}.
class MeanFieldSolution {
 public:
  double a = 0.0;
  double b = 0.0;
  double chi = 0.0;  ///< log omega(0)
  double Z = 1.0;
  double inertia = 0.0;
  double energy = 0.0;  ///< decaying gauge, i.e. the log-kernel double integral
  double entropy = 0.0;

  bool is_gaussian() const { return b == 0.0; }

  /// omega(r); cubic Hermite in log r on log omega between tabulated samples.
  double density(double r) const;
  /// psi(r) in the decaying gauge psi ~ -log(r) / 2 pi.
  double streamfunction(double r) const;

  /// 1 - (8 pi a / b) I - 8 pi / b; the radial virial (Pohozaev) identity.
  double pohozaev_residual() const;
  /// Same with a 2 pi a / b coefficient, which solutions do not satisfy;
  /// diagnostic only.
  double pohozaev_residual_2pi() const;

  const std::vector<double>& radii() const { return r_; }
  const std::vector<double>& omega_table() const { return omega_; }
  const std::vector<double>& psi_table() const { return psi_; }

 private:
  friend MeanFieldSolution make_solution_from_profile(const ShootingProfile&);
  friend MeanFieldSolution make_gaussian_solution(double);
  double interpolate(double r, const std::vector<double>& f, const std::vector<double>& df) const;

  std::vector<double> r_;
  std::vector<double> omega_;
  std::vector<double> psi_;
  // Hermite data in t = log r; filled for b > 0 only.
  std::vector<double> t_;
  std::vector<double> log_omega_;
  std::vector<double> dlog_omega_;
  std::vector<double> dpsi_;
};

MeanFieldSolution make_solution_from_profile(const ShootingProfile& profile);
MeanFieldSolution make_gaussian_solution(double a);

MeanFieldSolution canonical_solution(double a, double b, const NormalizeOptions& options = {});

struct MicrocanonicalOptions {
  double a_min = -1e3;
  double a_max = -1e-4;
  double b_max = 8.0 * 3.14159265358979323846 - 1e-3;
  double rel_tol = 1e-9;  ///< relative tolerance of the nested root finds
  NormalizeOptions normalize;
};

struct MicrocanonicalResult {
  double a = 0.0;
  double b = 0.0;
  MeanFieldSolution solution;
};

/// Inverts (a, b) -> (E, I): outer root find on b matching E, inner root find
/// on a matching I, using dI/da > 0 and dE/db > 0 along I = const.
/// Throws kNoSolutionInRange when E is not bracketed by the search box.
MicrocanonicalResult microcanonical_solve(double energy, double inertia,
                                          const MicrocanonicalOptions& options = {});

/// omega sampled at the nodes and renormalized to unit discrete mass.
/// Throws kMassLoss if the raw grid mass is below 0.999.
ScalarField sample_on_grid(const MeanFieldSolution& solution, const Grid& grid);

}  // namespace vortexflow
