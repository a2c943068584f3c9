#pragma once

#include "vortexflow/grid.hpp"

namespace vortexflow {

inline constexpr double kDefaultDegeneracyGuard = 1e-6;

struct Moments {
  double mass = 0.0;
  Vec2 center;          ///< M = (1/mass) * int x omega
  double inertia = 0.0; ///< I = 1/2 int |x - M|^2 omega
};

struct InteractionMoments {
  double enstrophy = 0.0;       ///< int omega^2
  double gradpsi_moment = 0.0;  ///< int omega |grad psi|^2
  double virial = 0.0;          ///< V = int omega (x - M) . grad psi
};

struct Multipliers {
  double a = 0.0;
  double b = 0.0;
  double denominator = 0.0;  ///< D = 2 I int omega |grad psi|^2 - V^2
};

struct InequalityGaps {
  double loghls = 0.0;        ///< S - 8 pi E + (1 + log pi), nonnegative in the continuum
  double energy_lower = 0.0;  ///< E + log(4 I) / (8 pi), nonnegative in the continuum
};

/// One snapshot's worth of functionals. `a`, `b` are NaN when D falls under
/// the degeneracy guard; `denominator` is always reported.
struct Functionals {
  double mass = 0.0;
  Vec2 center;
  double inertia = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
  double enstrophy = 0.0;
  double gradpsi_moment = 0.0;
  double virial = 0.0;
  double denominator = 0.0;
  double a = 0.0;
  double b = 0.0;
  double max_abs = 0.0;  ///< sup-norm of omega
};

/// Mass, center and inertia by midpoint sums. Throws kZeroMass below 1e-12.
Moments moments(const ScalarField& omega);

/// E = 1/2 int psi omega.
double energy(const ScalarField& omega, const ScalarField& psi);

/// S = int omega log omega on max(omega, 0), with 0 log 0 = 0.
double entropy(const ScalarField& omega);

InteractionMoments interaction_moments(const ScalarField& omega, const ScalarField& psi);

/// Solves the 2x2 system  b G + a V = Omega,  b V + 2 a I = -2  for (a, b)
/// from the scalar moments. No guard applied.
Multipliers solve_multiplier_system(double inertia, const InteractionMoments& m);

/// Lagrange multipliers of the energy/inertia-constrained flow for a unit-mass
/// snapshot. Throws kDegenerateDenominator when D < eps_d (vortex-patch family).
Multipliers multipliers(const ScalarField& omega, const ScalarField& psi,
                        double eps_d = kDefaultDegeneracyGuard);
Multipliers multipliers(const ScalarField& omega, double eps_d = kDefaultDegeneracyGuard);

/// int omega log(omega / rho). Cells with omega <= tol are skipped; omega > tol
/// where rho <= 0 throws kSupportMismatch.
double relative_entropy(const ScalarField& omega, const ScalarField& rho, double tol = 1e-14);

double l1_distance(const ScalarField& omega, const ScalarField& rho);

InequalityGaps inequality_gaps(const ScalarField& omega, const ScalarField& psi);
InequalityGaps inequality_gaps(const ScalarField& omega);

/// int omega |grad(log omega - b psi - a |x|^2 / 2)|^2, the entropy production
/// rate per unit viscosity. Evaluated on cell faces with the face-mean of
/// omega; faces touching an empty cell are skipped.
double dissipation_rate(const ScalarField& omega, const ScalarField& psi, double a, double b);

Functionals evaluate_functionals(const ScalarField& omega, const ScalarField& psi,
                                 double eps_d = kDefaultDegeneracyGuard);
Functionals evaluate_functionals(const ScalarField& omega);

}  // namespace vortexflow
