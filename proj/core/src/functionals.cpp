#include "vortexflow/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "vortexflow/errors.hpp"
#include "vortexflow/operators.hpp"
#include "vortexflow/poisson.hpp"
#include "vortexflow/reduce.hpp"

namespace vortexflow {

namespace {

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw Error(ErrorCode::kInvalidArgument, "fields live on different grids");
}

// Gradient of psi for the moment quadratures. The cell-average self term leaves
// psi_h - psi = -h^2 omega / (8 pi) + O(h^4) for smooth omega, so that term is
// added back before a fourth-order centered difference (second order in the two
// outermost rings).
VectorField moment_gradient(const ScalarField& omega, const ScalarField& psi) {
  const Grid& g = psi.grid();
  const int n = g.n;
  const double shift = g.h * g.h / (8.0 * std::numbers::pi);
  std::vector<double> p(g.node_count());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = psi[k] + shift * omega[k];
  auto at = [&](int i, int j) { return p[g.index(i, j)]; };
  auto d = [&](int c, auto&& f) {
    if (c >= 2 && c < n - 2) return (f(c - 2) - 8.0 * f(c - 1) + 8.0 * f(c + 1) - f(c + 2)) / (12.0 * g.h);
    if (c == 0) return (f(1) - f(0)) / g.h;
    if (c == n - 1) return (f(n - 1) - f(n - 2)) / g.h;
    return (f(c + 1) - f(c - 1)) / (2.0 * g.h);
  };
  VectorField out(g, Staggering::kCell);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = g.index(i, j);
      out.ux[k] = d(i, [&](int c) { return at(c, j); });
      out.uy[k] = d(j, [&](int c) { return at(i, c); });
    }
  }
  return out;
}

}  // namespace

Moments moments(const ScalarField& omega) {
  const Grid& g = omega.grid();
  const double area = g.cell_area();
  const std::size_t count = g.node_count();
  const int n = g.n;
  const double mass = area * pairwise_sum(omega.values());
  if (!(mass >= 1e-12)) {
    throw Error(ErrorCode::kZeroMass, "field mass below 1e-12");
  }
  auto x_of = [&](std::size_t k) { return g.x(static_cast<int>(k % n)); };
  auto y_of = [&](std::size_t k) { return g.y(static_cast<int>(k / n)); };
  const double mx = area * pairwise_reduce(count, [&](std::size_t k) { return x_of(k) * omega[k]; }) / mass;
  const double my = area * pairwise_reduce(count, [&](std::size_t k) { return y_of(k) * omega[k]; }) / mass;
  const double inertia = 0.5 * area * pairwise_reduce(count, [&](std::size_t k) {
                           const double dx = x_of(k) - mx;
                           const double dy = y_of(k) - my;
                           return (dx * dx + dy * dy) * omega[k];
                         });
  return Moments{mass, Vec2{mx, my}, inertia};
}

double energy(const ScalarField& omega, const ScalarField& psi) {
  require_same_grid(omega, psi);
  const double s = pairwise_reduce(omega.size(), [&](std::size_t k) { return psi[k] * omega[k]; });
  return 0.5 * omega.grid().cell_area() * s;
}

double entropy(const ScalarField& omega) {
  const double s = pairwise_reduce(omega.size(), [&](std::size_t k) {
    const double w = omega[k];
    return w > 0.0 ? w * std::log(w) : 0.0;
  });
  return omega.grid().cell_area() * s;
}

InteractionMoments interaction_moments(const ScalarField& omega, const ScalarField& psi) {
  require_same_grid(omega, psi);
  const Grid& g = omega.grid();
  const int n = g.n;
  const double area = g.cell_area();
  const VectorField grad = moment_gradient(omega, psi);
  const double mass = area * pairwise_sum(omega.values());
  double mx = 0.0;
  double my = 0.0;
  if (std::abs(mass) > 0.0) {
    mx = area * pairwise_reduce(omega.size(), [&](std::size_t k) { return g.x(static_cast<int>(k % n)) * omega[k]; }) / mass;
    my = area * pairwise_reduce(omega.size(), [&](std::size_t k) { return g.y(static_cast<int>(k / n)) * omega[k]; }) / mass;
  }
  InteractionMoments m;
  m.enstrophy = area * pairwise_reduce(omega.size(), [&](std::size_t k) { return omega[k] * omega[k]; });
  m.gradpsi_moment = area * pairwise_reduce(omega.size(), [&](std::size_t k) {
    return omega[k] * (grad.ux[k] * grad.ux[k] + grad.uy[k] * grad.uy[k]);
  });
  m.virial = area * pairwise_reduce(omega.size(), [&](std::size_t k) {
    const double x = g.x(static_cast<int>(k % n)) - mx;
    const double y = g.y(static_cast<int>(k / n)) - my;
    return omega[k] * (x * grad.ux[k] + y * grad.uy[k]);
  });
  return m;
}

Multipliers solve_multiplier_system(double inertia, const InteractionMoments& m) {
  const double d = 2.0 * inertia * m.gradpsi_moment - m.virial * m.virial;
  Multipliers out;
  out.denominator = d;
  out.b = (2.0 * inertia * m.enstrophy + 2.0 * m.virial) / d;
  out.a = -(2.0 * m.gradpsi_moment + m.virial * m.enstrophy) / d;
  return out;
}

Multipliers multipliers(const ScalarField& omega, const ScalarField& psi, double eps_d) {
  const Moments mom = moments(omega);
  const InteractionMoments im = interaction_moments(omega, psi);
  const Multipliers out = solve_multiplier_system(mom.inertia, im);
  if (!(out.denominator >= eps_d)) {
    std::ostringstream msg;
    msg << "D(omega) = " << out.denominator << " below guard " << eps_d
        << " (omega grad psi nearly collinear with omega x)";
    throw Error(ErrorCode::kDegenerateDenominator, msg.str());
  }
  return out;
}

Multipliers multipliers(const ScalarField& omega, double eps_d) {
  return multipliers(omega, solve_streamfunction(omega), eps_d);
}

double relative_entropy(const ScalarField& omega, const ScalarField& rho, double tol) {
  require_same_grid(omega, rho);
  const double s = pairwise_reduce(omega.size(), [&](std::size_t k) {
    const double w = omega[k];
    if (w <= tol) return 0.0;
    const double r = rho[k];
    if (r <= 0.0) {
      throw Error(ErrorCode::kSupportMismatch, "omega has mass where the reference vanishes");
    }
    return w * std::log(w / r);
  });
  return omega.grid().cell_area() * s;
}

double l1_distance(const ScalarField& omega, const ScalarField& rho) {
  require_same_grid(omega, rho);
  return omega.grid().cell_area() *
         pairwise_reduce(omega.size(), [&](std::size_t k) { return std::abs(omega[k] - rho[k]); });
}

InequalityGaps inequality_gaps(const ScalarField& omega, const ScalarField& psi) {
  const double s = entropy(omega);
  const double e = energy(omega, psi);
  const double inertia = moments(omega).inertia;
  InequalityGaps gaps;
  gaps.loghls = s - 8.0 * std::numbers::pi * e + (1.0 + std::log(std::numbers::pi));
  gaps.energy_lower = e + std::log(4.0 * inertia) / (8.0 * std::numbers::pi);
  return gaps;
}

InequalityGaps inequality_gaps(const ScalarField& omega) {
  return inequality_gaps(omega, solve_streamfunction(omega));
}

double dissipation_rate(const ScalarField& omega, const ScalarField& psi, double a, double b) {
  require_same_grid(omega, psi);
  const Grid& g = omega.grid();
  const int n = g.n;
  // Chemical potential log omega - Phi, only where omega > 0.
  std::vector<double> mu(g.node_count(), 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = g.index(i, j);
      if (omega[k] > 0.0) {
        const double r2 = g.x(i) * g.x(i) + g.y(j) * g.y(j);
        mu[k] = std::log(omega[k]) - b * psi[k] - 0.5 * a * r2;
      }
    }
  }
  auto face_term = [&](std::size_t k0, std::size_t k1) {
    if (omega[k0] <= 0.0 || omega[k1] <= 0.0) return 0.0;
    const double grad = (mu[k1] - mu[k0]) / g.h;
    return 0.5 * (omega[k0] + omega[k1]) * grad * grad;
  };
  const double sx = pairwise_reduce(g.node_count(), [&](std::size_t k) {
    const int i = static_cast<int>(k % n);
    return i + 1 < n ? face_term(k, k + 1) : 0.0;
  });
  const double sy = pairwise_reduce(g.node_count(), [&](std::size_t k) {
    const int j = static_cast<int>(k / n);
    return j + 1 < n ? face_term(k, k + static_cast<std::size_t>(n)) : 0.0;
  });
  return g.cell_area() * (sx + sy);
}

Functionals evaluate_functionals(const ScalarField& omega, const ScalarField& psi, double eps_d) {
  const Moments mom = moments(omega);
  const InteractionMoments im = interaction_moments(omega, psi);
  Functionals f;
  f.mass = mom.mass;
  f.center = mom.center;
  f.inertia = mom.inertia;
  f.energy = energy(omega, psi);
  f.entropy = entropy(omega);
  f.enstrophy = im.enstrophy;
  f.gradpsi_moment = im.gradpsi_moment;
  f.virial = im.virial;
  const Multipliers mult = solve_multiplier_system(mom.inertia, im);
  f.denominator = mult.denominator;
  if (mult.denominator >= eps_d) {
    f.a = mult.a;
    f.b = mult.b;
  } else {
    f.a = std::numeric_limits<double>::quiet_NaN();
    f.b = std::numeric_limits<double>::quiet_NaN();
  }
  double mx = 0.0;
  for (double v : omega.values()) mx = std::max(mx, std::abs(v));
  f.max_abs = mx;
  return f;
}

Functionals evaluate_functionals(const ScalarField& omega) {
  return evaluate_functionals(omega, solve_streamfunction(omega));
}

}  // namespace vortexflow
