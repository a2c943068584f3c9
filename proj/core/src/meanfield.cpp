#include "vortexflow/meanfield.hpp"

#include <algorithm>
#include <array>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vortexflow/errors.hpp"
#include "vortexflow/reduce.hpp"

namespace vortexflow {

namespace {

namespace odeint = boost::numeric::odeint;

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kCritical = 8.0 * kPi;
constexpr double kMaxExponent = 700.0;

// y, y', mass, inertia, entropy, energy (ODE gauge)
using State = std::array<double, 6>;

struct ShootingRhs {
  double a;
  double b;
  double chi;

  void operator()(const State& s, State& ds, double t) const {
    const double e2t = std::exp(2.0 * t);
    const double log_omega = s[0] + chi + 0.5 * a * e2t;
    const double exponent = 2.0 * t + log_omega;
    if (!(exponent < kMaxExponent)) {
      std::ostringstream msg;
      msg << "exp(H) overflow at t = " << t << " for chi = " << chi;
      throw Error(ErrorCode::kNonFinite, msg.str());
    }
    const double w = std::exp(exponent);  // r^2 omega
    ds[0] = s[1];
    ds[1] = -b * w;
    ds[2] = 2.0 * kPi * w;
    ds[3] = kPi * e2t * w;
    ds[4] = 2.0 * kPi * w * log_omega;
    ds[5] = kPi * w * (s[0] + chi) / b;
  }
};

void validate_parameters(double a, double b) {
  if (!(a < 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::kInvalidArgument, "mean-field states need a < 0");
  }
  if (!std::isfinite(b)) throw Error(ErrorCode::kInvalidArgument, "b must be finite");
  if (b >= kCritical) {
    std::ostringstream msg;
    msg << "b = " << b << " >= 8 pi: no normalizable radial solution";
    throw Error(ErrorCode::kOutOfRange, msg.str());
  }
}

struct Window {
  double t_min;
  double t_max;
};

// Left end: 2t + chi <= -32 keeps the neglected mass below e^{-32}.
// Right end: past the point where a e^{2t}/2 <= -60.
Window window_for(double a, double chi, const ShootingOptions& options) {
  Window w;
  w.t_min = std::min(options.t_min, -0.5 * chi - 16.0);
  w.t_max = std::max(options.t_max, 0.5 * std::log(120.0 / std::abs(a)) + 1.0);
  return w;
}

auto make_stepper(const ShootingOptions& options) {
  return odeint::make_dense_output(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
}

}  // namespace

double ShootingProfile::auxiliary_energy(std::size_t k) const {
  const double G = H[k] + 0.5 * a * std::exp(2.0 * t[k]);
  return 0.5 * Hdot[k] * Hdot[k] + b * std::exp(G);
}

double ShootingProfile::far_field_gauge() const {
  const std::size_t last = t.size() - 1;
  const double psi_end = (H[last] - 2.0 * t[last]) / b;
  const double slope = (Hdot[last] - 2.0) / b;
  return psi_end - slope * t[last];
}

ShootingProfile shoot(double a, double b, double chi, const ShootingOptions& options) {
  validate_parameters(a, b);
  if (!(b > 0.0)) throw Error(ErrorCode::kInvalidArgument, "shooting needs b > 0");
  const Window win = window_for(a, chi, options);

  std::vector<double> times;
  const auto steps = static_cast<std::size_t>(std::ceil((win.t_max - win.t_min) / options.sample_step));
  times.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    times.push_back(std::min(win.t_min + static_cast<double>(k) * options.sample_step, win.t_max));
  }

  ShootingProfile p;
  p.a = a;
  p.b = b;
  p.chi = chi;
  for (auto* v : {&p.t, &p.H, &p.Hdot, &p.omega, &p.mass, &p.inertia, &p.entropy, &p.energy_ode_gauge}) {
    v->reserve(times.size());
  }

  State s{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const ShootingRhs rhs{a, b, chi};
  auto observer = [&](const State& x, double t) {
    p.t.push_back(t);
    p.H.push_back(x[0] + 2.0 * t + chi);
    p.Hdot.push_back(x[1] + 2.0);
    p.omega.push_back(std::exp(x[0] + chi + 0.5 * a * std::exp(2.0 * t)));
    p.mass.push_back(x[2]);
    p.inertia.push_back(x[3]);
    p.entropy.push_back(x[4]);
    p.energy_ode_gauge.push_back(x[5]);
  };
  odeint::integrate_times(make_stepper(options), rhs, s, times.begin(), times.end(), 1e-3, observer);
  if (!std::isfinite(p.Hdot.back())) {
    throw Error(ErrorCode::kNonFinite, "shooting produced a non-finite profile");
  }
  p.Z = (2.0 * kPi / b) * (p.Hdot.front() - p.Hdot.back());
  return p;
}

double shooting_mass(double a, double b, double chi, const ShootingOptions& options) {
  validate_parameters(a, b);
  if (!(b > 0.0)) throw Error(ErrorCode::kInvalidArgument, "shooting needs b > 0");
  const Window win = window_for(a, chi, options);
  State s{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  odeint::integrate_adaptive(make_stepper(options), ShootingRhs{a, b, chi}, s, win.t_min, win.t_max, 1e-3);
  if (!std::isfinite(s[1])) throw Error(ErrorCode::kNonFinite, "shooting produced a non-finite profile");
  return -(2.0 * kPi / b) * s[1];
}

double normalize(double a, double b, const NormalizeOptions& options) {
  validate_parameters(a, b);
  if (!(b > 0.0)) throw Error(ErrorCode::kInvalidArgument, "normalize needs b > 0");
  auto f = [&](double chi) { return shooting_mass(a, b, chi, options.shooting) - 1.0; };

  double lo = options.initial_guess.value_or(std::log(std::abs(a)));
  double hi = lo;
  double f_lo = f(lo);
  double f_hi = f_lo;
  constexpr int kMaxExpansions = 100;
  int expansions = 0;
  if (f_lo < 0.0) {
    while (f_hi < 0.0) {
      lo = hi;
      f_lo = f_hi;
      hi += options.bracket_step;
      f_hi = f(hi);
      if (++expansions > kMaxExpansions) {
        std::ostringstream msg;
        msg << "Z(chi) stays below 1 up to chi = " << hi << " (Z = " << f_hi + 1.0 << ")";
        throw Error(ErrorCode::kBracketFailure, msg.str());
      }
    }
  } else {
    while (f_lo > 0.0) {
      hi = lo;
      f_hi = f_lo;
      lo -= options.bracket_step;
      f_lo = f(lo);
      if (++expansions > kMaxExpansions) {
        std::ostringstream msg;
        msg << "Z(chi) stays above 1 down to chi = " << lo << " (Z = " << f_lo + 1.0 << ")";
        throw Error(ErrorCode::kBracketFailure, msg.str());
      }
    }
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;

  // toms748 with a bracket-width stop, then keep bisecting until the mass
  // condition holds (Z is flat in chi when b approaches 8 pi).
  std::uintmax_t max_iter = 200;
  auto tol = [](double l, double u) { return std::abs(u - l) <= 1e-14 * std::max(1.0, std::abs(l)); };
  const auto [l, u] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
  const double fl = f(l);
  const double fu = f(u);
  const double best = std::abs(fl) <= std::abs(fu) ? l : u;
  const double f_best = std::min(std::abs(fl), std::abs(fu));
  if (f_best > options.z_tol) {
    std::ostringstream msg;
    msg << "normalization converged to |Z - 1| = " << f_best << " only";
    throw Error(ErrorCode::kBracketFailure, msg.str());
  }
  return best;
}

double MeanFieldSolution::interpolate(double r, const std::vector<double>& f,
                                      const std::vector<double>& df) const {
  const double t = std::log(r);
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - t_.begin());
  const double dt = t_[k] - t_[k - 1];
  const double s = (t - t_[k - 1]) / dt;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * f[k - 1] + (s3 - 2 * s2 + s) * dt * df[k - 1] + (-2 * s3 + 3 * s2) * f[k] +
         (s3 - s2) * dt * df[k];
}

double MeanFieldSolution::density(double r) const {
  r = std::abs(r);
  if (is_gaussian()) {
    return (std::abs(a) / (2.0 * kPi)) * std::exp(0.5 * a * r * r);
  }
  if (r_.empty()) return 0.0;
  if (r <= r_.front()) return omega_.front();
  if (r >= r_.back()) return 0.0;
  return std::exp(interpolate(r, log_omega_, dlog_omega_));
}

double MeanFieldSolution::streamfunction(double r) const {
  r = std::abs(r);
  if (is_gaussian()) {
    const double sigma2 = 1.0 / std::abs(a);
    if (r == 0.0) return -(0.5 * std::log(2.0 * sigma2) - 0.5 * kEulerGamma) / (2.0 * kPi);
    const double u = r * r / (2.0 * sigma2);
    return -(std::log(r) + 0.5 * boost::math::expint(1, u)) / (2.0 * kPi);
  }
  if (r_.empty()) return 0.0;
  if (r <= r_.front()) return psi_.front();
  if (r >= r_.back()) return psi_.back() - std::log(r / r_.back()) / (2.0 * kPi);
  return interpolate(r, psi_, dpsi_);
}

double MeanFieldSolution::pohozaev_residual() const {
  if (is_gaussian()) return 1.0 + a * inertia;  // b -> 0 limit of b * residual / (8 pi)
  return 1.0 - (8.0 * kPi * a / b) * inertia - kCritical / b;
}

double MeanFieldSolution::pohozaev_residual_2pi() const {
  if (is_gaussian()) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 - (2.0 * kPi * a / b) * inertia - kCritical / b;
}

MeanFieldSolution make_solution_from_profile(const ShootingProfile& p) {
  MeanFieldSolution s;
  s.a = p.a;
  s.b = p.b;
  s.chi = p.chi;
  s.Z = p.Z;
  const double z = p.mass.back();
  const double gauge = p.far_field_gauge();
  s.inertia = p.inertia.back() / z;
  // omega / z has entropy (S_raw - z log z) / z.
  s.entropy = (p.entropy.back() - z * std::log(z)) / z;
  s.energy = (p.energy_ode_gauge.back() - 0.5 * gauge * z) / (z * z);
  const std::size_t count = p.t.size();
  s.r_.resize(count);
  s.omega_.resize(count);
  s.psi_.resize(count);
  s.t_ = p.t;
  s.log_omega_.resize(count);
  s.dlog_omega_.resize(count);
  s.dpsi_.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double e2t = std::exp(2.0 * p.t[k]);
    s.r_[k] = std::exp(p.t[k]);
    s.omega_[k] = p.omega[k] / z;
    s.psi_[k] = ((p.H[k] - 2.0 * p.t[k]) / p.b - gauge) / z;
    // log omega = H - 2t + a e^{2t} / 2 - log z.
    s.log_omega_[k] = p.H[k] - 2.0 * p.t[k] + 0.5 * p.a * e2t - std::log(z);
    s.dlog_omega_[k] = p.Hdot[k] - 2.0 + p.a * e2t;
    s.dpsi_[k] = (p.Hdot[k] - 2.0) / (p.b * z);
  }
  return s;
}

MeanFieldSolution make_gaussian_solution(double a) {
  if (!(a < 0.0)) throw Error(ErrorCode::kInvalidArgument, "mean-field states need a < 0");
  MeanFieldSolution s;
  s.a = a;
  s.b = 0.0;
  const double sigma2 = 1.0 / std::abs(a);
  s.chi = std::log(std::abs(a) / (2.0 * kPi));
  s.Z = 1.0;
  s.inertia = sigma2;
  s.entropy = -1.0 - std::log(2.0 * kPi * sigma2);
  s.energy = -(std::log(4.0 * sigma2) - kEulerGamma) / (8.0 * kPi);
  // Tabulate on the same log-radius window the shooting uses, for output.
  const ShootingOptions defaults;
  const double t_max = std::max(defaults.t_max, 0.5 * std::log(120.0 / std::abs(a)) + 1.0);
  for (double t = defaults.t_min; t <= t_max + 1e-12; t += defaults.sample_step) {
    const double r = std::exp(t);
    s.r_.push_back(r);
    s.omega_.push_back(s.density(r));
    s.psi_.push_back(s.streamfunction(r));
  }
  return s;
}

MeanFieldSolution canonical_solution(double a, double b, const NormalizeOptions& options) {
  if (!(b >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "only the b >= 0 branch is exposed");
  validate_parameters(a, b);
  if (b == 0.0) return make_gaussian_solution(a);
  const double chi = normalize(a, b, options);
  return make_solution_from_profile(shoot(a, b, chi, options.shooting));
}

MicrocanonicalResult microcanonical_solve(double energy, double inertia, const MicrocanonicalOptions& options) {
  if (!(inertia > 0.0) || !std::isfinite(inertia) || !std::isfinite(energy)) {
    throw Error(ErrorCode::kInvalidArgument, "need I > 0 and finite E");
  }
  const double u_lo = std::log(std::abs(options.a_max));  // small |a|, large I
  const double u_hi = std::log(std::abs(options.a_min));  // large |a|, small I
  const int inner_bits = static_cast<int>(std::ceil(-std::log2(options.rel_tol * 0.01)));
  const int outer_bits = static_cast<int>(std::ceil(-std::log2(options.rel_tol)));

  auto solve_at = [&](double a, double b) { return canonical_solution(a, b, options.normalize); };

  // a matching I at fixed b; I decreases with |a| = e^u.
  auto inner = [&](double b) -> MeanFieldSolution {
    if (b == 0.0) return make_gaussian_solution(-1.0 / inertia);
    auto f = [&](double u) { return std::log(solve_at(-std::exp(u), b).inertia / inertia); };
    double lo = std::clamp(std::log(1.0 / inertia), u_lo, u_hi);
    double hi = lo;
    double f_lo = f(lo);
    double f_hi = f_lo;
    while (f_lo < 0.0) {  // I too small: decrease |a|
      if (lo <= u_lo) {
        throw Error(ErrorCode::kNoSolutionInRange, "inertia not reachable inside the a search box");
      }
      hi = lo;
      f_hi = f_lo;
      lo = std::max(u_lo, lo - 1.0);
      f_lo = f(lo);
    }
    while (f_hi > 0.0) {
      if (hi >= u_hi) {
        throw Error(ErrorCode::kNoSolutionInRange, "inertia not reachable inside the a search box");
      }
      lo = hi;
      f_lo = f_hi;
      hi = std::min(u_hi, hi + 1.0);
      f_hi = f(hi);
    }
    double u = lo;
    if (f_lo != 0.0 && f_hi != 0.0) {
      std::uintmax_t iters = 100;
      const auto [l, r] = boost::math::tools::toms748_solve(
          f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(inner_bits), iters);
      u = 0.5 * (l + r);
    } else if (f_hi == 0.0) {
      u = hi;
    }
    return solve_at(-std::exp(u), b);
  };

  const double scale = std::max(1.0, std::abs(energy));
  auto g = [&](double b) { return (inner(b).energy - energy) / scale; };

  const double g0 = g(0.0);
  if (std::abs(g0) <= options.rel_tol) {
    MeanFieldSolution s = inner(0.0);
    return MicrocanonicalResult{s.a, 0.0, s};
  }
  if (g0 > 0.0) {
    std::ostringstream msg;
    msg << "target energy " << energy << " lies below the b = 0 branch (E = " << g0 * scale + energy << ")";
    throw Error(ErrorCode::kNoSolutionInRange, msg.str());
  }
  double b_lo = 0.0;
  double g_lo = g0;
  double b_hi = 0.0;
  double g_hi = g0;
  for (int k = 1; g_hi < 0.0; ++k) {
    const double candidate = std::min(options.b_max, kCritical * (1.0 - std::ldexp(1.0, -k)));
    if (candidate <= b_hi) {
      std::ostringstream msg;
      msg << "target energy " << energy << " above E reached at b = " << b_hi << " (E = "
          << g_hi * scale + energy << ")";
      throw Error(ErrorCode::kNoSolutionInRange, msg.str());
    }
    b_lo = b_hi;
    g_lo = g_hi;
    b_hi = candidate;
    g_hi = g(b_hi);
  }
  double b = b_hi;
  if (g_hi != 0.0) {
    std::uintmax_t iters = 100;
    const auto [l, r] = boost::math::tools::toms748_solve(
        g, b_lo, b_hi, g_lo, g_hi, boost::math::tools::eps_tolerance<double>(outer_bits), iters);
    b = 0.5 * (l + r);
  }
  MeanFieldSolution s = inner(b);
  return MicrocanonicalResult{s.a, s.b, s};
}

ScalarField sample_on_grid(const MeanFieldSolution& solution, const Grid& grid) {
  ScalarField omega(grid);
  for (int j = 0; j < grid.n; ++j) {
    for (int i = 0; i < grid.n; ++i) {
      omega(i, j) = solution.density(std::hypot(grid.x(i), grid.y(j)));
    }
  }
  const double mass = grid.cell_area() * pairwise_sum(omega.values());
  if (mass < 0.999) {
    std::ostringstream msg;
    msg << "grid captures mass " << mass << " of the mean-field profile; enlarge half_width";
    throw Error(ErrorCode::kMassLoss, msg.str());
  }
  for (double& v : omega.values()) v /= mass;
  return omega;
}

}  // namespace vortexflow
