#include "vortexflow/reference.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vortexflow/dynamics.hpp"
#include "vortexflow/errors.hpp"
#include "vortexflow/functionals.hpp"
#include "vortexflow/reduce.hpp"

namespace vortexflow {

namespace {

constexpr double kPi = std::numbers::pi;

double grid_mass(const ScalarField& f) { return f.grid().cell_area() * pairwise_sum(f.values()); }

// expm1(x) / x with the removable singularity filled in.
double phi1(double x) { return std::abs(x) < 1e-12 ? 1.0 + 0.5 * x : std::expm1(x) / x; }

}  // namespace

ScalarField sample_normalized(const Grid& grid, const std::function<double(double, double)>& f, double min_mass) {
  ScalarField out(grid);
  for (int j = 0; j < grid.n; ++j) {
    for (int i = 0; i < grid.n; ++i) out(i, j) = f(grid.x(i), grid.y(j));
  }
  const double mass = grid_mass(out);
  if (!(mass >= min_mass)) {
    std::ostringstream msg;
    msg << "grid captures mass " << mass << " (need " << min_mass << "); enlarge half_width";
    throw Error(ErrorCode::kMassLoss, msg.str());
  }
  for (double& v : out.values()) v /= mass;
  return out;
}

ScalarField gaussian_field(const Grid& grid, double sigma2, Vec2 center) {
  if (!(sigma2 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma2 must be positive");
  return sample_normalized(grid, [&](double x, double y) {
    const double dx = x - center.x, dy = y - center.y;
    return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma2)) / (2.0 * kPi * sigma2);
  });
}

ScalarField oseen_field(const Grid& grid, double t, double nu) {
  if (!(t >= 0.0) || !(nu > 0.0)) throw Error(ErrorCode::kInvalidArgument, "oseen needs t >= 0 and nu > 0");
  return gaussian_field(grid, 2.0 * nu * (t + 1.0));
}

ScalarField rescaled_oseen(const Grid& grid) { return gaussian_field(grid, 2.0); }

ScalarField patch_field(const Grid& grid, double R, double eps) {
  if (!(R > 0.0) || !(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "patch needs R > 0 and eps > 0");
  // The 10%-90% rise of the edge spans about eps.
  return sample_normalized(grid, [&](double x, double y) {
    return 0.5 * (1.0 - std::tanh(2.0 * (std::hypot(x, y) - R) / eps)) / (kPi * R * R);
  });
}

DriftCurve::DriftCurve(std::vector<double> breaks, std::vector<double> gammas, double bound)
    : breaks_(std::move(breaks)), gammas_(std::move(gammas)), bound_(bound) {
  if (breaks_.empty() || breaks_.size() != gammas_.size() || breaks_.front() != 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "drift curve needs matching breaks/values starting at t = 0");
  }
  if (!std::is_sorted(breaks_.begin(), breaks_.end()) ||
      std::adjacent_find(breaks_.begin(), breaks_.end()) != breaks_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "drift curve breaks must increase strictly");
  }
  for (double g : gammas_) {
    if (!std::isfinite(g) || std::abs(g) > bound_) {
      throw Error(ErrorCode::kInvalidArgument, "drift value exceeds the declared bound");
    }
  }
}

DriftCurve DriftCurve::constant(double gamma) { return DriftCurve({0.0}, {gamma}, std::abs(gamma)); }

double DriftCurve::gamma(double t) const {
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  if (it == breaks_.begin()) return gammas_.front();
  return gammas_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double DriftCurve::B(double t) const {
  if (t <= 0.0) return gammas_.front() * t;
  double acc = 0.0;
  for (std::size_t k = 0; k < breaks_.size(); ++k) {
    const double s0 = breaks_[k];
    const double s1 = k + 1 < breaks_.size() ? breaks_[k + 1] : t;
    if (s0 >= t) break;
    acc += gammas_[k] * (std::min(s1, t) - s0);
  }
  return acc;
}

double DriftCurve::dilation(double nu, double t, double tau) const { return std::exp(nu * (B(t) - B(tau))); }

double DriftCurve::kernel_variance(double nu, double t, double tau) const {
  const double bt = B(t);
  double acc = 0.0;
  double s = tau;
  while (s < t) {
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
    const double seg_end = it == breaks_.end() ? t : std::min(*it, t);
    const double g = gamma(s);
    const double len = seg_end - s;
    acc += std::exp(2.0 * nu * (B(s) - bt)) * len * phi1(2.0 * nu * g * len);
    s = seg_end;
  }
  return 2.0 * nu * acc;
}

ScalarField fp_exact(const ScalarField& omega0, const DriftCurve& curve, double nu, double t, double tau) {
  if (!(t > tau)) throw Error(ErrorCode::kInvalidArgument, "fp_exact needs t > tau");
  if (!(nu > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fp_exact needs nu > 0");
  const Grid& g = omega0.grid();
  const int n = g.n;
  const double lambda = curve.dilation(nu, t, tau);
  const double kappa = curve.kernel_variance(nu, t, tau);

  // A(i, k): weight of source cell k in target cell i along one axis.
  std::vector<double> A(static_cast<std::size_t>(n) * n);
  const bool point = kappa >= 2.0 * g.h * g.h;
  const double s = std::sqrt(2.0 * kappa);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double d = g.x(i) - g.x(k) / lambda;
      double w;
      if (point) {
        w = g.h * std::exp(-d * d / (2.0 * kappa)) / std::sqrt(2.0 * kPi * kappa);
      } else {
        w = 0.5 * (std::erf((d + 0.5 * g.h) / s) - std::erf((d - 0.5 * g.h) / s));
      }
      A[static_cast<std::size_t>(i) * n + k] = w;
    }
  }
  // out = A W A^T with W(j, i) = omega0(i, j).
  std::vector<double> tmp(static_cast<std::size_t>(n) * n, 0.0);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += omega0(k, l) * A[static_cast<std::size_t>(i) * n + k];
      tmp[static_cast<std::size_t>(l) * n + i] = acc;
    }
  }
  ScalarField out(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int l = 0; l < n; ++l) acc += A[static_cast<std::size_t>(j) * n + l] * tmp[static_cast<std::size_t>(l) * n + i];
      out(i, j) = acc;
    }
  }
  const double m0 = grid_mass(omega0);
  const double m1 = grid_mass(out);
  if (std::abs(m0) > 0.0 && (m0 - m1) / std::abs(m0) > 1e-8) {
    std::ostringstream msg;
    msg << "exact evolution leaves the grid: mass " << m0 << " -> " << m1;
    throw Error(ErrorCode::kMassLoss, msg.str());
  }
  return out;
}

double InertiaLaw::evaluate(double I0, double t) const {
  if (alpha == 0.0) return I0 + beta * t;
  const double fixed = -beta / alpha;
  return fixed + (I0 - fixed) * std::exp(alpha * t);
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

// d/dt I for the radial Gaussian of variance s2 under the fixed-(a, b)
// equation, from  I' = nu (-int x.grad w + b int w x.grad psi + a int |x|^2 w).
double gaussian_inertia_rate(double s2, double a, double b, double nu) {
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  auto w = [s2](double r) { return std::exp(-r * r / (2.0 * s2)) / (2.0 * kPi * s2); };
  auto dw = [&](double r) { return -r / s2 * w(r); };
  auto enclosed = [s2](double r) { return -std::expm1(-r * r / (2.0 * s2)); };
  const double spread = gauss_kronrod<double, 61>::integrate([&](double r) { return -r * dw(r) * 2.0 * kPi * r; }, 0.0, inf);
  const double virial = gauss_kronrod<double, 61>::integrate(
      [&](double r) { return r > 0.0 ? w(r) * r * (-enclosed(r) / (2.0 * kPi * r)) * 2.0 * kPi * r : 0.0; }, 0.0,
      inf);
  const double second = gauss_kronrod<double, 61>::integrate([&](double r) { return r * r * w(r) * 2.0 * kPi * r; }, 0.0, inf);
  return nu * (spread + b * virial + a * second);
}

}  // namespace

InertiaLaw inertia_ode_oracle(double a, double b, double nu, double I0, double horizon,
                              const InertiaOracleOptions& options) {
  if (!(nu > 0.0) || !(I0 > 0.0) || !(horizon > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kInvalidArgument, "oracle needs nu, I0, horizon > 0 and finite (a, b)");
  }
  InertiaLaw law;

  // (i) quadrature on Gaussians spanning a factor 4 around I0.
  {
    std::vector<double> I, rate;
    for (int k = 0; k < 9; ++k) {
      const double s2 = I0 * std::pow(2.0, (k - 4) / 2.0);
      I.push_back(s2);  // a radial Gaussian has I = sigma^2
      rate.push_back(gaussian_inertia_rate(s2, a, b, nu));
    }
    const LineFit f = least_squares(I, rate);
    law.alpha_quadrature = f.slope;
    law.beta_quadrature = f.intercept;
  }
  law.alpha = law.alpha_quadrature;
  law.beta = law.beta_quadrature;

  // (ii) simulation from the Gaussian with I = I0.
  double i_max = I0;
  for (int k = 0; k <= 20; ++k) i_max = std::max(i_max, law.evaluate(I0, horizon * k / 20.0));
  const double half_width = options.half_width > 0.0 ? options.half_width : std::max(6.0, 7.0 * std::sqrt(i_max));
  const Grid grid = make_grid(options.n, half_width);
  FlowState state(gaussian_field(grid, I0));
  RunOptions run_opts;
  run_opts.horizon = horizon;
  run_opts.cadence = horizon / 200.0;
  run_opts.gaps = false;
  {
    const ScalarField& w = state.omega();
    double enstrophy = 0.0;
    for (double v : w.values()) enstrophy += v * v;
    run_opts.enstrophy_ceiling = 25.0 * enstrophy * grid.cell_area();
  }
  const RunResult res = run(state, fixed_ab_model(nu, a, b), run_opts);
  if (res.status == RunStatus::kFailed || res.status == RunStatus::kDegenerate) {
    throw Error(res.error.value_or(ErrorCode::kOracleDisagreement), "oracle simulation failed: " + res.message);
  }
  const auto& rows = res.trajectory.rows;
  if (rows.size() < 5) {
    throw Error(ErrorCode::kOracleDisagreement, "oracle simulation produced too few samples for a fit");
  }
  std::vector<double> I, rate;
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    I.push_back(rows[k].functionals.inertia);
    rate.push_back((rows[k + 1].functionals.inertia - rows[k - 1].functionals.inertia) /
                   (rows[k + 1].time - rows[k - 1].time));
  }
  const LineFit f = least_squares(I, rate);
  law.alpha_simulation = f.slope;
  law.beta_simulation = f.intercept;

  const auto [lo, hi] = std::minmax_element(I.begin(), I.end());
  double scale = 0.0, diff = 0.0;
  for (double x : {*lo, *hi}) {
    scale = std::max(scale, std::abs(law.alpha * x + law.beta));
    diff = std::max(diff, std::abs((law.alpha - law.alpha_simulation) * x + (law.beta - law.beta_simulation)));
  }
  law.disagreement = scale > 0.0 ? diff / scale : diff;
  if (!(law.disagreement <= options.tolerance)) {
    std::ostringstream msg;
    msg << "inertia law routes disagree by " << law.disagreement << ": quadrature (" << law.alpha_quadrature << ", "
        << law.beta_quadrature << "), simulation (" << law.alpha_simulation << ", " << law.beta_simulation << ")";
    throw Error(ErrorCode::kOracleDisagreement, msg.str());
  }
  for (int k = 0; k < options.curve_points; ++k) {
    const double t = horizon * k / std::max(1, options.curve_points - 1);
    law.times.push_back(t);
    law.inertia.push_back(law.evaluate(I0, t));
  }
  return law;
}

}  // namespace vortexflow
