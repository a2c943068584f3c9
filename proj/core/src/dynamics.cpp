#include "vortexflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vortexflow/poisson.hpp"
#include "vortexflow/reduce.hpp"

namespace vortexflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bernoulli function x / (e^x - 1).
double bernoulli(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - 0.5 * x + x * x / 12.0;
  return x / std::expm1(x);
}

double bernoulli_derivative(double x) {
  if (std::abs(x) < 1e-4) return -0.5 + x / 6.0 - x * x * x / 180.0;
  const double em1 = std::expm1(x);
  return (em1 - x * (em1 + 1.0)) / (em1 * em1);
}

// Centered slope, clamped so both reconstructed face values stay >= 0.
// Extremum-clipping limiters degrade to first order at the vortex core and
// their numerical dissipation swamps the physical entropy production.
double positive_slope(double left, double right, double w) {
  if (!(w > 0.0)) return 0.0;
  return std::clamp(0.5 * (left + right), -2.0 * w, 2.0 * w);
}

double discrete_mass(const ScalarField& f) { return f.grid().cell_area() * pairwise_sum(f.values()); }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void axpy(ScalarField& y, double alpha, const ScalarField& x) {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += alpha * x[k];
}

bool needs_drift_diffusion(const ModelSpec& m) { return m.variant != Variant::kEuler && m.nu > 0.0; }

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kEuler: return "euler";
    case Variant::kNavierStokes: return "navier_stokes";
    case Variant::kRescaledNs: return "rescaled_ns";
    case Variant::kConstrainedI: return "constrained_I";
    case Variant::kConstrainedEI: return "constrained_EI";
    case Variant::kFixedAb: return "fixed_ab";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : {Variant::kEuler, Variant::kNavierStokes, Variant::kRescaledNs, Variant::kConstrainedI,
                    Variant::kConstrainedEI, Variant::kFixedAb}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

void ModelSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (!std::isfinite(nu) || nu < 0.0) fail("nu must be finite and nonnegative");
  if (variant == Variant::kEuler) {
    if (nu != 0.0) fail("euler requires nu = 0");
  } else if (!(nu > 0.0)) {
    fail(std::string(to_string(variant)) + " requires nu > 0");
  }
  const bool ab = variant == Variant::kFixedAb;
  if (ab != (fixed_a.has_value() && fixed_b.has_value()) || (!ab && (fixed_a || fixed_b))) {
    fail("fixed_a and fixed_b are given exactly for fixed_ab");
  }
  if (ab && !(std::isfinite(*fixed_a) && std::isfinite(*fixed_b))) fail("fixed_a, fixed_b must be finite");
  const bool iref = variant == Variant::kConstrainedI;
  if (iref != I_ref.has_value()) fail("I_ref is given exactly for constrained_I");
  if (iref && !(*I_ref > 0.0 && std::isfinite(*I_ref))) fail("I_ref must be positive");
}

ModelSpec euler_model() { return ModelSpec{Variant::kEuler, 0.0, {}, {}, {}}; }
ModelSpec navier_stokes_model(double nu) { return ModelSpec{Variant::kNavierStokes, nu, {}, {}, {}}; }
ModelSpec rescaled_ns_model(double nu) { return ModelSpec{Variant::kRescaledNs, nu, {}, {}, {}}; }
ModelSpec constrained_I_model(double nu, double I_ref) {
  return ModelSpec{Variant::kConstrainedI, nu, {}, {}, I_ref};
}
ModelSpec constrained_EI_model(double nu) { return ModelSpec{Variant::kConstrainedEI, nu, {}, {}, {}}; }
ModelSpec fixed_ab_model(double nu, double a, double b) { return ModelSpec{Variant::kFixedAb, nu, a, b, {}}; }

FlowState::FlowState(ScalarField omega, double time) : omega_(std::move(omega)), time_(time) {}

void FlowState::set_omega(ScalarField omega) {
  omega_ = std::move(omega);
  psi_.reset();
  u_.reset();
}

const ScalarField& FlowState::psi() const {
  if (!psi_) psi_ = solve_streamfunction(omega_);
  return *psi_;
}

const VectorField& FlowState::velocity() const {
  if (!u_) u_ = vortexflow::velocity(psi());
  return *u_;
}

DriftCoefficients drift_coefficients(const FlowState& state, const ModelSpec& model) {
  switch (model.variant) {
    case Variant::kEuler:
    case Variant::kNavierStokes: return {0.0, 0.0};
    case Variant::kRescaledNs: return {-0.5, 0.0};
    case Variant::kConstrainedI: return {-1.0 / *model.I_ref, 0.0};
    case Variant::kFixedAb: return {*model.fixed_a, *model.fixed_b};
    case Variant::kConstrainedEI: return discrete_multipliers(state.omega(), state.psi(), model.nu);
  }
  return {0.0, 0.0};
}

ScalarField advection_tendency(const ScalarField& omega, const ScalarField& psi) {
  const Grid& g = omega.grid();
  const int n = g.n;
  // psi at cell corners (p + 1/2, q + 1/2), p, q in [-1, n - 1], edge values clamped.
  const int nc = n + 1;
  std::vector<double> corner(static_cast<std::size_t>(nc) * nc);
  auto clamp = [n](int i) { return std::clamp(i, 0, n - 1); };
  for (int q = -1; q < n; ++q) {
    for (int p = -1; p < n; ++p) {
      corner[static_cast<std::size_t>(q + 1) * nc + (p + 1)] =
          0.25 * (psi(clamp(p), clamp(q)) + psi(clamp(p + 1), clamp(q)) + psi(clamp(p), clamp(q + 1)) +
                  psi(clamp(p + 1), clamp(q + 1)));
    }
  }
  auto c = [&](int p, int q) { return corner[static_cast<std::size_t>(q + 1) * nc + (p + 1)]; };

  auto face_value = [&](double u, auto&& at, int i) {
    // Upwind reconstruction at face i + 1/2 along one line.
    if (u >= 0.0) {
      const double w = at(i);
      const double s = (i > 0 && i + 1 < n) ? positive_slope(w - at(i - 1), at(i + 1) - w, w) : 0.0;
      return w + 0.5 * s;
    }
    const double w = at(i + 1);
    const double s = (i + 2 < n) ? positive_slope(w - at(i), at(i + 2) - w, w) : 0.0;
    return w - 0.5 * s;
  };

  std::vector<double> fx(g.node_count(), 0.0);  // flux through the east face of (i, j)
  std::vector<double> fy(g.node_count(), 0.0);  // flux through the north face of (i, j)
  for (int j = 0; j < n; ++j) {
    auto row = [&](int i) { return omega(i, j); };
    for (int i = 0; i + 1 < n; ++i) {
      const double u = -(c(i, j) - c(i, j - 1)) / g.h;
      fx[g.index(i, j)] = u * face_value(u, row, i);
    }
  }
  for (int i = 0; i < n; ++i) {
    auto col = [&](int j) { return omega(i, j); };
    for (int j = 0; j + 1 < n; ++j) {
      const double v = (c(i, j) - c(i - 1, j)) / g.h;
      fy[g.index(i, j)] = v * face_value(v, col, j);
    }
  }
  ScalarField out(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = g.index(i, j);
      const double west = i > 0 ? fx[g.index(i - 1, j)] : 0.0;
      const double south = j > 0 ? fy[g.index(i, j - 1)] : 0.0;
      out[k] = -(fx[k] - west + fy[k] - south) / g.h;
    }
  }
  return out;
}

ScalarField drift_diffusion_tendency(const ScalarField& omega, const ScalarField& psi, double nu, double a,
                                     double b) {
  const Grid& g = omega.grid();
  const int n = g.n;
  std::vector<double> phi(g.node_count());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = g.index(i, j);
      const double r2 = g.x(i) * g.x(i) + g.y(j) * g.y(j);
      phi[k] = 0.5 * a * r2 + (b != 0.0 ? b * psi[k] : 0.0);
    }
  }
  // Scharfetter-Gummel flux from k0 to k1.
  auto flux = [&](std::size_t k0, std::size_t k1) {
    const double d = phi[k1] - phi[k0];
    return nu / g.h * (bernoulli(-d) * omega[k0] - bernoulli(d) * omega[k1]);
  };
  std::vector<double> fx(g.node_count(), 0.0);
  std::vector<double> fy(g.node_count(), 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = g.index(i, j);
      if (i + 1 < n) fx[k] = flux(k, k + 1);
      if (j + 1 < n) fy[k] = flux(k, k + static_cast<std::size_t>(n));
    }
  }
  ScalarField out(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = g.index(i, j);
      const double west = i > 0 ? fx[k - 1] : 0.0;
      const double south = j > 0 ? fy[k - static_cast<std::size_t>(n)] : 0.0;
      out[k] = -(fx[k] - west + fy[k] - south) / g.h;
    }
  }
  return out;
}

DriftCoefficients discrete_multipliers(const ScalarField& omega, const ScalarField& psi, double nu) {
  const Multipliers start = multipliers(omega, psi);
  const Grid& g = omega.grid();
  const int n = g.n;
  const Vec2 center = moments(omega).center;
  std::vector<double> quad(g.node_count());  // |x|^2 / 2 in the drift potential
  std::vector<double> moment(g.node_count());  // |x - M|^2 / 2 for the inertia
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x = g.x(i), y = g.y(j);
      quad[g.index(i, j)] = 0.5 * (x * x + y * y);
      moment[g.index(i, j)] = 0.5 * ((x - center.x) * (x - center.x) + (y - center.y) * (y - center.y));
    }
  }
  // Advection contributions are independent of (a, b).
  const ScalarField adv = advection_tendency(omega, psi);
  const double area = g.cell_area();
  const double e_adv = area * pairwise_reduce(omega.size(), [&](std::size_t k) { return psi[k] * adv[k]; });
  const double i_adv = area * pairwise_reduce(omega.size(), [&](std::size_t k) { return moment[k] * adv[k]; });

  // <f, div-form tendency> = h sum over faces of F (f1 - f0); F and dF/d(a, b) in closed form.
  struct Residual {
    double e, i, de_da, de_db, di_da, di_db;
  };
  auto residual = [&](double a, double b) {
    Residual r{e_adv, i_adv, 0, 0, 0, 0};
    auto face = [&](std::size_t k0, std::size_t k1) {
      const double dq = quad[k1] - quad[k0];
      const double dp = psi[k1] - psi[k0];
      const double d = a * dq + b * dp;
      const double flux = nu / g.h * (bernoulli(-d) * omega[k0] - bernoulli(d) * omega[k1]);
      const double dflux = nu / g.h * (-bernoulli_derivative(-d) * omega[k0] - bernoulli_derivative(d) * omega[k1]);
      const double fe = g.h * dp;
      const double fi = g.h * (moment[k1] - moment[k0]);
      r.e += flux * fe;
      r.i += flux * fi;
      r.de_da += dflux * dq * fe;
      r.de_db += dflux * dp * fe;
      r.di_da += dflux * dq * fi;
      r.di_db += dflux * dp * fi;
    };
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const std::size_t k = g.index(i, j);
        if (i + 1 < n) face(k, k + 1);
        if (j + 1 < n) face(k, k + static_cast<std::size_t>(n));
      }
    }
    return r;
  };

  double a = start.a, b = start.b;
  for (int iter = 0; iter < 8; ++iter) {
    const Residual r = residual(a, b);
    const double det = r.de_da * r.di_db - r.de_db * r.di_da;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) break;
    const double da = -(r.e * r.di_db - r.de_db * r.i) / det;
    const double db = -(r.de_da * r.i - r.e * r.di_da) / det;
    a += da;
    b += db;
    if (std::abs(da) <= 1e-14 * (1.0 + std::abs(a)) && std::abs(db) <= 1e-14 * (1.0 + std::abs(b))) break;
  }
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kDegenerateDenominator, "discrete multiplier system is singular");
  }
  return {a, b};
}

ScalarField tendency(const FlowState& state, const ModelSpec& model) {
  model.validate();
  ScalarField out = advection_tendency(state.omega(), state.psi());
  if (needs_drift_diffusion(model)) {
    const DriftCoefficients c = drift_coefficients(state, model);
    axpy(out, 1.0, drift_diffusion_tendency(state.omega(), state.psi(), model.nu, c.a, c.b));
  }
  return out;
}

double cfl_limit(const FlowState& state, const ModelSpec& model) {
  const Grid& g = state.grid();
  const VectorField& u = state.velocity();
  double umax = 0.0;
  for (std::size_t k = 0; k < u.ux.size(); ++k) umax = std::max(umax, std::hypot(u.ux[k], u.uy[k]));
  double limit = umax > 0.0 ? g.h / umax : kInf;
  if (needs_drift_diffusion(model)) {
    DriftCoefficients c;
    try {
      c = drift_coefficients(state, model);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateDenominator) throw;
    }
    // |grad Phi| <= |b| |grad psi| + |a| |x|; the velocity has the same modulus as grad psi.
    const double drift = std::abs(c.b) * umax + std::abs(c.a) * std::sqrt(2.0) * g.half_width;
    if (drift > 0.0) limit = std::min(limit, g.h / (model.nu * drift));
    limit = std::min(limit, g.h * g.h / (2.0 * model.nu));
  }
  return limit;
}

double cfl_dt(const FlowState& state, const ModelSpec& model, double dt_max) {
  return std::min(dt_max, kCflSafety * cfl_limit(state, model));
}

namespace {

// SSP-RK2 for d_t w = L(w) over tau.
template <typename Rhs>
ScalarField heun(const ScalarField& w0, double tau, Rhs&& rhs) {
  ScalarField w1 = w0;
  axpy(w1, tau, rhs(w0));
  ScalarField w2 = w1;
  axpy(w2, tau, rhs(w1));
  for (std::size_t k = 0; k < w2.size(); ++k) w2[k] = 0.5 * (w0[k] + w2[k]);
  return w2;
}

ScalarField drift_diffusion_half(const FlowState& start, const ModelSpec& model, const DriftCoefficients& c,
                                 double tau) {
  bool first = true;
  return heun(start.omega(), tau, [&](const ScalarField& w) {
    if (c.b == 0.0) return drift_diffusion_tendency(w, w, model.nu, c.a, 0.0);
    const ScalarField psi = first ? start.psi() : solve_streamfunction(w);
    first = false;
    return drift_diffusion_tendency(w, psi, model.nu, c.a, c.b);
  });
}

}  // namespace

FlowState step(const FlowState& state, const ModelSpec& model, double dt, StepReport* report) {
  model.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  const double limit = cfl_limit(state, model);
  if (dt > limit * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the stability limit " << limit;
    throw Error(ErrorCode::kCflViolation, msg.str());
  }
  const double mass0 = discrete_mass(state.omega());
  StepReport rep;
  rep.dt = dt;

  ScalarField w = state.omega();
  const bool dd = needs_drift_diffusion(model);
  if (dd) {
    rep.drift = drift_coefficients(state, model);
    w = drift_diffusion_half(state, model, rep.drift, 0.5 * dt);
  }
  {
    bool first = !dd;
    w = heun(w, dt, [&](const ScalarField& x) {
      const ScalarField psi = first ? state.psi() : solve_streamfunction(x);
      first = false;
      return advection_tendency(x, psi);
    });
  }
  if (dd) {
    FlowState mid(w, state.time());
    const DriftCoefficients c = drift_coefficients(mid, model);
    w = drift_diffusion_half(mid, model, c, 0.5 * dt);
  }
  if (!w.all_finite()) throw Error(ErrorCode::kNonFinite, "non-finite vorticity after step");

  const double mass1 = discrete_mass(w);
  rep.mass_change = mass1 - mass0;
  double clipped = 0.0;
  for (double& v : w.values()) {
    if (v < 0.0) {
      clipped -= v;
      v = 0.0;
    }
  }
  rep.clipped_mass = clipped * w.grid().cell_area();
  if (clipped > 0.0) {
    const double scale = mass1 / discrete_mass(w);
    for (double& v : w.values()) v *= scale;
  }
  if (report) *report = rep;
  return FlowState(std::move(w), state.time() + dt);
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kCompleted: return "completed";
    case RunStatus::kDegenerate: return "degenerate";
    case RunStatus::kBlowUp: return "blow_up";
    case RunStatus::kFailed: return "failed";
  }
  return "unknown";
}

DiagnosticsRow diagnose_state(const FlowState& state, const ModelSpec& model,
                              const std::optional<ScalarField>& reference, bool gaps) {
  DiagnosticsRow row;
  row.time = state.time();
  const ScalarField& w = state.omega();
  const ScalarField& psi = state.psi();
  row.functionals = evaluate_functionals(w, psi);
  try {
    row.drift = drift_coefficients(state, model);
    row.dissipation_rate = dissipation_rate(w, psi, row.drift.a, row.drift.b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateDenominator) throw;
    row.drift = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    row.dissipation_rate = std::numeric_limits<double>::quiet_NaN();
  }
  if (gaps) {
    row.gaps = inequality_gaps(w, psi);
  } else {
    row.gaps = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  }
  if (reference) {
    row.l1_to_reference = l1_distance(w, *reference);
    try {
      row.rel_entropy_to_reference = relative_entropy(w, *reference);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSupportMismatch) throw;
    }
  }
  return row;
}

RunResult run(const FlowState& initial, const ModelSpec& model, const RunOptions& options) {
  model.validate();
  if (!(options.horizon >= 0.0) || !(options.cadence >= 0.0) || !(options.dt_max > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "horizon, cadence must be nonnegative and dt_max positive");
  }
  if (options.dt && !(*options.dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");

  RunResult result;
  result.final_state = initial;
  const double t0 = initial.time();
  const double t_end = t0 + options.horizon;
  std::vector<double> snaps = options.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  while (next_snap < snaps.size() && snaps[next_snap] < t0) ++next_snap;
  long next_sample = 1;
  auto sample_time = [&](long k) { return std::min(t_end, t0 + static_cast<double>(k) * options.cadence); };

  double clipped_since_row = 0.0;
  auto add_row = [&](const FlowState& s) {
    DiagnosticsRow row = diagnose_state(s, model, options.reference, options.gaps);
    row.clipped_mass = clipped_since_row;
    clipped_since_row = 0.0;
    result.trajectory.rows.push_back(std::move(row));
  };
  auto maybe_snapshot = [&](const FlowState& s) {
    while (next_snap < snaps.size() && snaps[next_snap] <= s.time() + 1e-12 * std::max(1.0, std::abs(s.time()))) {
      result.trajectory.snapshots.emplace_back(s.time(), s.omega());
      ++next_snap;
    }
  };
  auto fail = [&](RunStatus status, ErrorCode code, const std::string& msg) {
    result.status = status;
    result.error = code;
    result.message = msg;
    result.trajectory.snapshots.emplace_back(result.final_state.time(), result.final_state.omega());
  };

  FlowState state = initial;
  try {
    add_row(state);
  } catch (const Error& e) {
    fail(e.code() == ErrorCode::kDegenerateDenominator ? RunStatus::kDegenerate : RunStatus::kFailed, e.code(),
         e.what());
    return result;
  }
  maybe_snapshot(state);

  while (state.time() < t_end) {
    try {
      double dt = options.dt ? *options.dt : cfl_dt(state, model, options.dt_max);
      double target = t_end;
      if (options.cadence > 0.0) target = std::min(target, sample_time(next_sample));
      if (next_snap < snaps.size()) target = std::min(target, snaps[next_snap]);
      // Spread the distance to the next output time evenly; a short stub step
      // would jolt the splitting error and show up in the rate diagnostics.
      const double remaining = target - state.time();
      const double pieces = std::max(1.0, std::ceil(remaining / dt - 1e-9));
      dt = remaining / pieces;
      const bool landed = pieces == 1.0;
      if (!(dt > 0.0)) break;
      StepReport rep;
      FlowState next = step(state, model, dt, &rep);
      if (landed) next.set_time(target);
      ++result.steps;
      result.clipped_mass_total += rep.clipped_mass;
      clipped_since_row += rep.clipped_mass;
      result.max_step_mass_change = std::max(result.max_step_mass_change, std::abs(rep.mass_change));
      state = std::move(next);
      result.final_state = state;

      const double wmax = max_abs(state.omega().values());
      double enstrophy = 0.0;
      if (options.enstrophy_ceiling) {
        enstrophy = state.grid().cell_area() *
                    pairwise_reduce(state.omega().size(), [&](std::size_t k) { return state.omega()[k] * state.omega()[k]; });
      }
      const bool blow = (options.omega_ceiling && wmax > *options.omega_ceiling) ||
                        (options.enstrophy_ceiling && enstrophy > *options.enstrophy_ceiling);
      const bool on_sample = options.cadence == 0.0 || (landed && state.time() >= sample_time(next_sample));
      if (on_sample || blow) {
        add_row(state);
        while (options.cadence > 0.0 && sample_time(next_sample) <= state.time() && sample_time(next_sample) < t_end) {
          ++next_sample;
        }
      }
      maybe_snapshot(state);
      if (blow) {
        std::ostringstream msg;
        msg << "blow-up indicator at t = " << state.time() << ": max omega " << wmax;
        if (options.enstrophy_ceiling) msg << ", enstrophy " << enstrophy;
        fail(RunStatus::kBlowUp, ErrorCode::kBlowUpDetected, msg.str());
        return result;
      }
    } catch (const Error& e) {
      fail(e.code() == ErrorCode::kDegenerateDenominator ? RunStatus::kDegenerate : RunStatus::kFailed, e.code(),
           e.what());
      return result;
    }
  }
  return result;
}

}  // namespace vortexflow
