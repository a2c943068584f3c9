#pragma once

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vortexflow/errors.hpp"
#include "vortexflow/functionals.hpp"
#include "vortexflow/grid.hpp"

namespace vortexflow {

enum class Variant {
  kEuler,
  kNavierStokes,
  kRescaledNs,
  kConstrainedI,
  kConstrainedEI,
  kFixedAb,
};

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

/// Equation variant plus its parameters. All variants share
///   d_t omega + div(u omega) = nu div(grad omega - omega grad Phi),
///   Phi = b psi + a |x|^2 / 2,
/// and differ only in how (a, b) are chosen.
struct ModelSpec {
  Variant variant = Variant::kNavierStokes;
  double nu = 0.0;
  std::optional<double> fixed_a;
  std::optional<double> fixed_b;
  std::optional<double> I_ref;

  /// Throws kInvalidArgument on a parameter set that does not fit the variant.
  void validate() const;
};

ModelSpec euler_model();
ModelSpec navier_stokes_model(double nu);
ModelSpec rescaled_ns_model(double nu);
ModelSpec constrained_I_model(double nu, double I_ref);
ModelSpec constrained_EI_model(double nu);
ModelSpec fixed_ab_model(double nu, double a, double b);

class FlowState {
 public:
  FlowState() = default;
  explicit FlowState(ScalarField omega, double time = 0.0);

  const Grid& grid() const { return omega_.grid(); }
  const ScalarField& omega() const { return omega_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  void set_omega(ScalarField omega);

  /// Streamfunction and cell velocity, computed on first use and cached.
  const ScalarField& psi() const;
  const VectorField& velocity() const;

 private:
  ScalarField omega_;
  double time_ = 0.0;
  mutable std::optional<ScalarField> psi_;
  mutable std::optional<VectorField> u_;
};

struct DriftCoefficients {
  double a = 0.0;
  double b = 0.0;
};

/// Drift coefficients (a, b) the variant applies to this state. For
/// constrained_EI these are discrete_multipliers; throws
/// kDegenerateDenominator when the multipliers are undefined.
DriftCoefficients drift_coefficients(const FlowState& state, const ModelSpec& model);

/// The (a, b) for which the full semi-discrete tendency leaves the grid
/// energy h^2/2 sum psi omega and inertia unchanged. Newton iteration
/// started from the quadrature multipliers; differs from them by O(h^2).
DriftCoefficients discrete_multipliers(const ScalarField& omega, const ScalarField& psi, double nu);

/// Semi-discrete right-hand side: advection by face-staggered velocities
/// with second-order upwind reconstruction, plus exponentially fitted
/// drift-diffusion fluxes. Fluxes through the outer wall are zero.
ScalarField tendency(const FlowState& state, const ModelSpec& model);

/// Parts of the tendency, exposed for tests.
ScalarField advection_tendency(const ScalarField& omega, const ScalarField& psi);
ScalarField drift_diffusion_tendency(const ScalarField& omega, const ScalarField& psi, double nu,
                                     double a, double b);

/// Stability limit min(h/|u|, h/(nu |grad Phi|), h^2/(2 nu)) without safety
/// factor; +inf for a field at rest under a pure advection model.
double cfl_limit(const FlowState& state, const ModelSpec& model);

inline constexpr double kCflSafety = 0.4;

/// kCflSafety * cfl_limit, capped at dt_max.
double cfl_dt(const FlowState& state, const ModelSpec& model, double dt_max = 0.05);

struct StepReport {
  double dt = 0.0;
  double clipped_mass = 0.0;   ///< mass removed by clipping negatives, before renormalization
  double mass_change = 0.0;    ///< discrete mass change of the step before clipping
  DriftCoefficients drift;     ///< (a, b) used in the first drift-diffusion half-step
};

/// One Strang step: drift-diffusion dt/2, advection dt, drift-diffusion
/// dt/2, each with a two-stage SSP Runge-Kutta. Negative values are clipped
/// and the field rescaled to its pre-clip mass. Throws kCflViolation if dt
/// exceeds cfl_limit and kNonFinite on overflow.
FlowState step(const FlowState& state, const ModelSpec& model, double dt, StepReport* report = nullptr);

struct DiagnosticsRow {
  double time = 0.0;
  Functionals functionals;
  double dissipation_rate = 0.0;  ///< with the variant's (a, b)
  double l1_to_reference = std::numeric_limits<double>::quiet_NaN();
  double rel_entropy_to_reference = std::numeric_limits<double>::quiet_NaN();
  InequalityGaps gaps;
  double clipped_mass = 0.0;  ///< accumulated since the previous row
  DriftCoefficients drift;
};

struct Trajectory {
  std::vector<DiagnosticsRow> rows;
  std::vector<std::pair<double, ScalarField>> snapshots;
};

enum class RunStatus { kCompleted, kDegenerate, kBlowUp, kFailed };
std::string_view to_string(RunStatus s);

struct RunOptions {
  double horizon = 1.0;
  std::optional<double> dt;  ///< fixed step; cfl_dt each step when empty
  double dt_max = 0.05;
  double cadence = 0.0;      ///< diagnostics spacing in time; 0 means every step
  std::vector<double> snapshot_times;
  std::optional<double> omega_ceiling;      ///< BlowUpDetected when max omega exceeds it
  std::optional<double> enstrophy_ceiling;  ///< BlowUpDetected when int omega^2 exceeds it
  std::optional<ScalarField> reference;     ///< for the L1 and relative-entropy columns
  bool gaps = true;                         ///< fill the inequality-gap columns
};

struct RunResult {
  Trajectory trajectory;
  FlowState final_state;
  RunStatus status = RunStatus::kCompleted;
  std::optional<ErrorCode> error;
  std::string message;
  double clipped_mass_total = 0.0;
  double max_step_mass_change = 0.0;
  long steps = 0;
};

/// Integrates to the horizon, sampling diagnostics on the cadence (times are
/// hit exactly). Errors end the run early with the partial trajectory and
/// the last good state; the status tells why.
RunResult run(const FlowState& initial, const ModelSpec& model, const RunOptions& options);

DiagnosticsRow diagnose_state(const FlowState& state, const ModelSpec& model,
                              const std::optional<ScalarField>& reference = std::nullopt,
                              bool gaps = true);

}  // namespace vortexflow
