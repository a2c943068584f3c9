#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "vortexflow/dynamics.hpp"
#include "vortexflow/grid.hpp"

namespace vortexflow::app {

struct GridConfig {
  int n = 128;
  double half_width = 8.0;
};

struct ModelConfig {
  Variant variant = Variant::kNavierStokes;
  double nu = 0.0;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> I_ref;  ///< constrained_I; defaults to the initial inertia
};

/// Multiplicative perturbation w (1 + amplitude r^m cos(m (theta - phase)) / (ell^m + r^m)).
struct PerturbationConfig {
  double amplitude = 0.0;
  int mode = 2;
  double ell = 1.0;
  bool random_phase = false;  ///< phase drawn from the scenario seed
};

struct FieldConfig {
  enum class Kind { kGaussian, kOseen, kPatch, kMeanfield, kRescaledOseen, kFile };
  Kind kind = Kind::kGaussian;
  double sigma2 = 1.0;           // gaussian
  Vec2 center;                   // gaussian
  double t = 0.0;                // oseen
  std::optional<double> nu;      // oseen; defaults to the model viscosity
  double R = 1.0;                // patch
  double eps = 0.1;              // patch
  double a = -1.0;               // meanfield
  double b = 0.0;                // meanfield
  std::filesystem::path path;    // file
  std::optional<PerturbationConfig> perturbation;
};

struct RunConfig {
  double horizon = 1.0;
  std::optional<double> dt;  ///< empty means "auto"
  double dt_max = 0.05;
  double cadence = 0.0;
  std::vector<double> snapshot_times;
  std::optional<double> ceiling;            ///< on max omega
  std::optional<double> enstrophy_ceiling;  ///< on int omega^2
};

struct ScenarioConfig {
  GridConfig grid;
  ModelConfig model;
  FieldConfig initial;
  std::optional<FieldConfig> reference;
  RunConfig run;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  nlohmann::json source;  ///< the validated input, echoed into manifests
};

/// Strict parse: every section is checked before anything is computed and
/// unknown keys are rejected. Throws Error(kConfig) with the offending path.
ScenarioConfig parse_scenario(const nlohmann::json& j);
FieldConfig parse_field(const nlohmann::json& j, const std::string& where);

/// Reads and parses a JSON file; kIo if unreadable, kConfig if malformed.
nlohmann::json load_json(const std::filesystem::path& path);

/// Builds a field on the grid. `model_nu` feeds oseen when it has no nu.
ScalarField build_field(const FieldConfig& cfg, const Grid& grid, double model_nu, std::uint64_t seed);

ModelSpec build_model(const ModelConfig& cfg, const ScalarField& initial);

}  // namespace vortexflow::app
