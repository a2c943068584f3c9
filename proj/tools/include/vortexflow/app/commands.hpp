#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"

#include "vortexflow/app/config.hpp"

namespace vortexflow::app {

/// What every subcommand hands back: the process exit code, a flat object
/// of scalar results (aggregated by sweep) and a message for stderr.
struct CommandResult {
  int exit_code = 0;
  nlohmann::json summary = nlohmann::json::object();
  std::string message;
};

struct MeanfieldArgs {
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> E;
  std::optional<double> I;
  std::filesystem::path out = "meanfield";
};

/// (a, b) targets solve the canonical problem (a defaults to -1, b to 0);
/// (E, I) targets go through the microcanonical inversion. Writes
/// out/profile.csv and out/header.json and prints the header.
CommandResult cmd_meanfield(const MeanfieldArgs& args, std::ostream& out);
CommandResult cmd_meanfield(const nlohmann::json& config, const std::filesystem::path& out_dir, std::ostream& out);

/// Runs a scenario; the manifest is written on every path that knows its
/// output directory.
CommandResult cmd_simulate(const std::filesystem::path& config_path, bool plot, std::ostream& log);
CommandResult cmd_simulate(const nlohmann::json& config, bool plot, std::ostream& log);

struct DiagnoseArgs {
  std::optional<std::filesystem::path> file;
  std::optional<std::string> reference;  ///< e.g. "gaussian(1)", "patch(1, 0.05)"
  int n = 256;
  double half_width = 8.0;
  std::optional<std::filesystem::path> out;  ///< also write the JSON here
};

/// Parses "name(p1, p2, ...)" into a field description.
FieldConfig parse_reference_spec(const std::string& spec);

CommandResult cmd_diagnose(const DiagnoseArgs& args, std::ostream& out);
/// Sweep form: {"grid": {n, half_width}, "field": {...}}.
CommandResult cmd_diagnose(const nlohmann::json& config, const std::filesystem::path& out_dir, std::ostream& out);

/// {"command": "simulate"|"meanfield"|"diagnose", "base": {...},
///  "parameters": {"dotted.path": [values...]}, "output_dir": "..."}
CommandResult cmd_sweep(const std::filesystem::path& config_path, std::optional<int> threads, std::ostream& log);
CommandResult cmd_sweep(const nlohmann::json& config, std::optional<int> threads, std::ostream& log);

/// Explicit request or hardware concurrency, capped by VORTEXFLOW_THREADS
/// and by the number of cells.
int sweep_thread_count(std::optional<int> requested, std::size_t cells);

}  // namespace vortexflow::app
