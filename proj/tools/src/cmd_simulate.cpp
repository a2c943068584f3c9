#include <chrono>
#include <cmath>
#include <filesystem>

#include "vortexflow/app/commands.hpp"
#include "vortexflow/app/exit_codes.hpp"
#include "vortexflow/app/output.hpp"
#include "vortexflow/app/plot.hpp"
#include "vortexflow/functionals.hpp"
#include "vortexflow/snapshot.hpp"

namespace vortexflow::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04zu.vf2d", k);
  return buf;
}

// Least-squares slope of I against time; NaN with fewer than two rows.
double inertia_slope(const std::vector<DiagnosticsRow>& rows) {
  if (rows.size() < 2) return std::nan("");
  double st = 0, si = 0;
  for (const auto& r : rows) {
    st += r.time;
    si += r.functionals.inertia;
  }
  st /= rows.size();
  si /= rows.size();
  double num = 0, den = 0;
  for (const auto& r : rows) {
    num += (r.time - st) * (r.functionals.inertia - si);
    den += (r.time - st) * (r.time - st);
  }
  return den > 0 ? num / den : std::nan("");
}

void write_plots(const fs::path& dir, const std::vector<DiagnosticsRow>& rows, const ScalarField& final_field) {
  fs::create_directories(dir);
  std::vector<double> t;
  std::vector<std::vector<double>> cols(kDiagnosticsColumns.size());
  for (const auto& r : rows) {
    const auto v = diagnostics_values(r);
    for (std::size_t k = 0; k < v.size(); ++k) cols[k].push_back(v[k]);
  }
  for (std::size_t k = 1; k < cols.size(); ++k) {
    write_text_atomic(dir / (kDiagnosticsColumns[k] + ".svg"),
                      svg_line_chart(kDiagnosticsColumns[k], "time", cols[0], cols[k]));
  }
  write_text_atomic(dir / "final_omega.svg", svg_heatmap("omega", final_field));
}

json null_if_nan(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

CommandResult cmd_simulate(const fs::path& config_path, bool plot, std::ostream& log) {
  json j;
  try {
    j = load_json(config_path);
  } catch (const Error& e) {
    return {exit_code_for(e.code()), json{{"exit_code", exit_code_for(e.code())}}, e.what()};
  }
  return cmd_simulate(j, plot, log);
}

CommandResult cmd_simulate(const json& config, bool plot, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  CommandResult result;
  json manifest{{"version", version_string()}, {"config", config}};
  std::optional<fs::path> out_dir;
  // Even an invalid config can name where its manifest should go.
  if (config.is_object() && config.contains("output_dir") && config["output_dir"].is_string()) {
    out_dir = config["output_dir"].get<std::string>();
  }

  auto record_error = [&](int code, const std::string& status, const std::string& message) {
    result.exit_code = code;
    result.message = message;
    manifest["status"] = status;
    manifest["error"] = message;
  };

  try {
    const ScenarioConfig cfg = parse_scenario(config);
    out_dir = cfg.output_dir;
    fs::create_directories(*out_dir);

    const Grid grid = make_grid(cfg.grid.n, cfg.grid.half_width);
    const ScalarField initial = build_field(cfg.initial, grid, cfg.model.nu, cfg.seed);
    const ModelSpec model = build_model(cfg.model, initial);
    manifest["model"] = {{"variant", to_string(model.variant)}, {"nu", model.nu}};
    if (model.fixed_a) manifest["model"]["a"] = *model.fixed_a;
    if (model.fixed_b) manifest["model"]["b"] = *model.fixed_b;
    if (model.I_ref) manifest["model"]["I_ref"] = *model.I_ref;

    RunOptions opts;
    opts.horizon = cfg.run.horizon;
    opts.dt = cfg.run.dt;
    opts.dt_max = cfg.run.dt_max;
    opts.cadence = cfg.run.cadence;
    opts.snapshot_times = cfg.run.snapshot_times;
    opts.omega_ceiling = cfg.run.ceiling;
    opts.enstrophy_ceiling = cfg.run.enstrophy_ceiling;
    if (cfg.reference) opts.reference = build_field(*cfg.reference, grid, cfg.model.nu, cfg.seed);

    log << "simulate: " << to_string(model.variant) << " n=" << grid.n << " L=" << grid.half_width
        << " T=" << opts.horizon << '\n';
    const RunResult run_result = run(FlowState(initial), model, opts);

    write_diagnostics_csv(*out_dir / "diagnostics.csv", run_result.trajectory.rows);
    json snapshots = json::array();
    for (std::size_t k = 0; k < run_result.trajectory.snapshots.size(); ++k) {
      const auto& [t, field] = run_result.trajectory.snapshots[k];
      write_snapshot(*out_dir / snapshot_name(k), field, t);
      snapshots.push_back({{"file", snapshot_name(k)}, {"time", t}});
    }
    write_snapshot(*out_dir / "final.vf2d", run_result.final_state.omega(), run_result.final_state.time());
    if (plot) write_plots(*out_dir / "plots", run_result.trajectory.rows, run_result.final_state.omega());

    const Functionals final_f = evaluate_functionals(run_result.final_state.omega());
    manifest["status"] = to_string(run_result.status);
    manifest["steps"] = run_result.steps;
    manifest["final_time"] = run_result.final_state.time();
    manifest["clipped_mass_total"] = run_result.clipped_mass_total;
    manifest["max_step_mass_change"] = run_result.max_step_mass_change;
    manifest["final_functionals"] = functionals_json(final_f);
    manifest["snapshots"] = snapshots;
    const double slope = inertia_slope(run_result.trajectory.rows);
    manifest["inertia_slope"] = null_if_nan(slope);

    result.summary = functionals_json(final_f);
    result.summary["final_time"] = run_result.final_state.time();
    result.summary["steps"] = run_result.steps;
    result.summary["clipped_mass_total"] = run_result.clipped_mass_total;
    result.summary["inertia_slope"] = null_if_nan(slope);
    result.summary["status"] = to_string(run_result.status);
    if (run_result.error) {
      result.exit_code = exit_code_for(*run_result.error);
      result.message = run_result.message;
      manifest["error"] = run_result.message;
    }
  } catch (const Error& e) {
    record_error(exit_code_for(e.code()), "failed", e.what());
  } catch (const fs::filesystem_error& e) {
    record_error(kExitIo, "failed", e.what());
  } catch (const std::exception& e) {
    record_error(kExitFailure, "failed", e.what());
  }

  manifest["exit_code"] = result.exit_code;
  manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!manifest.contains("clipped_mass_total")) manifest["clipped_mass_total"] = 0.0;
  if (out_dir) {
    try {
      fs::create_directories(*out_dir);
      write_json_atomic(*out_dir / "manifest.json", manifest);
    } catch (const std::exception& e) {
      if (result.exit_code == 0) result.exit_code = kExitIo;
      result.message += std::string(result.message.empty() ? "" : "; ") + e.what();
    }
  }
  result.summary["exit_code"] = result.exit_code;
  if (!result.summary.contains("status")) result.summary["status"] = manifest["status"];
  return result;
}

}  // namespace vortexflow::app
