#include <iostream>

#include "CLI11.hpp"

#include "vortexflow/app/commands.hpp"
#include "vortexflow/app/exit_codes.hpp"
#include "vortexflow/app/output.hpp"

using namespace vortexflow::app;

int main(int argc, char** argv) {
  CLI::App app{"vortexflow: constrained 2-D vorticity dynamics and mean-field states"};
  app.set_version_flag("--version", std::string(version_string()));
  app.require_subcommand(1);

  MeanfieldArgs mf;
  auto* meanfield = app.add_subcommand("meanfield", "Radial mean-field state from (a, b) or (E, I)");
  meanfield->add_option("--a", mf.a, "inverse-temperature pair: a < 0");
  meanfield->add_option("--b", mf.b, "0 <= b < 8 pi");
  meanfield->add_option("--E", mf.E, "energy target");
  meanfield->add_option("--I", mf.I, "inertia target");
  meanfield->add_option("--out", mf.out, "output directory")->capture_default_str();

  std::string sim_config;
  bool plot = false;
  auto* simulate = app.add_subcommand("simulate", "Run a JSON scenario");
  simulate->add_option("config", sim_config, "scenario file")->required();
  simulate->add_flag("--plot", plot, "also write SVG charts");

  DiagnoseArgs dg;
  auto* diagnose = app.add_subcommand("diagnose", "Functionals of a VF2D file or a named reference field");
  diagnose->add_option("file", dg.file, "VF2D snapshot");
  diagnose->add_option("--reference", dg.reference,
                       "gaussian(sigma2) | oseen(t, nu) | patch(R, eps) | rescaled_oseen() | meanfield(a, b)");
  diagnose->add_option("--n", dg.n, "grid size for --reference")->capture_default_str();
  diagnose->add_option("--half-width", dg.half_width, "box half-width for --reference")->capture_default_str();
  diagnose->add_option("--out", dg.out, "also write the JSON record here");

  std::string sweep_config;
  std::optional<int> threads;
  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep over one command");
  sweep->add_option("config", sweep_config, "sweep file")->required();
  sweep->add_option("--threads", threads, "cap on concurrent cells (VORTEXFLOW_THREADS also caps)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  CommandResult result;
  if (*meanfield) result = cmd_meanfield(mf, std::cout);
  else if (*simulate) result = cmd_simulate(std::filesystem::path(sim_config), plot, std::cerr);
  else if (*diagnose) result = cmd_diagnose(dg, std::cout);
  else result = cmd_sweep(std::filesystem::path(sweep_config), threads, std::cerr);

  if (!result.message.empty()) std::cerr << "vortexflow: " << result.message << '\n';
  return result.exit_code;
}
