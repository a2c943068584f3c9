#include <cmath>
#include <filesystem>
#include <sstream>

#include "vortexflow/app/commands.hpp"
#include "vortexflow/app/exit_codes.hpp"
#include "vortexflow/app/output.hpp"
#include "vortexflow/meanfield.hpp"

namespace vortexflow::app {

using nlohmann::json;

namespace {

json header_json(const MeanFieldSolution& s) {
  return json{{"a", s.a},       {"b", s.b},       {"chi", s.chi},    {"Z", s.Z},
              {"I", s.inertia}, {"E", s.energy},  {"S", s.entropy},
              {"pohozaev_residual", s.pohozaev_residual()}};
}

MeanFieldSolution solve(const MeanfieldArgs& args) {
  const bool ab = args.a || args.b;
  const bool ei = args.E || args.I;
  if (ab && ei) throw Error(ErrorCode::kConfig, "give either (a, b) or (E, I), not both");
  if (ei) {
    if (!args.E || !args.I) throw Error(ErrorCode::kConfig, "(E, I) targets need both E and I");
    return microcanonical_solve(*args.E, *args.I).solution;
  }
  return canonical_solution(args.a.value_or(-1.0), args.b.value_or(0.0));
}

}  // namespace

CommandResult cmd_meanfield(const MeanfieldArgs& args, std::ostream& out) {
  CommandResult result;
  try {
    const MeanFieldSolution s = solve(args);
    const json header = header_json(s);

    std::filesystem::create_directories(args.out);
    std::ostringstream csv;
    csv << "r,omega,psi\n";
    const auto& r = s.radii();
    for (std::size_t k = 0; k < r.size(); ++k) {
      csv << format_double(r[k]) << ',' << format_double(s.omega_table()[k]) << ','
          << format_double(s.psi_table()[k]) << '\n';
    }
    write_text_atomic(args.out / "profile.csv", csv.str());
    write_json_atomic(args.out / "header.json", header);
    out << header.dump(2) << '\n';
    result.summary = header;
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.code());
    result.message = e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    result.exit_code = kExitIo;
    result.message = e.what();
  }
  result.summary["exit_code"] = result.exit_code;
  return result;
}

CommandResult cmd_meanfield(const json& config, const std::filesystem::path& out_dir, std::ostream& out) {
  MeanfieldArgs args;
  args.out = out_dir;
  if (!config.is_object()) return {kExitConfig, json{{"exit_code", kExitConfig}}, "meanfield config must be an object"};
  for (const auto& [key, value] : config.items()) {
    std::optional<double>* slot = key == "a"   ? &args.a
                                  : key == "b" ? &args.b
                                  : key == "E" ? &args.E
                                  : key == "I" ? &args.I
                                               : nullptr;
    if (!slot) return {kExitConfig, json{{"exit_code", kExitConfig}}, "meanfield: unknown key '" + key + "'"};
    if (!value.is_number()) return {kExitConfig, json{{"exit_code", kExitConfig}}, "meanfield." + key + ": expected a number"};
    *slot = value.get<double>();
  }
  return cmd_meanfield(args, out);
}

}  // namespace vortexflow::app
