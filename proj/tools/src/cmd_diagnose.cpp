#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>

#include "vortexflow/app/commands.hpp"
#include "vortexflow/app/exit_codes.hpp"
#include "vortexflow/app/output.hpp"
#include "vortexflow/functionals.hpp"
#include "vortexflow/meanfield.hpp"
#include "vortexflow/snapshot.hpp"

namespace vortexflow::app {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed forms for the unit-mass references, on the whole plane.
json gaussian_closed_form(double s2) {
  const double I = s2;
  const double G = std::log(4.0 / 3.0) / (8.0 * kPi * kPi * s2);
  const double V = -1.0 / (4.0 * kPi);
  return json{{"mass", 1.0},
              {"I", I},
              {"E", -(std::log(4.0 * s2) - std::numbers::egamma) / (8.0 * kPi)},
              {"S", -1.0 - std::log(2.0 * kPi * s2)},
              {"enstrophy", 1.0 / (4.0 * kPi * s2)},
              {"gradpsi_moment", G},
              {"V", V},
              {"D", 2.0 * I * G - V * V}};
}

json closed_form(const FieldConfig& f, double model_nu) {
  if (f.perturbation) return nullptr;
  switch (f.kind) {
    case FieldConfig::Kind::kGaussian: return gaussian_closed_form(f.sigma2);
    case FieldConfig::Kind::kOseen: return gaussian_closed_form(2.0 * f.nu.value_or(model_nu) * (f.t + 1.0));
    case FieldConfig::Kind::kRescaledOseen: return gaussian_closed_form(2.0);
    case FieldConfig::Kind::kPatch:
      // Sharp-edge limit; the eps-smoothed field approaches it as eps -> 0.
      return json{{"mass", 1.0},
                  {"I", f.R * f.R / 4.0},
                  {"E", 1.0 / (16.0 * kPi) - std::log(f.R) / (4.0 * kPi)},
                  {"S", -std::log(kPi * f.R * f.R)},
                  {"enstrophy", 1.0 / (kPi * f.R * f.R)},
                  {"gradpsi_moment", 1.0 / (8.0 * kPi * kPi * f.R * f.R)},
                  {"V", -1.0 / (4.0 * kPi)},
                  {"D", 0.0}};
    case FieldConfig::Kind::kMeanfield: {
      const MeanFieldSolution s = canonical_solution(f.a, f.b);
      return json{{"mass", 1.0}, {"I", s.inertia}, {"E", s.energy}, {"S", s.entropy},
                  {"V", -1.0 / (4.0 * kPi)}, {"a", s.a}, {"b", s.b}};
    }
    case FieldConfig::Kind::kFile: return nullptr;
  }
  return nullptr;
}

json diagnose_field(const ScalarField& omega, double time, const json& closed, const json& source) {
  const Functionals f = evaluate_functionals(omega);
  const InequalityGaps gaps = inequality_gaps(omega);
  json record = functionals_json(f);
  json out{{"source", source},
           {"grid", {{"n", omega.grid().n}, {"half_width", omega.grid().half_width}}},
           {"time", time},
           {"functionals", record},
           {"gaps", {{"loghls", gaps.loghls}, {"energy_lower", gaps.energy_lower}}}};
  if (!std::isfinite(f.a)) out["notes"].push_back("D below the degeneracy guard: a, b undefined");
  if (std::abs(f.mass - 1.0) > 1e-9) {
    out["notes"].push_back("field is not unit mass; V scales with mass^2");
    out["expected_V_for_mass"] = -f.mass * f.mass / (4.0 * kPi);
    out["V_relative_error_for_mass"] = (f.virial - (-f.mass * f.mass / (4.0 * kPi))) / (f.mass * f.mass / (4.0 * kPi));
  }
  if (!closed.is_null()) {
    out["closed_form"] = closed;
    json rel = json::object();
    for (const auto& [key, value] : closed.items()) {
      if (!record.contains(key) || record[key].is_null()) continue;
      const double exact = value.get<double>();
      const double got = record[key].get<double>();
      rel[key] = exact != 0.0 ? (got - exact) / std::abs(exact) : got;
    }
    out["relative_error"] = rel;
  }
  return out;
}

CommandResult finish(const json& report, const std::optional<std::filesystem::path>& path, std::ostream& out) {
  CommandResult result;
  if (path) {
    if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
    write_json_atomic(*path, report);
  }
  out << report.dump(2) << '\n';
  for (const auto& [key, value] : report["functionals"].items()) result.summary[key] = value;
  result.summary["loghls_gap"] = report["gaps"]["loghls"];
  result.summary["energy_lower_gap"] = report["gaps"]["energy_lower"];
  result.summary["exit_code"] = 0;
  return result;
}

template <typename F>
CommandResult guarded(F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    CommandResult r;
    r.exit_code = exit_code_for(e.code());
    r.message = e.what();
    r.summary["exit_code"] = r.exit_code;
    return r;
  } catch (const std::filesystem::filesystem_error& e) {
    CommandResult r{kExitIo, json{{"exit_code", kExitIo}}, e.what()};
    return r;
  }
}

}  // namespace

FieldConfig parse_reference_spec(const std::string& spec) {
  static const std::regex pattern(R"(\s*([a-z_]+)\s*(?:\(([^()]*)\))?\s*)");
  std::smatch m;
  if (!std::regex_match(spec, m, pattern)) throw Error(ErrorCode::kConfig, "cannot parse reference '" + spec + "'");
  const std::string name = m[1];
  std::vector<double> p;
  std::stringstream ss(m[2].str());
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      p.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kConfig, "bad number '" + item + "' in reference '" + spec + "'");
    }
  }
  auto want = [&](std::size_t lo, std::size_t hi, const char* usage) {
    if (p.size() < lo || p.size() > hi) throw Error(ErrorCode::kConfig, std::string("usage: ") + usage);
  };
  json j{{"kind", name}};
  if (name == "gaussian") {
    want(0, 1, "gaussian(sigma2)");
    if (!p.empty()) j["sigma2"] = p[0];
  } else if (name == "oseen") {
    want(1, 2, "oseen(t, nu)");
    j["t"] = p[0];
    if (p.size() > 1) j["nu"] = p[1];
  } else if (name == "patch") {
    want(0, 2, "patch(R, eps)");
    if (!p.empty()) j["R"] = p[0];
    if (p.size() > 1) j["eps"] = p[1];
  } else if (name == "rescaled_oseen") {
    want(0, 0, "rescaled_oseen()");
  } else if (name == "meanfield") {
    want(2, 2, "meanfield(a, b)");
    j["a"] = p[0];
    j["b"] = p[1];
  } else {
    throw Error(ErrorCode::kConfig, "unknown reference '" + name + "' (gaussian, oseen, patch, rescaled_oseen, meanfield)");
  }
  return parse_field(j, "reference");
}

CommandResult cmd_diagnose(const DiagnoseArgs& args, std::ostream& out) {
  return guarded([&] {
    if (args.file.has_value() == args.reference.has_value()) {
      throw Error(ErrorCode::kConfig, "diagnose needs exactly one of a field file or --reference");
    }
    if (args.file) {
      const Snapshot s = read_snapshot(*args.file);
      return finish(diagnose_field(s.field, s.time, nullptr, args.file->string()), args.out, out);
    }
    const FieldConfig f = parse_reference_spec(*args.reference);
    if (f.kind == FieldConfig::Kind::kOseen && !f.nu) throw Error(ErrorCode::kConfig, "oseen(t, nu) needs nu here");
    const Grid grid = make_grid(args.n, args.half_width);
    const ScalarField w = build_field(f, grid, 0.0, 0);
    return finish(diagnose_field(w, 0.0, closed_form(f, 0.0), *args.reference), args.out, out);
  });
}

CommandResult cmd_diagnose(const json& config, const std::filesystem::path& out_dir, std::ostream& out) {
  return guarded([&] {
    if (!config.is_object()) throw Error(ErrorCode::kConfig, "diagnose config must be an object");
    for (const auto& [key, _] : config.items()) {
      if (key != "grid" && key != "field" && key != "seed") throw Error(ErrorCode::kConfig, "diagnose: unknown key '" + key + "'");
    }
    if (!config.contains("grid") || !config.contains("field")) throw Error(ErrorCode::kConfig, "diagnose needs grid and field");
    const json& g = config["grid"];
    if (!g.is_object() || !g.contains("n") || !g["n"].is_number_integer() || !g.contains("half_width") ||
        !g["half_width"].is_number() || g.size() != 2) {
      throw Error(ErrorCode::kConfig, "diagnose.grid needs exactly n (integer) and half_width");
    }
    const Grid grid = make_grid(g["n"].get<int>(), g["half_width"].get<double>());
    const FieldConfig f = parse_field(config["field"], "field");
    if (f.kind == FieldConfig::Kind::kOseen && !f.nu) throw Error(ErrorCode::kConfig, "field.nu is required for oseen");
    const std::uint64_t seed = config.contains("seed") ? config["seed"].get<std::uint64_t>() : 0;
    const ScalarField w = build_field(f, grid, 0.0, seed);
    std::filesystem::create_directories(out_dir);
    return finish(diagnose_field(w, 0.0, closed_form(f, 0.0), config["field"]), out_dir / "diagnose.json", out);
  });
}

}  // namespace vortexflow::app
