#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "vortexflow/app/commands.hpp"
#include "vortexflow/app/exit_codes.hpp"
#include "vortexflow/app/output.hpp"

namespace vortexflow::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Cell {
  std::vector<json> values;
  json config;
  fs::path dir;
  CommandResult result;
};

void set_path(json& target, const std::string& dotted, const json& value) {
  json* node = &target;
  std::stringstream ss(dotted);
  std::vector<std::string> parts;
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw Error(ErrorCode::kConfig, "bad parameter path '" + dotted + "'");
    parts.push_back(part);
  }
  if (parts.empty()) throw Error(ErrorCode::kConfig, "empty parameter path");
  for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
    if (!node->is_object() || !node->contains(parts[k])) {
      throw Error(ErrorCode::kConfig, "parameter path '" + dotted + "' does not exist in base");
    }
    node = &(*node)[parts[k]];
  }
  if (!node->is_object()) throw Error(ErrorCode::kConfig, "parameter path '" + dotted + "' does not end in an object");
  (*node)[parts.back()] = value;
}

std::string cell_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "cell_%04zu", k);
  return buf;
}

std::string csv_value(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_null()) return "nan";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return "\"" + v.dump() + "\"";
}

CommandResult run_cell(const std::string& command, Cell& cell) {
  std::ofstream log(cell.dir / "output.txt");
  if (command == "simulate") {
    cell.config["output_dir"] = cell.dir.string();
    return cmd_simulate(cell.config, false, log);
  }
  if (command == "meanfield") return cmd_meanfield(cell.config, cell.dir, log);
  return cmd_diagnose(cell.config, cell.dir, log);
}

}  // namespace

int sweep_thread_count(std::optional<int> requested, std::size_t cells) {
  long n = requested && *requested >= 1 ? *requested : static_cast<long>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("VORTEXFLOW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = std::min(n, v);
  }
  return static_cast<int>(std::min<long>(n, static_cast<long>(std::max<std::size_t>(cells, 1))));
}

CommandResult cmd_sweep(const fs::path& config_path, std::optional<int> threads, std::ostream& log) {
  try {
    return cmd_sweep(load_json(config_path), threads, log);
  } catch (const Error& e) {
    return {exit_code_for(e.code()), json{{"exit_code", exit_code_for(e.code())}}, e.what()};
  }
}

CommandResult cmd_sweep(const json& config, std::optional<int> threads, std::ostream& log) {
  CommandResult result;
  try {
    if (!config.is_object()) throw Error(ErrorCode::kConfig, "sweep config must be an object");
    for (const auto& [key, _] : config.items()) {
      if (key != "command" && key != "base" && key != "parameters" && key != "output_dir") {
        throw Error(ErrorCode::kConfig, "sweep: unknown key '" + key + "'");
      }
    }
    if (!config.contains("command") || !config["command"].is_string()) throw Error(ErrorCode::kConfig, "sweep.command missing");
    const std::string command = config["command"];
    if (command != "simulate" && command != "meanfield" && command != "diagnose") {
      throw Error(ErrorCode::kConfig, "sweep.command must be simulate, meanfield or diagnose");
    }
    if (!config.contains("base") || !config["base"].is_object()) throw Error(ErrorCode::kConfig, "sweep.base must be an object");
    if (!config.contains("parameters") || !config["parameters"].is_object() || config["parameters"].empty()) {
      throw Error(ErrorCode::kConfig, "sweep.parameters must be a nonempty object of value lists");
    }
    const fs::path out_dir = config.contains("output_dir") ? fs::path(config["output_dir"].get<std::string>()) : fs::path("sweep");

    std::vector<std::string> names;
    std::vector<std::vector<json>> axes;
    for (const auto& [path, values] : config["parameters"].items()) {
      if (!values.is_array() || values.empty()) throw Error(ErrorCode::kConfig, "sweep.parameters." + path + " must be a nonempty array");
      names.push_back(path);
      axes.emplace_back(values.begin(), values.end());
    }

    // Cartesian product, last parameter fastest.
    std::vector<Cell> cells;
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
      Cell cell;
      cell.config = config["base"];
      for (std::size_t p = 0; p < axes.size(); ++p) {
        cell.values.push_back(axes[p][idx[p]]);
        set_path(cell.config, names[p], axes[p][idx[p]]);
      }
      cell.dir = out_dir / cell_name(cells.size());
      cells.push_back(std::move(cell));
      std::size_t p = axes.size();
      while (p > 0 && ++idx[p - 1] == axes[p - 1].size()) idx[--p] = 0;
      if (p == 0) break;
    }
    for (Cell& c : cells) fs::create_directories(c.dir);

    const int n_threads = sweep_thread_count(threads, cells.size());
    log << "sweep: " << cells.size() << " cells of " << command << " on " << n_threads << " thread(s)\n";
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k = next++; k < cells.size(); k = next++) {
        try {
          cells[k].result = run_cell(command, cells[k]);
        } catch (const std::exception& e) {
          cells[k].result = {kExitFailure, json{{"exit_code", kExitFailure}}, e.what()};
        }
      }
    };
    std::vector<std::jthread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();

    // Columns: cell, parameters (prefixed, since results may reuse the names), then the union of result keys in first-seen order.
    std::vector<std::string> keys;
    for (const Cell& c : cells) {
      for (const auto& [key, _] : c.result.summary.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
      }
    }
    std::string csv = "cell";
    for (const auto& n : names) csv += ",param:" + n;
    for (const auto& k : keys) csv += "," + k;
    csv += ",message\n";
    int failures = 0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const Cell& c = cells[k];
      csv += cell_name(k);
      for (const auto& v : c.values) csv += "," + csv_value(v);
      for (const auto& key : keys) csv += "," + (c.result.summary.contains(key) ? csv_value(c.result.summary[key]) : "");
      csv += "," + csv_value(c.result.message) + "\n";
      if (c.result.exit_code != 0) {
        ++failures;
        log << cell_name(k) << ": exit " << c.result.exit_code << ": " << c.result.message << '\n';
      }
    }
    write_text_atomic(out_dir / "summary.csv", csv);
    result.summary = {{"cells", cells.size()}, {"failures", failures}, {"exit_code", 0}};
    // Per-cell failures are recorded, not fatal.
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.code());
    result.message = e.what();
  } catch (const fs::filesystem_error& e) {
    result.exit_code = kExitIo;
    result.message = e.what();
  }
  return result;
}

}  // namespace vortexflow::app
