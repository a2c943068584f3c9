#include "vortexflow/app/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "vortexflow/errors.hpp"

namespace vortexflow::app {

using nlohmann::json;

std::string_view version_string() { return VORTEXFLOW_VERSION; }

const std::vector<std::string> kDiagnosticsColumns = {
    "time", "mass", "Mx", "My", "I", "E", "S", "enstrophy", "gradpsi_moment", "V",
    "D", "a", "b", "dissipation_rate", "l1_dist_to_reference", "rel_entropy_to_reference",
    "loghls_gap", "energy_lower_gap", "clipped_mass"};

std::vector<double> diagnostics_values(const DiagnosticsRow& r) {
  const Functionals& f = r.functionals;
  return {r.time, f.mass, f.center.x, f.center.y, f.inertia, f.energy, f.entropy, f.enstrophy,
          f.gradpsi_moment, f.virial, f.denominator, f.a, f.b, r.dissipation_rate,
          r.l1_to_reference, r.rel_entropy_to_reference, r.gaps.loghls, r.gaps.energy_lower,
          r.clipped_mass};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRow>& rows) {
  std::string text;
  for (std::size_t k = 0; k < kDiagnosticsColumns.size(); ++k) {
    text += (k ? "," : "") + kDiagnosticsColumns[k];
  }
  text += '\n';
  for (const DiagnosticsRow& row : rows) {
    const auto values = diagnostics_values(row);
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (k) text += ',';
      text += format_double(values[k]);
    }
    text += '\n';
  }
  write_text_atomic(path, text);
}

namespace {
// JSON has no NaN; null stands in.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace

json functionals_json(const Functionals& f) {
  return json{{"mass", number_or_null(f.mass)},
              {"Mx", number_or_null(f.center.x)},
              {"My", number_or_null(f.center.y)},
              {"I", number_or_null(f.inertia)},
              {"E", number_or_null(f.energy)},
              {"S", number_or_null(f.entropy)},
              {"enstrophy", number_or_null(f.enstrophy)},
              {"gradpsi_moment", number_or_null(f.gradpsi_moment)},
              {"V", number_or_null(f.virial)},
              {"D", number_or_null(f.denominator)},
              {"a", number_or_null(f.a)},
              {"b", number_or_null(f.b)},
              {"max_omega", number_or_null(f.max_abs)}};
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename onto " + path.string() + ": " + ec.message());
}

void write_json_atomic(const std::filesystem::path& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace vortexflow::app
