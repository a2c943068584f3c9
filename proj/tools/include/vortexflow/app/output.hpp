#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "vortexflow/dynamics.hpp"

namespace vortexflow::app {

std::string_view version_string();

extern const std::vector<std::string> kDiagnosticsColumns;

/// Values of one row in kDiagnosticsColumns order.
std::vector<double> diagnostics_values(const DiagnosticsRow& row);

/// CSV with a header line; every value printed with %.17g so reruns are
/// byte-comparable.
void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRow>& rows);

std::string format_double(double v);

nlohmann::json functionals_json(const Functionals& f);

/// Writes to a sibling temp file and renames over `path`.
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace vortexflow::app
