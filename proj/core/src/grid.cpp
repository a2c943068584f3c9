#include "vortexflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vortexflow/errors.hpp"

namespace vortexflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::kZeroMass: return "ZeroMass";
    case ErrorCode::kDegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::kSupportMismatch: return "SupportMismatch";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kBracketFailure: return "BracketFailure";
    case ErrorCode::kNoSolutionInRange: return "NoSolutionInRange";
    case ErrorCode::kMassLoss: return "MassLoss";
    case ErrorCode::kCflViolation: return "CflViolation";
    case ErrorCode::kBlowUpDetected: return "BlowUpDetected";
    case ErrorCode::kOracleDisagreement: return "OracleDisagreement";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kFormat: return "FormatError";
  }
  return "Unknown";
}

Grid make_grid(int n, double half_width) {
  if (n < 16 || (n & (n - 1)) != 0) {
    throw Error(ErrorCode::kNotPowerOfTwo,
                "grid size must be a power of two >= 16, got " + std::to_string(n));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw Error(ErrorCode::kInvalidArgument, "half_width must be positive");
  }
  return Grid{n, half_width, 2.0 * half_width / n};
}

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.node_count(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.node_count()) {
    throw Error(ErrorCode::kInvalidArgument, "field size does not match grid");
  }
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace vortexflow
