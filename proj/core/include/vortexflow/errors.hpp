#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vortexflow {

enum class ErrorCode {
  kInvalidArgument,
  kNotPowerOfTwo,
  kZeroMass,
  kDegenerateDenominator,
  kSupportMismatch,
  kNonFinite,
  kOutOfRange,
  kBracketFailure,
  kNoSolutionInRange,
  kMassLoss,
  kCflViolation,
  kBlowUpDetected,
  kOracleDisagreement,
  kConfig,
  kIo,
  kFormat,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a code so callers (and the
/// CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vortexflow
