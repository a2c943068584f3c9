#include "vortexflow/app/exit_codes.hpp"

namespace vortexflow::app {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kNotPowerOfTwo:
      return kExitConfig;
    case ErrorCode::kDegenerateDenominator: return kExitDegenerate;
    case ErrorCode::kBlowUpDetected: return kExitBlowUp;
    case ErrorCode::kOracleDisagreement: return kExitOracle;
    case ErrorCode::kIo:
    case ErrorCode::kFormat:
      return kExitIo;
    case ErrorCode::kOutOfRange: return kExitOutOfRange;
    case ErrorCode::kBracketFailure:
    case ErrorCode::kNoSolutionInRange:
      return kExitNoSolution;
    case ErrorCode::kMassLoss: return kExitMassLoss;
    default: return kExitFailure;
  }
}

}  // namespace vortexflow::app
