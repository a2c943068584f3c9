#pragma once

#include "vortexflow/errors.hpp"

namespace vortexflow::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDegenerate = 3;
inline constexpr int kExitBlowUp = 4;
inline constexpr int kExitOracle = 5;
inline constexpr int kExitIo = 6;
inline constexpr int kExitOutOfRange = 7;
inline constexpr int kExitNoSolution = 8;
inline constexpr int kExitMassLoss = 9;

int exit_code_for(ErrorCode code);

}  // namespace vortexflow::app
