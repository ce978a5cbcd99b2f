#pragma once

#include "vtrack/records.hpp"

namespace vtrack {

// Independent DLL/PLL channels with lock detection and hot reacquisition,
// feeding a positioning filter at kf_rate_hz (1 or 50) that only sees locked
// channels.
RunResult run_scalar(const ScenarioTruth& truth, const ScenarioConfig& cfg, int kf_rate_hz);

}  // namespace vtrack
