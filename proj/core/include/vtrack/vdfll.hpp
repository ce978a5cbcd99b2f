#pragma once

#include "vtrack/records.hpp"

namespace vtrack {

// Carrier NCO command, Hz: positive for an approaching satellite.
double carrier_nco_command(double predicted_range_rate, double f_carr = 1.57542e9);

// Code NCO chipping-rate offset, Hz, moving the replica from one predicted
// pseudorange to the next over one filter period.
double code_nco_command(double next_range, double range, double T, double f_code = 1.023e6);

struct VdfllOptions {
  bool use_truth_init = false;  // start the filter on the exact truth state
};

// Vector tracking: every channel's code and carrier NCO is driven from the
// filter prediction; no lock test and no reacquisition.
RunResult run_vdfll(const ScenarioTruth& truth, const ScenarioConfig& cfg, const VdfllOptions& opt = {});

}  // namespace vtrack
