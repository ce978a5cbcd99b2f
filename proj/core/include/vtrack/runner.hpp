#pragma once

#include <string>
#include <vector>

#include "vtrack/metrics.hpp"
#include "vtrack/records.hpp"
#include "vtrack/scenario.hpp"
#include "vtrack/truth.hpp"

namespace vtrack {

RunResult run_architecture(const ScenarioTruth& truth, const ScenarioConfig& cfg, Architecture arch);

struct ScenarioRun {
  ScenarioConfig config;
  ScenarioTruth truth;
  std::vector<RunResult> results;  // in config.architectures order
  MetricsReport metrics;
};

// Builds the truth once and runs every selected architecture on it with
// common random numbers. Architectures run concurrently when parallel is set;
// results do not depend on it.
ScenarioRun run_scenario(const ScenarioConfig& cfg, bool parallel = true);

// metrics.csv, events.csv, timeseries.csv (or timeseries_<arch>.csv when
// several architectures ran) and optional SVG plots. Creates out_dir.
void emit_outputs(const ScenarioRun& run, const std::string& out_dir, bool plots);

}  // namespace vtrack
