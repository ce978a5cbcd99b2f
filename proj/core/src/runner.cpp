#include "vtrack/runner.hpp"

#include <filesystem>
#include <future>

#include "vtrack/outputs.hpp"
#include "vtrack/scalar.hpp"
#include "vtrack/vdfll.hpp"

namespace vtrack {

RunResult run_architecture(const ScenarioTruth& truth, const ScenarioConfig& cfg, Architecture arch) {
  switch (arch) {
    case Architecture::Scalar1Hz: return run_scalar(truth, cfg, 1);
    case Architecture::Scalar50Hz: return run_scalar(truth, cfg, 50);
    case Architecture::Vdfll: return run_vdfll(truth, cfg);
  }
  throw std::invalid_argument("unknown architecture");
}

ScenarioRun run_scenario(const ScenarioConfig& cfg, bool parallel) {
  ScenarioRun run;
  run.config = cfg;
  run.truth = build_truth(cfg);
  if (parallel && cfg.architectures.size() > 1) {
    std::vector<std::future<RunResult>> jobs;
    for (auto a : cfg.architectures)
      jobs.push_back(std::async(std::launch::async, [&run, a] { return run_architecture(run.truth, run.config, a); }));
    for (auto& j : jobs) run.results.push_back(j.get());
  } else {
    for (auto a : cfg.architectures) run.results.push_back(run_architecture(run.truth, cfg, a));
  }
  for (const auto& r : run.results) {
    const auto m = compute_metrics(r, run.truth.schedule, run.truth.origin);
    run.metrics.rows.insert(run.metrics.rows.end(), m.rows.begin(), m.rows.end());
  }
  return run;
}

void emit_outputs(const ScenarioRun& run, const std::string& out_dir, bool plots) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error(out_dir + ": cannot create output directory: " + ec.message());
  const std::filesystem::path dir(out_dir);
  write_metrics_csv((dir / "metrics.csv").string(), run.metrics);
  write_events_csv((dir / "events.csv").string(), run.results);
  for (const auto& r : run.results) {
    const std::string name =
        run.results.size() == 1 ? "timeseries.csv" : "timeseries_" + to_string(r.architecture) + ".csv";
    write_timeseries_csv((dir / name).string(), r, run.truth.origin);
  }
  if (plots) write_plots(out_dir, run.results, run.truth);
}

}  // namespace vtrack
