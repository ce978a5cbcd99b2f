// vtrack command line: run, compare and validate scenarios.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vtrack/runner.hpp"
#include "vtrack/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

vtrack::ScenarioConfig config_or_default(const std::string& path) {
  return path.empty() ? vtrack::build_static_scenario() : vtrack::load_config(path);
}

void print_summary(const vtrack::ScenarioRun& run, double seconds) {
  std::cout << "epochs: " << run.truth.epochs + 1 << ", channels: " << run.truth.channels.size() << ", wall time "
            << seconds << " s\n";
  for (const auto& r : run.results) {
    const auto arch = vtrack::to_string(r.architecture);
    std::cout << arch << ":";
    for (const char* seg : {"no_outage", "outage"}) {
      std::cout << "  [" << seg << "]";
      for (const char* f : {"pos_err_x", "pos_err_y", "pos_err_z", "code_err"}) {
        const auto s = run.metrics.find(arch, seg, f);
        if (s && s->count) std::cout << ' ' << f << " std " << s->std;
      }
    }
    std::cout << "  lock losses " << r.count_events(vtrack::ChannelEventKind::LockLost) << ", reacquisitions "
              << r.count_events(vtrack::ChannelEventKind::Reacquired) << '\n';
  }
}

int execute(const vtrack::ScenarioConfig& cfg, const std::string& out, bool plots) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto run = vtrack::run_scenario(cfg);
  vtrack::emit_outputs(run, out, plots);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  print_summary(run, secs);
  std::cout << "outputs written to " << out << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlator-level comparison of scalar and vector GNSS tracking"};
  app.require_subcommand(1);

  std::string run_config, run_arch, run_out = "out";
  std::uint64_t run_seed = 0;
  bool run_plots = false;
  auto* run = app.add_subcommand("run", "Run one or all architectures on a scenario");
  run->add_option("--config", run_config, "Scenario config file (default: built-in static scenario)");
  auto* arch_opt = run->add_option("--arch", run_arch, "scalar1hz, scalar50hz, vdfll or all (overrides the config)")
      ->check(CLI::IsMember({"scalar1hz", "scalar50hz", "vdfll", "all"}));
  auto* seed_opt = run->add_option("--seed", run_seed, "Random seed (overrides the config)");
  run->add_option("--out", run_out, "Output directory");
  run->add_flag("--plots", run_plots, "Write SVG plots");

  std::string cmp_config, cmp_out = "out";
  bool cmp_plots = false;
  auto* cmp = app.add_subcommand("compare", "Run all three architectures with common random numbers");
  cmp->add_option("--config", cmp_config, "Scenario config file (default: built-in static scenario)");
  cmp->add_option("--out", cmp_out, "Output directory");
  cmp->add_flag("--plots", cmp_plots, "Write SVG plots");

  std::string val_config;
  auto* val = app.add_subcommand("validate", "Check a scenario config file");
  val->add_option("--config", val_config, "Scenario config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  vtrack::ScenarioConfig cfg;
  try {
    if (*run) {
      cfg = config_or_default(run_config);
      if (*arch_opt)
        cfg.architectures = run_arch == "all" ? vtrack::all_architectures()
                                              : std::vector{vtrack::architecture_from_string(run_arch)};
      if (*seed_opt) cfg.seed = run_seed;
    } else if (*cmp) {
      cfg = config_or_default(cmp_config);
      cfg.architectures = vtrack::all_architectures();
    } else {
      cfg = vtrack::load_config(val_config);
      (void)vtrack::build_truth(cfg);
      std::cout << "config OK: " << val_config << '\n';
      return kOk;
    }
    vtrack::validate_config(cfg);
  } catch (const vtrack::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    return *run ? execute(cfg, run_out, run_plots) : execute(cfg, cmp_out, cmp_plots);
  } catch (const vtrack::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
