#include <benchmark/benchmark.h>

#include <random>

#include "vtrack/correlator.hpp"
#include "vtrack/ekf.hpp"
#include "vtrack/runner.hpp"
#include "vtrack/vdfll.hpp"

using namespace vtrack;

static void BM_GenerateEpoch(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto m = CorrelationModel::boc11();
  const IntervalErrors err{0.01, 0.01, 0.5, 0.1, 45.0};
  for (auto _ : state) benchmark::DoNotOptimize(generate_epoch(err, m, 0.02, rng, true));
}
BENCHMARK(BM_GenerateEpoch);

// One predict + update with every channel of the static scenario.
static void BM_EkfCycle(benchmark::State& state) {
  auto cfg = build_static_scenario();
  cfg.duration = 1.0;
  const auto truth = build_truth(cfg);
  const auto sats = truth.satellites(0);
  std::vector<ChannelNoiseInput> noise;
  for (const auto& ch : truth.channels) noise.push_back({ch.model, 45.0});
  const Eigen::MatrixXd R = build_measurement_noise(noise, NoiseMode::OpenLoop);
  const Matrix9 phi = build_transition(0.02);
  const Matrix9 q = build_process_noise(0.02, cfg.process);
  StateVector x0;
  StateCovariance P0;
  initial_filter_state(truth, cfg, x0, P0);
  const Eigen::VectorXd dz = Eigen::VectorXd::Constant(2 * Eigen::Index(sats.size()), 0.1);
  for (auto _ : state) {
    StateVector x = x0;
    StateCovariance P = P0;
    predict(x, P, phi, q);
    const Eigen::MatrixXd H = build_observation(x, sats);
    benchmark::DoNotOptimize(update(x, P, H, R, dz));
  }
}
BENCHMARK(BM_EkfCycle);

// Ten simulated seconds of vector tracking; items are filter epochs.
static void BM_VdfllTenSeconds(benchmark::State& state) {
  auto cfg = build_static_scenario();
  cfg.duration = 10.0;
  const auto truth = build_truth(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(run_vdfll(truth, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(truth.epochs));
}
BENCHMARK(BM_VdfllTenSeconds)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
