#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vtrack/cn0_estimator.hpp"
#include "vtrack/constants.hpp"
#include "vtrack/correlator.hpp"
#include "vtrack/discriminators.hpp"
#include "vtrack/lock_detector.hpp"
#include "vtrack/loop_filters.hpp"

using namespace vtrack;

TEST(Dll, FirstOrderGain) {
  DllConfig cfg;
  LoopFilterState s;
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(dll_filter_update(s, 0.02, cfg), 4.0 * 1.0 * 0.02);
  cfg.bandwidth = 2.0;
  EXPECT_DOUBLE_EQ(dll_filter_update(s, -0.01, cfg), -0.08);
}

TEST(Dll, ClosedLoopConvergesOnOffset) {
  DllConfig cfg;
  double err = 0.3;  // chips
  LoopFilterState s;
  for (int i = 0; i < 100; ++i) err -= dll_filter_update(s, err, cfg) * cfg.period;
  // Time constant 1 / (4B) = 0.25 s; 2 s is eight time constants.
  EXPECT_LT(std::abs(err), 0.3 * std::exp(-7.5));
}

TEST(LoopConfig, Validation) {
  EXPECT_NO_THROW(validate(DllConfig{}));
  EXPECT_NO_THROW(validate(PllConfig{}));
  EXPECT_NO_THROW(validate(FllConfig{}));
  DllConfig d;
  d.order = 2;
  EXPECT_THROW(validate(d), std::invalid_argument);
  d = {};
  d.bandwidth = 20.0;
  EXPECT_THROW(validate(d), std::invalid_argument);
  PllConfig p;
  p.order = 2;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = {};
  p.bandwidth = 25.0;
  EXPECT_THROW(validate(p), std::invalid_argument);
  FllConfig f;
  f.sub_interval = 0.02;
  EXPECT_THROW(validate(f), std::invalid_argument);
}

TEST(Pll, ZeroInputZeroCommand) {
  LoopFilterState s;
  for (int i = 0; i < 20; ++i) EXPECT_DOUBLE_EQ(pll_filter_update(s, 0.0, PllConfig{}), 0.0);
}

TEST(Pll, ResetHoldsFrequency) {
  LoopFilterState s;
  pll_reset(s, 123.0);
  EXPECT_DOUBLE_EQ(s.last, 123.0);
  EXPECT_NEAR(pll_filter_update(s, 0.0, PllConfig{}), 123.0, 1e-12);
}

TEST(Pll, Coefficients) {
  const auto k = pll_coefficients(PllConfig{});
  EXPECT_NEAR(k.w0, 7.238618686, 1e-9);
  EXPECT_GT(k.a3, 0.0);
  EXPECT_GT(k.b3, 0.0);
}

namespace {
// Closed loop on a phase step; returns the replica phase trajectory.
std::vector<double> pll_step(double step, const PllConfig& cfg, int n) {
  LoopFilterState s;
  double nco = 0.0;
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double f = pll_filter_update(s, step - nco, cfg);
    nco += kTwoPi * f * cfg.period;
    out.push_back(nco);
  }
  return out;
}
}  // namespace

TEST(Pll, StepResponseSettlesWithModestOvershoot) {
  const PllConfig cfg;
  const double step = 0.5;
  const auto y = pll_step(step, cfg, 200);
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, v);
  EXPECT_LT((peak - step) / step, 0.25);
  // Third-order loop: the integrator tail takes about 14 / B to enter a 2% band.
  const auto settle = static_cast<std::size_t>(15.0 / cfg.bandwidth / cfg.period);
  for (std::size_t i = settle; i < y.size(); ++i) EXPECT_NEAR(y[i], step, 0.02 * step) << i;
  EXPECT_NEAR(y.back(), step, 0.005 * step);
}

TEST(Pll, TracksFrequencyRampWithoutBias) {
  const PllConfig cfg;
  LoopFilterState s;
  double truth = 0.0, nco = 0.0, f_true = 0.0;
  double err = 0.0;
  for (int i = 0; i < 500; ++i) {
    f_true += 5.0 * cfg.period;  // 5 Hz/s ramp
    truth += kTwoPi * f_true * cfg.period;
    err = truth - nco;
    nco += kTwoPi * pll_filter_update(s, err, cfg) * cfg.period;
  }
  EXPECT_LT(std::abs(err), 1e-3);
}

TEST(Pll, LinearInDiscriminatorSequence) {
  LoopFilterState a, b;
  const PllConfig cfg;
  for (int i = 0; i < 30; ++i) {
    const double d = std::sin(0.3 * i);
    EXPECT_NEAR(pll_filter_update(b, 2.5 * d, cfg), 2.5 * pll_filter_update(a, d, cfg), 1e-9);
  }
}

namespace {
PromptPair perfect_pair(double cn0, std::mt19937_64& rng, bool noise = true) {
  const auto e = generate_epoch({0, 0, 0, 0.3, cn0}, CorrelationModel::bpsk1(), 0.02, rng, noise);
  return {e.first.ip, e.first.qp, e.second.ip, e.second.qp};
}

double mean_estimate(double cn0, int trials, std::mt19937_64& rng) {
  double s = 0;
  for (int t = 0; t < trials; ++t) {
    Cn0Estimator est;
    for (int i = 0; i < 50; ++i) est.push(perfect_pair(cn0, rng));
    s += est.estimate().value();
  }
  return s / trials;
}
}  // namespace

TEST(Cn0, UnbiasedAtNominalAndOutageLevels) {
  std::mt19937_64 rng(17);
  EXPECT_NEAR(mean_estimate(45.0, 100, rng), 45.0, 1.0);
  EXPECT_NEAR(mean_estimate(35.0, 100, rng), 35.0, 1.0);
  EXPECT_NEAR(mean_estimate(20.0, 100, rng), 20.0, 2.0);
}

TEST(Cn0, SaturatesWithoutNoise) {
  std::mt19937_64 rng(1);
  Cn0Estimator est;
  for (int i = 0; i < 50; ++i) est.push(perfect_pair(45.0, rng, false));
  EXPECT_DOUBLE_EQ(est.estimate().value(), 55.0);
}

TEST(Cn0, NeedsHistory) {
  std::mt19937_64 rng(1);
  Cn0Estimator est;
  for (int i = 0; i < 19; ++i) est.push(perfect_pair(45.0, rng));
  EXPECT_FALSE(est.estimate());
  est.push(perfect_pair(45.0, rng));
  EXPECT_TRUE(est.estimate());
  for (int i = 0; i < 100; ++i) est.push(perfect_pair(45.0, rng));
  EXPECT_EQ(est.size(), 50u);
  est.reset();
  EXPECT_EQ(est.size(), 0u);
  EXPECT_FALSE(estimate_cn0({}));
}

TEST(Cn0, FreeFunctionUsesTrailingWindow) {
  std::mt19937_64 rng(2);
  std::vector<PromptPair> h;
  for (int i = 0; i < 200; ++i) h.push_back(perfect_pair(20.0, rng));
  for (int i = 0; i < 50; ++i) h.push_back(perfect_pair(45.0, rng, false));
  EXPECT_DOUBLE_EQ(estimate_cn0(h).value(), 55.0);
}

TEST(LockDetector, SteadyStrongSignalStaysLocked) {
  LockDetector d;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 0.05);
  for (int i = 0; i < 10000; ++i) ASSERT_EQ(d.update(45.0, n(rng)), LockState::Locked);
}

TEST(LockDetector, JustAboveThresholdStaysLocked) {
  LockDetector d;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 0.2);
  for (int i = 0; i < 5000; ++i) ASSERT_EQ(d.update(26.0, n(rng)), LockState::Locked);
}

TEST(LockDetector, LowEstimateHoldTime) {
  LockDetector d;
  for (int i = 0; i < 24; ++i) EXPECT_EQ(d.update(22.0, 0.0), LockState::Locked);
  EXPECT_EQ(d.update(22.0, 0.0), LockState::Lost);
}

TEST(LockDetector, InterruptedLowRunDoesNotTrip) {
  LockDetector d;
  for (int k = 0; k < 10; ++k) {
    for (int i = 0; i < 20; ++i) EXPECT_EQ(d.update(22.0, 0.0), LockState::Locked);
    EXPECT_EQ(d.update(30.0, 0.0), LockState::Locked);
  }
}

TEST(LockDetector, NoisyCostasTrips) {
  LockDetector d;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-kPi / 2, kPi / 2);
  LockState s = LockState::Locked;
  int i = 0;
  for (; i < 100 && s == LockState::Locked; ++i) s = d.update(45.0, u(rng));
  EXPECT_EQ(s, LockState::Lost);
  EXPECT_GE(i, 25);
  ASSERT_TRUE(d.costas_std());
  EXPECT_GT(*d.costas_std(), 0.6);
}

TEST(LockDetector, RelockNeedsHysteresisAndQuietCostas) {
  LockDetector d;
  for (int i = 0; i < 25; ++i) d.update(20.0, 0.0);
  ASSERT_EQ(d.state(), LockState::Lost);
  EXPECT_EQ(d.update(26.0, 0.0), LockState::Lost);
  EXPECT_EQ(d.update(27.0, 0.0), LockState::Locked);
  d.reset();
  EXPECT_EQ(d.state(), LockState::Locked);
  EXPECT_FALSE(d.costas_std());
}

TEST(LockDetector, MissingInputsKeepLock) {
  LockDetector d;
  for (int i = 0; i < 200; ++i) EXPECT_EQ(d.update(std::nullopt, std::nullopt), LockState::Locked);
}

TEST(LockDetector, DropToOutageLevelDetectedWithinOneSecond) {
  std::mt19937_64 rng(12);
  int worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Cn0Estimator est;
    LockDetector det;
    int lost_at = -1;
    for (int k = 0; k < 200 && lost_at < 0; ++k) {
      const double cn0 = k < 100 ? 45.0 : 20.0;
      const auto e = generate_epoch({0, 0, 0, 0.0, cn0}, CorrelationModel::bpsk1(), 0.02, rng);
      est.push({e.first.ip, e.first.qp, e.second.ip, e.second.qp});
      if (det.update(est.estimate(), costas_discriminator(e.full.ip, e.full.qp)) == LockState::Lost) lost_at = k;
    }
    ASSERT_GE(lost_at, 100);
    worst = std::max(worst, lost_at - 100);
  }
  EXPECT_LE(worst, 50);
}
