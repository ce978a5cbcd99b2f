#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "vtrack/almanac.hpp"
#include "vtrack/constants.hpp"
#include "vtrack/ekf.hpp"

using namespace vtrack;

namespace {
SatelliteEpochState static_sat(const Vec3& p, Constellation c = Constellation::Gps) {
  SatelliteEpochState s;
  s.ecef.position = p;
  s.constellation = c;
  return s;
}

double min_eig(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}
}  // namespace

TEST(Transition, IdentityAtZero) { EXPECT_TRUE(build_transition(0.0).isIdentity()); }

TEST(Transition, PropagatesVelocityAndDrift) {
  StateVector x = StateVector::Zero();
  x[kVx] = 1.0;
  x[kDrift] = 5.0;
  const StateVector y = build_transition(0.02) * x;
  EXPECT_NEAR(y[kX], 0.02, 1e-15);
  EXPECT_NEAR(y[kBiasGps], 0.1, 1e-15);
  EXPECT_NEAR(y[kBiasGal], 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(y[kDrift], 5.0);
}

TEST(Transition, Semigroup) {
  EXPECT_TRUE((build_transition(0.3) * build_transition(0.5)).isApprox(build_transition(0.8), 1e-14));
}

TEST(Transition, RejectsOutOfRangeInterval) {
  EXPECT_THROW(build_transition(-0.1), std::invalid_argument);
  EXPECT_THROW(build_transition(1.5), std::invalid_argument);
}

TEST(ClockPsd, AllanConversion) {
  const auto p = clock_psd_from_allan(1e-21, 2e-20);
  EXPECT_NEAR(p.phase_psd / 0.048991693290146285, 1.0, 1e-12);
  EXPECT_NEAR(p.bias_psd / 4.4937758936840876e-05, 1.0, 1e-12);
  EXPECT_NEAR(p.drift_psd / 0.03548143227025099, 1.0, 1e-12);
  EXPECT_NEAR(clock_psd_from_allan(1e-21, 4e-20).drift_psd / p.drift_psd, 2.0, 1e-12);
  EXPECT_THROW(clock_psd_from_allan(0.0, 2e-20), std::invalid_argument);
}

TEST(ClockPsd, AllanDeviationOfSimulatedClock) {
  // Simulate the two-state clock with the discrete clock block, then fit
  // white-FM and random-walk-FM Allan components back out.
  const double dt = 0.02;
  ProcessNoiseConfig cfg;
  const Matrix9 q = build_process_noise(dt, cfg);
  Eigen::Matrix2d qc;
  qc << q(kBiasGps, kBiasGps), q(kBiasGps, kDrift), q(kDrift, kBiasGps), q(kDrift, kDrift);
  const Eigen::Matrix2d l = qc.llt().matrixL();
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n01;
  const int n = 400000;
  std::vector<double> x(n);
  double b = 0, d = 0;
  for (int k = 0; k < n; ++k) {
    x[k] = b / kSpeedOfLight;
    const Eigen::Vector2d w = l * Eigen::Vector2d(n01(rng), n01(rng));
    b += d * dt + w[0];
    d += w[1];
  }
  Eigen::MatrixXd a(5, 2);
  Eigen::VectorXd y(5);
  int row = 0;
  for (int m : {1, 2, 4, 8, 16}) {
    const double tau = m * dt;
    double s = 0;
    int cnt = 0;
    for (int k = 0; k + 2 * m < n; k += m) {
      const double dd = x[k + 2 * m] - 2 * x[k + m] + x[k];
      s += dd * dd;
      ++cnt;
    }
    const double avar = s / (2.0 * tau * tau * cnt);
    a(row, 0) = 1.0 / (2.0 * tau) / avar;
    a(row, 1) = 2.0 * kPi * kPi / 3.0 * tau / avar;
    y[row] = 1.0;
    ++row;
  }
  const Eigen::Vector2d h = a.colPivHouseholderQr().solve(y);
  const double fitted_bias_var = kSpeedOfLight * kSpeedOfLight * h[0] / 2.0 * dt;
  EXPECT_NEAR(fitted_bias_var / (clock_psd_from_allan(cfg.h0, cfg.hm2).bias_psd * dt), 1.0, 0.2);
}

TEST(ProcessNoise, AxisBlockValues) {
  ProcessNoiseConfig cfg;
  cfg.sigma2_x = 1.0;
  const Matrix9 q = build_process_noise(0.02, cfg);
  EXPECT_NEAR(q(kX, kX), 2.6667e-6, 1e-10);
  EXPECT_NEAR(q(kX, kVx), 2.0e-4, 1e-15);
  EXPECT_NEAR(q(kVx, kX), 2.0e-4, 1e-15);
  EXPECT_NEAR(q(kVx, kVx), 0.02, 1e-15);
  EXPECT_DOUBLE_EQ(q(kX, kY), 0.0);
  EXPECT_DOUBLE_EQ(q(kVx, kBiasGps), 0.0);
}

TEST(ProcessNoise, ClockBlockStructure) {
  ProcessNoiseConfig cfg;
  const double dt = 0.5;
  const auto p = clock_psd_from_allan(cfg.h0, cfg.hm2);
  const Matrix9 q = build_process_noise(dt, cfg);
  EXPECT_NEAR(q(kBiasGps, kBiasGps), p.bias_psd * dt + p.drift_psd * dt * dt * dt / 3, 1e-18);
  EXPECT_DOUBLE_EQ(q(kBiasGal, kBiasGal), q(kBiasGps, kBiasGps));
  EXPECT_NEAR(q(kBiasGps, kDrift), p.drift_psd * dt * dt / 2, 1e-18);
  EXPECT_NEAR(q(kDrift, kDrift), p.drift_psd * dt, 1e-18);
  EXPECT_NEAR(q(kBiasGps, kBiasGal), p.drift_psd * dt * dt * dt / 3, 1e-18);
  cfg.shared_drift_cross_term = false;
  EXPECT_DOUBLE_EQ(build_process_noise(dt, cfg)(kBiasGps, kBiasGal), 0.0);
}

TEST(ProcessNoise, VanishesWithInterval) {
  const Matrix9 q = build_process_noise(1e-9, ProcessNoiseConfig{});
  EXPECT_LT(q.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_THROW(build_process_noise(0.0, ProcessNoiseConfig{}), std::invalid_argument);
}

TEST(ProcessNoise, SymmetricPsdAcrossIntervals) {
  for (double s2 : {0.01, 1.0, 10.0})
    for (double dt : {1e-3, 0.02, 0.1, 1.0, 5.0}) {
      ProcessNoiseConfig cfg;
      cfg.sigma2_x = cfg.sigma2_y = cfg.sigma2_z = s2;
      const Matrix9 q = build_process_noise(dt, cfg);
      EXPECT_TRUE(q.isApprox(q.transpose(), 1e-15));
      EXPECT_GE(min_eig(q), -1e-9 * q.trace()) << dt;
    }
}

TEST(ProcessNoise, UncoupledBiasesIndefiniteOverLongIntervals) {
  ProcessNoiseConfig cfg;
  cfg.shared_drift_cross_term = false;
  EXPECT_GE(min_eig(build_process_noise(0.02, cfg)), 0.0);
  EXPECT_LT(min_eig(build_process_noise(1.0, cfg)), 0.0);
}

TEST(ProcessNoise, RejectsNonPositiveParameters) {
  ProcessNoiseConfig cfg;
  cfg.sigma2_y = 0.0;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = {};
  cfg.hm2 = -1.0;
  EXPECT_THROW(build_process_noise(0.02, cfg), std::invalid_argument);
}

TEST(Predict, IdentityAndZeroNoiseUnchanged) {
  StateVector x = StateVector::LinSpaced(9, 1, 9);
  StateCovariance P = StateCovariance::Identity() * 4.0;
  const StateVector x0 = x;
  const StateCovariance p0 = P;
  predict(x, P, Matrix9::Identity(), Matrix9::Zero());
  EXPECT_EQ(x, x0);
  EXPECT_EQ(P, p0);
}

TEST(Predict, TraceGrowsByProcessNoise) {
  StateVector x = StateVector::Zero();
  x[kX] = 4e6;
  StateCovariance P = StateCovariance::Identity();
  const Matrix9 phi = build_transition(0.02);
  const double base = (phi * P * phi.transpose()).trace();
  predict(x, P, phi, build_process_noise(0.02, ProcessNoiseConfig{}));
  EXPECT_GE(P.trace(), base);
  EXPECT_DOUBLE_EQ(x[kX], 4e6);
  EXPECT_TRUE(P.isApprox(P.transpose(), 0.0));
}

TEST(Measurements, AxisAlignedRangeAndRate) {
  StateVector x = StateVector::Zero();
  const std::vector<SatelliteEpochState> sats{static_sat(Vec3(2e7, 0, 0)),
                                              static_sat(Vec3(0, 2e7, 0), Constellation::Galileo)};
  auto z = predict_measurements(x, sats);
  EXPECT_DOUBLE_EQ(z.z[0], 2e7);
  EXPECT_DOUBLE_EQ(z.z[2], 0.0);
  x[kBiasGps] = 10.0;
  x[kDrift] = 3.0;
  z = predict_measurements(x, sats);
  EXPECT_DOUBLE_EQ(z.z[0], 2e7 + 10.0);
  EXPECT_DOUBLE_EQ(z.z[1], 2e7);
  EXPECT_DOUBLE_EQ(z.z[2], 3.0);
  EXPECT_DOUBLE_EQ(z.z[3], 3.0);
}

TEST(Measurements, SatelliteClockTermsSubtracted) {
  auto s = static_sat(Vec3(2e7, 0, 0));
  s.clock_bias = 4.0;
  s.clock_drift = 0.5;
  const auto z = predict_measurements(StateVector::Zero(), {s});
  EXPECT_DOUBLE_EQ(z.z[0], 2e7 - 4.0);
  EXPECT_DOUBLE_EQ(z.z[1], -0.5);
}

TEST(Measurements, DegenerateGeometryFlagged) {
  StateVector x = StateVector::Zero();
  x[kX] = 2e7;
  const auto z = predict_measurements(x, {static_sat(Vec3(2e7, 0, 0)), static_sat(Vec3(0, 2e7, 0))});
  EXPECT_FALSE(z.valid[0]);
  EXPECT_TRUE(z.valid[1]);
  const auto h = build_observation(x, {static_sat(Vec3(2e7, 0, 0))});
  EXPECT_TRUE(h.isZero());
}

TEST(Observation, AxisAlignedRows) {
  const auto h = build_observation(StateVector::Zero(), {static_sat(Vec3(2e7, 0, 0))});
  ASSERT_EQ(h.rows(), 2);
  ASSERT_EQ(h.cols(), 9);
  Eigen::RowVectorXd expect(9);
  expect << -1, 0, 0, 0, 0, 0, 1, 0, 0;
  EXPECT_TRUE(h.row(0).isApprox(expect));
  for (int c : {kX, kY, kZ}) EXPECT_DOUBLE_EQ(h(1, c), 0.0);
  EXPECT_DOUBLE_EQ(h(1, kVx), -1.0);
  EXPECT_DOUBLE_EQ(h(1, kDrift), 1.0);
  const auto hg = build_observation(StateVector::Zero(), {static_sat(Vec3(2e7, 0, 0), Constellation::Galileo)});
  EXPECT_DOUBLE_EQ(hg(0, kBiasGal), 1.0);
  EXPECT_DOUBLE_EQ(hg(0, kBiasGps), 0.0);
}

TEST(Observation, MatchesFiniteDifferences) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto alm = default_almanac();
  for (int trial = 0; trial < 20; ++trial) {
    StateVector x = StateVector::Zero();
    const Vec3 p = geodetic_to_ecef({u(rng) * 1.5, u(rng) * 3.1, 500 * (u(rng) + 1)});
    set_state_ecef(x, {p, Vec3(30 * u(rng), 30 * u(rng), 5 * u(rng))});
    x[kBiasGps] = 100 * u(rng);
    x[kBiasGal] = 100 * u(rng);
    x[kDrift] = u(rng);
    std::vector<SatelliteEpochState> sats;
    for (const auto& e : alm) sats.push_back(propagate_satellite(e, 100 * (u(rng) + 1)));
    const auto h = build_observation(x, sats);
    for (int c = 0; c < 9; ++c) {
      const double step = (c == kVx || c == kVy || c == kVz || c == kDrift) ? 1e-3 : 1e-2;
      StateVector xp = x, xm = x;
      xp[c] += step;
      xm[c] -= step;
      const Eigen::VectorXd fd =
          (predict_measurements(xp, sats).z - predict_measurements(xm, sats).z) / (2 * step);
      for (Eigen::Index r = 0; r < h.rows(); ++r) {
        const double scale = std::max(1.0, h.row(r).cwiseAbs().maxCoeff());
        EXPECT_LT(std::abs(fd[r] - h(r, c)) / scale, 1e-6) << "row " << r << " col " << c;
      }
    }
  }
}

TEST(MeasurementNoise, DiagonalPositiveAndEqualForEqualInputs) {
  const std::vector<ChannelNoiseInput> ch(4, {CorrelationModel::bpsk1(), 45.0});
  const auto r = build_measurement_noise(ch, NoiseMode::OpenLoop);
  ASSERT_EQ(r.rows(), 8);
  EXPECT_TRUE(Eigen::MatrixXd(r.diagonal().asDiagonal()).isApprox(r));
  EXPECT_GT(r.diagonal().minCoeff(), 0.0);
  for (int j = 1; j < 4; ++j) {
    EXPECT_DOUBLE_EQ(r(j, j), r(0, 0));
    EXPECT_DOUBLE_EQ(r(4 + j, 4 + j), r(4, 4));
  }
}

TEST(MeasurementNoise, WeakChannelRatio) {
  std::vector<ChannelNoiseInput> ch(3, {CorrelationModel::bpsk1(), 45.0});
  ch[1].cn0_dbhz = 20.0;
  const auto r = build_measurement_noise(ch, NoiseMode::OpenLoop);
  // Full variance model including squaring loss; the 1/C/N0 term alone gives 10^2.5.
  EXPECT_NEAR(r(1, 1) / r(0, 0), 525.9375030836324, 1e-6);
  EXPECT_NEAR(r(4, 4) / r(3, 3), std::pow(10.0, 2.5), 1e-6);
}

TEST(MeasurementNoise, ClosedLoopScaling) {
  const std::vector<ChannelNoiseInput> ch{{CorrelationModel::bpsk1(), 40.0}, {CorrelationModel::boc11(), 42.0}};
  MeasurementNoiseConfig cfg;
  const auto open = build_measurement_noise(ch, NoiseMode::OpenLoop, cfg);
  const auto closed = build_measurement_noise(ch, NoiseMode::ClosedLoop, cfg);
  EXPECT_NEAR(closed(0, 0) / open(0, 0), 2 * cfg.dll_bandwidth * cfg.T_dll, 1e-12);
  EXPECT_NEAR(closed(1, 1) / open(1, 1), 2 * cfg.dll_bandwidth * cfg.T_dll, 1e-12);
  EXPECT_NEAR(closed(2, 2) / open(2, 2), 2 * cfg.rate_bandwidth * cfg.T_fll, 1e-12);
}

TEST(MeasurementNoise, FloorAppliesToMissingEstimate) {
  const std::vector<ChannelNoiseInput> a{{CorrelationModel::bpsk1(), std::nan("")}};
  const std::vector<ChannelNoiseInput> b{{CorrelationModel::bpsk1(), 15.0}};
  EXPECT_DOUBLE_EQ(build_measurement_noise(a, NoiseMode::OpenLoop)(0, 0),
                   build_measurement_noise(b, NoiseMode::OpenLoop)(0, 0));
}

TEST(Innovation, UnitConversion) {
  Eigen::VectorXd d(2), f(2);
  d << 0.01, 0.0;
  f << 1.0, 0.0;
  const auto dz = innovation_from_discriminators(d, f);
  EXPECT_NEAR(dz[0], 2.9305, 1e-3);
  EXPECT_NEAR(dz[0], 0.01 * kChipLength, 1e-12);
  EXPECT_NEAR(dz[2], 0.19029, 1e-4);
  EXPECT_DOUBLE_EQ(dz[1], 0.0);
  EXPECT_THROW(innovation_from_discriminators(d, Eigen::VectorXd(3)), std::invalid_argument);
}

namespace {
struct Fixture {
  StateVector x = StateVector::Zero();
  StateCovariance P = StateCovariance::Identity() * 25.0;
  std::vector<SatelliteEpochState> sats;
  Fixture() {
    x[kX] = 6378137.0;
    for (const auto& e : default_almanac()) sats.push_back(propagate_satellite(e, 10.0));
  }
};
}  // namespace

TEST(Update, ZeroInnovationKeepsStateShrinksCovariance) {
  Fixture f;
  const auto h = build_observation(f.x, f.sats);
  const std::vector<ChannelNoiseInput> ch(f.sats.size(), {CorrelationModel::bpsk1(), 45.0});
  const auto r = build_measurement_noise(ch, NoiseMode::OpenLoop);
  const StateVector x0 = f.x;
  const double tr0 = f.P.trace();
  const auto res = update(f.x, f.P, h, r, Eigen::VectorXd::Zero(h.rows()));
  EXPECT_TRUE(res.applied);
  EXPECT_EQ(f.x, x0);
  EXPECT_LE(f.P.trace(), tr0);
  EXPECT_TRUE(covariance_health(f.P).ok());
  EXPECT_DOUBLE_EQ(res.nis, 0.0);
}

TEST(Update, HugeNoiseLeavesStateAlone) {
  Fixture f;
  const auto h = build_observation(f.x, f.sats);
  const std::vector<ChannelNoiseInput> ch(f.sats.size(), {CorrelationModel::bpsk1(), 45.0});
  const Eigen::MatrixXd r = build_measurement_noise(ch, NoiseMode::OpenLoop) * 1e12;
  const StateVector x0 = f.x;
  update(f.x, f.P, h, r, Eigen::VectorXd::Constant(h.rows(), 5.0));
  EXPECT_LT((f.x - x0).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Update, MatchesScalarKalmanClosedForm) {
  StateVector x = StateVector::Zero();
  StateCovariance P = StateCovariance::Identity();
  P(kX, kX) = 9.0;
  P(kX, kVx) = P(kVx, kX) = 1.5;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(1, 9);
  h(0, kX) = 1.0;
  Eigen::MatrixXd r(1, 1);
  r << 4.0;
  Eigen::VectorXd dz(1);
  dz << 2.6;
  const auto res = update(x, P, h, r, dz);
  const double s = 9.0 + 4.0;
  EXPECT_NEAR(x[kX], 9.0 / s * 2.6, 1e-12);
  EXPECT_NEAR(x[kVx], 1.5 / s * 2.6, 1e-12);
  EXPECT_NEAR(P(kX, kX), 9.0 * 4.0 / s, 1e-12);
  EXPECT_NEAR(P(kVx, kVx), 1.0 - 1.5 * 1.5 / s, 1e-12);
  EXPECT_NEAR(P(kX, kVx), 1.5 * 4.0 / s, 1e-12);
  EXPECT_NEAR(res.nis, 2.6 * 2.6 / s, 1e-12);
}

TEST(Update, SkipsIllConditionedInnovation) {
  StateVector x = StateVector::Zero();
  StateCovariance P = StateCovariance::Identity();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 9);
  h(0, kX) = 1.0;
  h(1, kX) = 1.0;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2, 2);
  const auto res = update(x, P, h, r, Eigen::VectorXd::Ones(2));
  EXPECT_FALSE(res.applied);
  EXPECT_EQ(x, StateVector::Zero());
  EXPECT_TRUE(P.isIdentity());
}

TEST(Update, DimensionMismatchThrows) {
  StateVector x = StateVector::Zero();
  StateCovariance P = StateCovariance::Identity();
  EXPECT_THROW(update(x, P, Eigen::MatrixXd::Zero(2, 9), Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(2)),
               std::invalid_argument);
  const auto res = update(x, P, Eigen::MatrixXd::Zero(0, 9), Eigen::MatrixXd::Zero(0, 0), Eigen::VectorXd::Zero(0));
  EXPECT_FALSE(res.applied);
}

TEST(Health, DetectsAsymmetryAndNegativeEigenvalues) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_TRUE(covariance_health(p).ok());
  p(0, 1) = 0.1;
  EXPECT_FALSE(covariance_health(p).ok());
  p = Eigen::MatrixXd::Identity(3, 3);
  p(2, 2) = -0.5;
  EXPECT_FALSE(covariance_health(p).ok());
}

TEST(Selection, KeepsRangeThenRateRows) {
  Eigen::VectorXd v(6);
  v << 1, 2, 3, 10, 20, 30;
  const std::vector<bool> keep{true, false, true};
  const auto s = select_channels(v, keep);
  ASSERT_EQ(s.size(), 4);
  EXPECT_EQ(s, (Eigen::VectorXd(4) << 1, 3, 10, 30).finished());
  Eigen::MatrixXd r = Eigen::MatrixXd(v.asDiagonal());
  const auto b = select_channel_block(r, keep);
  EXPECT_TRUE(b.isApprox(Eigen::MatrixXd((Eigen::VectorXd(4) << 1, 3, 10, 30).finished().asDiagonal())));
  const auto rows = select_channel_rows(Eigen::MatrixXd::Identity(6, 9), keep);
  EXPECT_EQ(rows.rows(), 4);
  EXPECT_DOUBLE_EQ(rows(1, 2), 1.0);
  EXPECT_EQ(select_channels(v, {false, false, false}).size(), 0);
}

TEST(StateAccessors, RoundTrip) {
  StateVector x = StateVector::Zero();
  set_state_ecef(x, {Vec3(1, 2, 3), Vec3(4, 5, 6)});
  EXPECT_EQ(state_position(x), Vec3(1, 2, 3));
  EXPECT_EQ(state_velocity(x), Vec3(4, 5, 6));
  x[kBiasGal] = 7;
  EXPECT_DOUBLE_EQ(state_clock_bias(x, Constellation::Galileo), 7.0);
  EXPECT_DOUBLE_EQ(state_clock_bias(x, Constellation::Gps), 0.0);
}
