#include "vtrack/vdfll.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "vtrack/cn0_estimator.hpp"
#include "vtrack/constants.hpp"
#include "vtrack/discriminators.hpp"

namespace vtrack {

double carrier_nco_command(double predicted_range_rate, double f_carr) {
  return -predicted_range_rate * f_carr / kSpeedOfLight;
}

double code_nco_command(double next_range, double range, double T, double f_code) {
  return f_code * (next_range - range) / (kSpeedOfLight * T);
}

namespace {

constexpr std::size_t kPowerWindow = 10;

struct VectorChannel {
  Replica rep;
  Cn0Estimator cn0;
  std::deque<double> power;  // |P|^2 - 2, recent epochs
  double cn0_last = 45.0;
  std::mt19937_64 rng;
  EpochCorrelators corr;
};

// Signal power reference for the code discriminator: the larger of the level
// implied by the C/N0 estimate and a fast average of the prompt power, so the
// output scale recovers quickly when a channel leaves an outage.
double reference_power(const VectorChannel& ch, double T) {
  double fast = 0.0;
  if (!ch.power.empty()) fast = std::accumulate(ch.power.begin(), ch.power.end(), 0.0) / double(ch.power.size());
  return std::max({2.0 * std::pow(10.0, ch.cn0_last / 10.0) * T, fast, 1e-3});
}

}  // namespace

RunResult run_vdfll(const ScenarioTruth& truth, const ScenarioConfig& cfg, const VdfllOptions& opt) {
  const std::size_t m = truth.channels.size();
  const double dt = truth.dt;
  RunResult res;
  res.architecture = Architecture::Vdfll;
  for (const auto& ch : truth.channels) {
    res.labels.push_back(ch.label);
    res.affected.push_back(truth.schedule.affected(ch.label));
  }

  StateVector x;
  StateCovariance P;
  initial_filter_state(truth, cfg, x, P);
  if (opt.use_truth_init) x = truth_state(truth, 0);
  const Matrix9 phi = build_transition(dt);
  const Matrix9 phi_half = build_transition(dt / 2.0);
  const Matrix9 q = build_process_noise(dt, cfg.process);
  MeasurementNoiseConfig mcfg;
  mcfg.T_dll = cfg.tracking.dll.period;
  mcfg.T_fll = cfg.tracking.fll.period;

  std::vector<VectorChannel> chans(m);
  {
    const auto pred = predict_measurements(x, truth.satellites(0));
    for (std::size_t j = 0; j < m; ++j) {
      auto& ch = chans[j];
      const auto& label = truth.channels[j].label;
      ch.rng = make_stream(cfg.seed, StreamKind::Correlator, label);
      auto init = make_stream(cfg.seed, StreamKind::Init, label);
      ch.rep.phase = std::uniform_real_distribution<double>(-kPi, kPi)(init);
      ch.rep.range = pred.z[static_cast<Eigen::Index>(j)];
      ch.cn0_last = truth.schedule.nominal(label);
    }
  }

  res.epochs.resize(truth.epochs + 1);
  for (std::size_t k = 0; k <= truth.epochs; ++k) {
    EpochRecord& rec = res.epochs[k];
    rec.t = truth.t[k];
    rec.channels.resize(m);
    const auto sats = truth.satellites(k);

    if (k > 0) {
      std::vector<bool> keep(m, false);
      Eigen::VectorXd dll = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
      Eigen::VectorXd fll = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
      std::vector<ChannelNoiseInput> noise(m);
      for (std::size_t j = 0; j < m; ++j) {
        auto& ch = chans[j];
        const auto& c = ch.corr;
        ch.cn0.push({c.first.ip, c.first.qp, c.second.ip, c.second.qp});
        if (auto e = ch.cn0.estimate()) ch.cn0_last = *e;
        ch.power.push_back(c.full.prompt_power() - 2.0);
        if (ch.power.size() > kPowerWindow) ch.power.pop_front();
        const auto& model = truth.channels[j].model;
        const auto d = emlp_discriminator(c.full, model, reference_power(ch, dt));
        const auto f = ddcp_fll_discriminator(c.first.ip, c.first.qp, c.second.ip, c.second.qp,
                                              cfg.tracking.fll.sub_interval);
        noise[j] = {model, ch.cn0_last};
        rec.channels[j].cn0_est = ch.cn0_last;
        if (d && f) {
          keep[j] = true;
          dll[static_cast<Eigen::Index>(j)] = *d;
          // The discriminator reports signal minus replica frequency; a
          // positive Doppler error means the range rate is below the replica's.
          fll[static_cast<Eigen::Index>(j)] = -*f;
          rec.channels[j].disc_err = kChipLength * *d;
        }
      }
      const auto pred = predict_measurements(x, sats);
      for (std::size_t j = 0; j < m; ++j) keep[j] = keep[j] && pred.valid[j];
      const Eigen::VectorXd dz = select_channels(innovation_from_discriminators(dll, fll), keep);
      if (dz.size() > 0) {
        const Eigen::MatrixXd H = select_channel_rows(build_observation(x, sats), keep);
        const Eigen::MatrixXd R = select_channel_block(build_measurement_noise(noise, NoiseMode::OpenLoop, mcfg), keep);
        const auto ur = update(x, P, H, R, dz);
        if (ur.applied) {
          rec.nis = ur.nis;
          rec.nis_dof = static_cast<int>(dz.size());
        } else {
          ++res.health.skipped_updates;
        }
        res.health.observe(P);
      }
      for (std::size_t j = 0; j < m; ++j) rec.channels[j].measured = keep[j];
    }

    record_navigation(rec, truth, k, x);
    rec.nav_valid = true;
    for (std::size_t j = 0; j < m; ++j) {
      rec.channels[j].tracking = true;
      rec.channels[j].code_err = truth.channels[j].pseudorange[k] - chans[j].rep.range;
      if (k == 0) rec.channels[j].cn0_est = chans[j].cn0_last;
    }
    if (k == truth.epochs) break;

    // Predict the next epoch and close every channel's NCOs on it.
    const StateVector x_mid = phi_half * x;
    predict(x, P, phi, q);
    res.health.observe(P);
    const auto next = predict_measurements(x, truth.satellites(k + 1));
    const EcefState user_mid = state_ecef(x_mid);
    const double t_mid = truth.t[k] + dt / 2.0;
    for (std::size_t j = 0; j < m; ++j) {
      auto& ch = chans[j];
      const auto& tc = truth.channels[j];
      if (next.valid[j]) {
        const double next_range = next.z[static_cast<Eigen::Index>(j)];
        ch.rep.range_rate = code_nco_command(next_range, ch.rep.range, dt) * kChipLength;
        const auto sat_mid = propagate_satellite(tc.almanac, t_mid);
        const Vec3 los = los_unit_vector(sat_mid.ecef.position, user_mid.position);
        const double rate = velocity_projection(sat_mid, user_mid, los) + x_mid[kDrift] - sat_mid.clock_drift;
        ch.rep.doppler = carrier_nco_command(rate);
      }
      rec.channels[j].doppler_err = truth.chord_doppler(j, k) - ch.rep.doppler;
      ch.corr = generate_epoch(interval_errors(truth, j, k, ch.rep), tc.model, dt, ch.rng, cfg.noise);
      advance(ch.rep, dt);
    }
  }
  return res;
}

}  // namespace vtrack
