#include "vtrack/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "vtrack/cn0_estimator.hpp"
#include "vtrack/constants.hpp"
#include "vtrack/discriminators.hpp"
#include "vtrack/lock_detector.hpp"
#include "vtrack/loop_filters.hpp"

namespace vtrack {

namespace {

constexpr std::size_t kPowerWindow = 10;

enum class Mode { Tracking, Lost, Reacquiring };

struct ScalarChannel {
  Mode mode = Mode::Tracking;
  Replica rep;
  LoopFilterState dll, pll;
  Cn0Estimator cn0;
  LockDetector lock;
  std::deque<double> power;
  double cn0_last = 45.0;
  std::size_t reacq_start = 0;
  std::mt19937_64 rng;
  std::mt19937_64 reacq_rng;
  EpochCorrelators corr;
};

double reference_power(const ScalarChannel& ch, double T) {
  double fast = 0.0;
  if (!ch.power.empty()) fast = std::accumulate(ch.power.begin(), ch.power.end(), 0.0) / double(ch.power.size());
  return std::max({2.0 * std::pow(10.0, ch.cn0_last / 10.0) * T, fast, 1e-3});
}

// Places the replica on truth with Gaussian code/Doppler errors and a random
// carrier phase, and preloads the loops accordingly.
void place_replica(ScalarChannel& ch, const ScenarioTruth& truth, std::size_t j, std::size_t k, double code_sigma_chips,
                   double doppler_sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> uphase(-kPi, kPi);
  const double dc = code_sigma_chips * n01(rng);
  const double df = doppler_sigma * n01(rng);
  const double dphi = uphase(rng);
  ch.rep.range = truth.channels[j].pseudorange[k] + kChipLength * dc;
  ch.rep.doppler = truth.chord_doppler(j, k) + df;
  ch.rep.phase = wrap_pi(truth.carrier_phase(j, k) - dphi);
  ch.rep.range_rate = -kCarrierWavelength * ch.rep.doppler;
  ch.dll = {};
  pll_reset(ch.pll, ch.rep.doppler);
  ch.cn0.reset();
  ch.lock.reset();
  ch.power.clear();
  ch.cn0_last = truth.cn0(j, k);
}

}  // namespace

RunResult run_scalar(const ScenarioTruth& truth, const ScenarioConfig& cfg, int kf_rate_hz) {
  if (kf_rate_hz != 1 && kf_rate_hz != 50) throw std::invalid_argument("positioning rate must be 1 or 50 Hz");
  const std::size_t m = truth.channels.size();
  const double dt = truth.dt;
  const auto& tcfg = cfg.tracking;
  const double relock = tcfg.lock.cn0_threshold_dbhz + tcfg.lock.hysteresis_db;
  const auto reacq_epochs = static_cast<std::size_t>(std::llround(tcfg.reacq_time / dt));

  RunResult res;
  res.architecture = kf_rate_hz == 1 ? Architecture::Scalar1Hz : Architecture::Scalar50Hz;
  for (const auto& ch : truth.channels) {
    res.labels.push_back(ch.label);
    res.affected.push_back(truth.schedule.affected(ch.label));
  }

  std::vector<ScalarChannel> chans(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto& ch = chans[j];
    const auto& label = truth.channels[j].label;
    ch.lock = LockDetector(tcfg.lock);
    ch.rng = make_stream(cfg.seed, StreamKind::Correlator, label);
    ch.reacq_rng = make_stream(cfg.seed, StreamKind::Reacquisition, label);
    auto start = make_stream(cfg.seed, StreamKind::ScalarStart, label);
    place_replica(ch, truth, j, 0, tcfg.start_code_sigma, tcfg.start_doppler_sigma, start);
  }

  StateVector x;
  StateCovariance P;
  initial_filter_state(truth, cfg, x, P);
  const double period = 1.0 / kf_rate_hz;
  const auto stride = static_cast<std::size_t>(std::llround(period / dt));
  const Matrix9 phi = build_transition(period);
  const Matrix9 q = build_process_noise(period, cfg.process);
  MeasurementNoiseConfig mcfg;
  mcfg.T_dll = tcfg.dll.period;
  mcfg.T_fll = tcfg.pll.period;
  mcfg.dll_bandwidth = tcfg.dll.bandwidth;
  mcfg.rate_bandwidth = tcfg.pll.bandwidth;
  StateVector x_sol = x;
  std::size_t k_sol = 0;

  res.epochs.resize(truth.epochs + 1);
  for (std::size_t k = 0; k <= truth.epochs; ++k) {
    EpochRecord& rec = res.epochs[k];
    rec.t = truth.t[k];
    rec.channels.resize(m);
    std::vector<bool> has_meas(m, false);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(m));
    const auto mi = static_cast<Eigen::Index>(m);

    for (std::size_t j = 0; j < m; ++j) {
      auto& ch = chans[j];
      auto& cr = rec.channels[j];
      const auto& tc = truth.channels[j];

      if (ch.mode == Mode::Tracking && k > 0) {
        const auto& c = ch.corr;
        ch.cn0.push({c.first.ip, c.first.qp, c.second.ip, c.second.qp});
        const auto est = ch.cn0.estimate();
        if (est) ch.cn0_last = *est;
        ch.power.push_back(c.full.prompt_power() - 2.0);
        if (ch.power.size() > kPowerWindow) ch.power.pop_front();
        const auto d = emlp_discriminator(c.full, tc.model, reference_power(ch, dt));
        const auto phase = costas_discriminator(c.full.ip, c.full.qp);
        if (d) cr.disc_err = kChipLength * *d;
        if (ch.lock.update(est, phase) == LockState::Lost) {
          ch.mode = Mode::Lost;
          res.events.push_back({tc.label, ChannelEventKind::LockLost, rec.t});
        } else {
          const double code_corr = dll_filter_update(ch.dll, d.value_or(0.0), tcfg.dll);
          ch.rep.doppler = pll_filter_update(ch.pll, phase.value_or(0.0), tcfg.pll);
          ch.rep.range_rate = -kCarrierWavelength * ch.rep.doppler + kChipLength * code_corr;
        }
      }

      if (ch.mode == Mode::Lost) {
        if (truth.cn0(j, k) >= relock) {
          ch.mode = Mode::Reacquiring;
          ch.reacq_start = k;
          res.events.push_back({tc.label, ChannelEventKind::ReacquisitionStart, rec.t});
        }
      } else if (ch.mode == Mode::Reacquiring) {
        if (truth.cn0(j, k) < relock) {
          ch.mode = Mode::Lost;
        } else if (k - ch.reacq_start >= reacq_epochs) {
          place_replica(ch, truth, j, k, tc.model.spacing / 2.0, tcfg.reacq_doppler_sigma, ch.reacq_rng);
          ch.mode = Mode::Tracking;
          res.events.push_back({tc.label, ChannelEventKind::Reacquired, rec.t});
        }
      }

      if (ch.mode == Mode::Tracking) {
        cr.tracking = true;
        cr.code_err = tc.pseudorange[k] - ch.rep.range;
        cr.cn0_est = ch.cn0_last;
        if (k < truth.epochs) cr.doppler_err = truth.chord_doppler(j, k) - ch.rep.doppler;
        has_meas[j] = true;
        // Pseudorange from the replica delay, rate read back from the PLL.
        z[static_cast<Eigen::Index>(j)] = ch.rep.range;
        z[mi + static_cast<Eigen::Index>(j)] = -kCarrierWavelength * ch.rep.doppler;
      }

      if (k < truth.epochs) {
        // Correlators are drawn for every channel so noise streams stay aligned.
        const IntervalErrors err = ch.mode == Mode::Tracking ? interval_errors(truth, j, k, ch.rep) : IntervalErrors{};
        ch.corr = generate_epoch(err, tc.model, dt, ch.rng, cfg.noise);
        if (ch.mode == Mode::Tracking) advance(ch.rep, dt);
      }
    }

    const bool solution = k % stride == 0;
    if (solution) {
      if (k > 0) {
        predict(x, P, phi, q);
        res.health.observe(P);
      }
      const auto sats = truth.satellites(k);
      const auto pred = predict_measurements(x, sats);
      std::vector<bool> keep(m);
      std::vector<ChannelNoiseInput> noise(m);
      for (std::size_t j = 0; j < m; ++j) {
        keep[j] = has_meas[j] && pred.valid[j];
        noise[j] = {truth.channels[j].model, chans[j].cn0_last};
        rec.channels[j].measured = keep[j];
      }
      const Eigen::VectorXd dz = select_channels(z - pred.z, keep);
      if (dz.size() > 0) {
        const Eigen::MatrixXd H = select_channel_rows(build_observation(x, sats), keep);
        const Eigen::MatrixXd R =
            select_channel_block(build_measurement_noise(noise, NoiseMode::ClosedLoop, mcfg), keep);
        const auto ur = update(x, P, H, R, dz);
        if (ur.applied) {
          rec.nis = ur.nis;
          rec.nis_dof = static_cast<int>(dz.size());
        } else {
          ++res.health.skipped_updates;
        }
        res.health.observe(P);
      }
      x_sol = x;
      k_sol = k;
      record_navigation(rec, truth, k, x);
      rec.nav_valid = true;
    } else {
      const StateVector xe = build_transition(double(k - k_sol) * dt) * x_sol;
      record_navigation(rec, truth, k, xe);
    }
  }
  return res;
}

}  // namespace vtrack
