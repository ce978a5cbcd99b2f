#include "vtrack/truth.hpp"

#include <cmath>

#include "vtrack/almanac.hpp"
#include "vtrack/constants.hpp"

namespace vtrack {

std::mt19937_64 make_stream(std::uint64_t seed, StreamKind kind, const std::string& channel) {
  std::vector<std::uint32_t> words = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                      static_cast<std::uint32_t>(kind)};
  for (unsigned char ch : channel) words.push_back(ch);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

double wrap_pi(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a - kPi;
}

double ScenarioTruth::chord_doppler(std::size_t j, std::size_t k) const {
  const auto& pr = channels[j].pseudorange;
  return -(pr[k + 1] - pr[k]) / (kCarrierWavelength * dt);
}

double ScenarioTruth::carrier_phase(std::size_t j, std::size_t k) const {
  const double cycles = channels[j].pseudorange[k] / kCarrierWavelength;
  return wrap_pi(-kTwoPi * (cycles - std::floor(cycles)) + channels[j].phase0);
}

double ScenarioTruth::cn0(std::size_t j, std::size_t k) const { return cn0_at(schedule, channels[j].label, t[k]); }

std::vector<SatelliteEpochState> ScenarioTruth::satellites(std::size_t k) const {
  std::vector<SatelliteEpochState> out;
  out.reserve(channels.size());
  for (const auto& ch : channels) out.push_back(ch.sat[k]);
  return out;
}

namespace {

std::vector<TrajectorySample> user_trajectory(const ScenarioConfig& cfg, double span) {
  switch (cfg.trajectory) {
    case TrajectoryKind::Static:
      return static_trajectory(geodetic_to_ecef(cfg.origin), span, 1.0 / kEpochPeriod);
    case TrajectoryKind::Car:
      return generate_car_trajectory(cfg.origin, cfg.car, span, 1.0 / kEpochPeriod);
    case TrajectoryKind::External:
      return hermite_resample(load_trajectory_csv(cfg.trajectory_csv), 1.0 / kEpochPeriod, span);
  }
  return {};
}

}  // namespace

ScenarioTruth build_truth(const ScenarioConfig& cfg) {
  validate_config(cfg);
  ScenarioTruth tr;
  tr.dt = kEpochPeriod;
  tr.epochs = static_cast<std::size_t>(std::llround(cfg.duration / kEpochPeriod));
  tr.origin = cfg.origin;
  tr.gal_offset = cfg.clock.gal_offset;
  const std::size_t n = tr.epochs + 2;

  std::vector<TrajectorySample> traj;
  try {
    traj = user_trajectory(cfg, static_cast<double>(n - 1) * kEpochPeriod);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("trajectory: ") + e.what());
  }
  tr.t.resize(n);
  tr.user.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    tr.t[k] = static_cast<double>(k) * kEpochPeriod;
    tr.user[k] = traj[k].state;
  }

  // Two-state receiver clock driven by the same PSDs the filter assumes.
  const ClockPsd psd = clock_psd_from_allan(cfg.process.h0, cfg.process.hm2, cfg.process.f_carr);
  const double dt = kEpochPeriod;
  Eigen::Matrix2d qc;
  qc << psd.bias_psd * dt + psd.drift_psd * dt * dt * dt / 3.0, psd.drift_psd * dt * dt / 2.0,
      psd.drift_psd * dt * dt / 2.0, psd.drift_psd * dt;
  const Eigen::Matrix2d lc = qc.llt().matrixL();
  auto clock_rng = make_stream(cfg.seed, StreamKind::Clock);
  std::normal_distribution<double> n01;
  tr.bias_gps.resize(n);
  tr.drift.resize(n);
  tr.bias_gps[0] = cfg.clock.gps_bias0;
  tr.drift[0] = cfg.clock.drift0;
  for (std::size_t k = 1; k < n; ++k) {
    const double z0 = n01(clock_rng), z1 = n01(clock_rng);
    const Eigen::Vector2d w = lc * Eigen::Vector2d(z0, z1);
    tr.bias_gps[k] = tr.bias_gps[k - 1] + tr.drift[k - 1] * dt + w[0];
    tr.drift[k] = tr.drift[k - 1] + w[1];
  }

  std::vector<AlmanacEntry> almanac;
  try {
    almanac = cfg.almanac_path.empty() ? default_almanac() : load_almanac(cfg.almanac_path);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<AlmanacEntry> selected;
  if (cfg.channels.empty()) {
    selected = almanac;
  } else {
    for (const auto& label : cfg.channels) {
      bool found = false;
      for (const auto& a : almanac)
        if (channel_label(a.constellation, a.prn) == label) {
          selected.push_back(a);
          found = true;
        }
      if (!found) throw ConfigError("channel " + label + " is not in the almanac");
    }
  }

  for (const auto& a : selected) {
    ChannelTruth ch;
    ch.label = channel_label(a.constellation, a.prn);
    ch.almanac = a;
    ch.model = a.constellation == Constellation::Gps ? CorrelationModel::bpsk1(cfg.tracking.bpsk_spacing)
                                                     : CorrelationModel::boc11(cfg.tracking.boc_spacing);
    ch.sat.resize(n);
    ch.pseudorange.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      ch.sat[k] = propagate_satellite(a, tr.t[k]);
      ch.pseudorange[k] = predicted_range(ch.sat[k].ecef.position, tr.user[k].position) +
                          tr.bias(a.constellation, k) - ch.sat[k].clock_bias;
    }
    tr.schedule.add_channel(ch.label, cfg.cn0_nominal);
    tr.channels.push_back(std::move(ch));
  }
  // Outages naming channels outside the selected set are ignored.
  for (const auto& o : cfg.outages) {
    if (!tr.schedule.has_channel(o.channel)) continue;
    try {
      tr.schedule.add_outage(o.channel, {o.start, o.end, o.level});
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return tr;
}

IntervalErrors interval_errors(const ScenarioTruth& truth, std::size_t j, std::size_t k, const Replica& r) {
  const auto& pr = truth.channels[j].pseudorange;
  IntervalErrors e;
  e.code_start = (pr[k] - r.range) / kChipLength;
  e.code_end = (pr[k + 1] - (r.range + r.range_rate * truth.dt)) / kChipLength;
  e.freq = truth.chord_doppler(j, k) - r.doppler;
  e.phase_start = wrap_pi(truth.carrier_phase(j, k) - r.phase);
  e.cn0_dbhz = truth.cn0(j, k);
  return e;
}

void advance(Replica& r, double dt) {
  r.range += r.range_rate * dt;
  r.phase = wrap_pi(r.phase + kTwoPi * r.doppler * dt);
}

}  // namespace vtrack
