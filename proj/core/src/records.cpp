#include "vtrack/records.hpp"

#include <algorithm>

namespace vtrack {

std::string to_string(ChannelEventKind k) {
  switch (k) {
    case ChannelEventKind::LockLost: return "lock_lost";
    case ChannelEventKind::ReacquisitionStart: return "reacq_start";
    case ChannelEventKind::Reacquired: return "reacquired";
  }
  return "?";
}

void FilterHealth::observe(const StateCovariance& P) {
  const auto h = covariance_health(P);
  worst_asymmetry = std::max(worst_asymmetry, h.asymmetry);
  worst_min_eig_over_trace = checks == 0 ? h.min_eig_over_trace : std::min(worst_min_eig_over_trace, h.min_eig_over_trace);
  ++checks;
}

std::size_t RunResult::count_events(ChannelEventKind k) const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [k](const ChannelEvent& e) { return e.kind == k; }));
}

StateVector truth_state(const ScenarioTruth& truth, std::size_t k) {
  StateVector x;
  set_state_ecef(x, truth.user[k]);
  x[kBiasGps] = truth.bias(Constellation::Gps, k);
  x[kBiasGal] = truth.bias(Constellation::Galileo, k);
  x[kDrift] = truth.drift[k];
  return x;
}

void initial_filter_state(const ScenarioTruth& truth, const ScenarioConfig& cfg, StateVector& x, StateCovariance& P) {
  auto rng = make_stream(cfg.seed, StreamKind::Init);
  std::normal_distribution<double> n01;
  const auto& in = cfg.init;
  const double sig[9] = {in.position_sigma, in.velocity_sigma, in.position_sigma, in.velocity_sigma,
                         in.position_sigma, in.velocity_sigma, in.clock_sigma,    in.clock_sigma,
                         in.drift_sigma};
  x = truth_state(truth, 0);
  P = StateCovariance::Zero();
  for (int i = 0; i < 9; ++i) {
    x[i] += sig[i] * n01(rng);
    P(i, i) = sig[i] * sig[i];
  }
}

void record_navigation(EpochRecord& rec, const ScenarioTruth& truth, std::size_t k, const StateVector& x) {
  rec.truth_pos = truth.user[k].position;
  rec.est_pos = state_position(x);
  rec.pos_err = rec.est_pos - rec.truth_pos;
  rec.vel_err = state_velocity(x) - truth.user[k].velocity;
  rec.clk_err = x[kBiasGps] - truth.bias(Constellation::Gps, k);
}

}  // namespace vtrack
