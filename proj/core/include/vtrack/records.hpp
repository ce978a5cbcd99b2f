#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "vtrack/ekf.hpp"
#include "vtrack/scenario.hpp"
#include "vtrack/truth.hpp"

namespace vtrack {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ChannelEpochRecord {
  double code_err = kNaN;     // m, truth minus replica
  double doppler_err = kNaN;  // Hz, truth minus carrier NCO over the next interval
  double disc_err = kNaN;     // m, code discriminator output scaled to range
  double cn0_est = kNaN;      // dB-Hz
  bool tracking = false;      // replica is being driven (scalar: locked)
  bool measured = false;      // channel fed the navigation filter this epoch
};

struct EpochRecord {
  double t = 0.0;
  bool nav_valid = false;  // a filter solution exists at this epoch
  Vec3 truth_pos = Vec3::Zero();
  Vec3 est_pos = Vec3::Zero();
  Vec3 pos_err = Vec3::Zero();  // estimate minus truth, ECEF
  Vec3 vel_err = Vec3::Zero();
  double clk_err = 0.0;  // GPS clock bias, estimate minus truth
  double nis = kNaN;
  int nis_dof = 0;
  std::vector<ChannelEpochRecord> channels;
};

enum class ChannelEventKind { LockLost, ReacquisitionStart, Reacquired };
std::string to_string(ChannelEventKind k);

struct ChannelEvent {
  std::string channel;
  ChannelEventKind kind = ChannelEventKind::LockLost;
  double t = 0.0;
};

struct FilterHealth {
  double worst_asymmetry = 0.0;
  double worst_min_eig_over_trace = 0.0;
  std::size_t skipped_updates = 0;
  std::size_t checks = 0;
  void observe(const StateCovariance& P);
  bool ok() const { return worst_asymmetry < 1e-9 && worst_min_eig_over_trace > -1e-9; }
};

struct RunResult {
  Architecture architecture = Architecture::Vdfll;
  std::vector<std::string> labels;
  std::vector<bool> affected;
  std::vector<EpochRecord> epochs;
  std::vector<ChannelEvent> events;
  FilterHealth health;

  std::size_t count_events(ChannelEventKind k) const;
};

// First-epoch truth perturbed by the init stream, shared by every architecture.
void initial_filter_state(const ScenarioTruth& truth, const ScenarioConfig& cfg, StateVector& x, StateCovariance& P);
StateVector truth_state(const ScenarioTruth& truth, std::size_t k);

// Fills truth/estimate/error fields of rec from a filter state.
void record_navigation(EpochRecord& rec, const ScenarioTruth& truth, std::size_t k, const StateVector& x);

}  // namespace vtrack
