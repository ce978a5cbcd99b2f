#include "vtrack/lock_detector.hpp"

#include <cmath>

namespace vtrack {

std::size_t LockDetector::window_len() const {
  return static_cast<std::size_t>(std::llround(cfg_.window / cfg_.period));
}

std::optional<double> LockDetector::costas_std() const {
  if (costas_.size() < window_len() || costas_.size() < 2) return std::nullopt;
  double mean = 0.0;
  for (double v : costas_) mean += v;
  mean /= static_cast<double>(costas_.size());
  double ss = 0.0;
  for (double v : costas_) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(costas_.size() - 1));
}

LockState LockDetector::update(std::optional<double> cn0_dbhz, std::optional<double> costas_rad) {
  if (costas_rad) {
    costas_.push_back(*costas_rad);
    if (costas_.size() > window_len()) costas_.pop_front();
  }
  const auto sd = costas_std();
  const bool noisy = sd && *sd > cfg_.costas_std_limit;

  if (state_ == LockState::Locked) {
    if (cn0_dbhz && *cn0_dbhz < cfg_.cn0_threshold_dbhz)
      ++low_count_;
    else
      low_count_ = 0;
    const auto hold = static_cast<std::size_t>(std::llround(cfg_.hold_time / cfg_.period));
    if (low_count_ >= hold || noisy) state_ = LockState::Lost;
  } else {
    if (cn0_dbhz && *cn0_dbhz >= cfg_.cn0_threshold_dbhz + cfg_.hysteresis_db && !noisy) {
      state_ = LockState::Locked;
      low_count_ = 0;
    }
  }
  return state_;
}

void LockDetector::reset() {
  state_ = LockState::Locked;
  costas_.clear();
  low_count_ = 0;
}

}  // namespace vtrack
