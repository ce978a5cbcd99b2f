#pragma once

#include <cstddef>
#include <deque>
#include <optional>

namespace vtrack {

enum class LockState { Locked, Lost };

struct LockDetectorConfig {
  double cn0_threshold_dbhz = 25.0;
  double hold_time = 0.5;         // s of continuous low C/N0 before declaring loss
  double costas_std_limit = 0.6;  // rad
  double window = 0.5;            // s
  double hysteresis_db = 2.0;
  double period = 0.02;           // s per update
};

// Declares loss when the C/N0 estimate stays below threshold for hold_time,
// or when the Costas output std over a full window exceeds the limit. Once
// lost, regains lock only above threshold + hysteresis with a quiet Costas.
// Treated as locked until enough history exists.
class LockDetector {
 public:
  explicit LockDetector(LockDetectorConfig cfg = {}) : cfg_(cfg) {}
  LockState update(std::optional<double> cn0_dbhz, std::optional<double> costas_rad);
  LockState state() const { return state_; }
  std::optional<double> costas_std() const;
  void reset();

 private:
  std::size_t window_len() const;
  LockDetectorConfig cfg_;
  LockState state_ = LockState::Locked;
  std::deque<double> costas_;
  std::size_t low_count_ = 0;
};

}  // namespace vtrack
