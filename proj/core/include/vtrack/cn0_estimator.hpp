#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

namespace vtrack {

// Prompt correlator pair of the two half-interval sums of one epoch.
struct PromptPair {
  double ip1 = 0, qp1 = 0, ip2 = 0, qp2 = 0;
};

struct Cn0EstimatorConfig {
  std::size_t window = 50;       // epochs, 1 s at 50 Hz
  std::size_t min_samples = 20;
  double sub_interval = 0.01;    // s
  double ceiling_dbhz = 55.0;
};

// Narrowband/wideband power ratio over the two half-interval prompts of each
// epoch. nullopt when fewer than min_samples epochs are supplied.
std::optional<double> estimate_cn0(const std::vector<PromptPair>& history, const Cn0EstimatorConfig& cfg = {});

class Cn0Estimator {
 public:
  explicit Cn0Estimator(Cn0EstimatorConfig cfg = {}) : cfg_(cfg) {}
  void push(const PromptPair& p);
  std::optional<double> estimate() const;
  void reset();
  std::size_t size() const { return ratios_.size(); }

 private:
  Cn0EstimatorConfig cfg_;
  std::deque<double> ratios_;
};

}  // namespace vtrack
