#include "vtrack/cn0_estimator.hpp"

#include <algorithm>
#include <cmath>

namespace vtrack {

namespace {

double block_ratio(const PromptPair& p) {
  const double wbp = p.ip1 * p.ip1 + p.qp1 * p.qp1 + p.ip2 * p.ip2 + p.qp2 * p.qp2;
  if (!(wbp > 0.0)) return 1.0;
  const double si = p.ip1 + p.ip2, sq = p.qp1 + p.qp2;
  return (si * si + sq * sq) / wbp;
}

double ratio_to_dbhz(double mu, const Cn0EstimatorConfig& cfg) {
  // Two blocks per ratio: mu = (1 + 2x) / (1 + x), x = C/N0 * sub_interval.
  if (mu >= 2.0) return cfg.ceiling_dbhz;
  const double x = (mu - 1.0) / (2.0 - mu);
  if (!(x > 0.0)) return 0.0;
  return std::min(cfg.ceiling_dbhz, 10.0 * std::log10(x / cfg.sub_interval));
}

}  // namespace

std::optional<double> estimate_cn0(const std::vector<PromptPair>& history, const Cn0EstimatorConfig& cfg) {
  if (history.size() < cfg.min_samples) return std::nullopt;
  const std::size_t n = std::min(history.size(), cfg.window);
  double sum = 0.0;
  for (std::size_t i = history.size() - n; i < history.size(); ++i) sum += block_ratio(history[i]);
  return ratio_to_dbhz(sum / static_cast<double>(n), cfg);
}

void Cn0Estimator::push(const PromptPair& p) {
  ratios_.push_back(block_ratio(p));
  if (ratios_.size() > cfg_.window) ratios_.pop_front();
}

std::optional<double> Cn0Estimator::estimate() const {
  if (ratios_.size() < cfg_.min_samples) return std::nullopt;
  double sum = 0.0;
  for (double r : ratios_) sum += r;
  return ratio_to_dbhz(sum / static_cast<double>(ratios_.size()), cfg_);
}

void Cn0Estimator::reset() { ratios_.clear(); }

}  // namespace vtrack
