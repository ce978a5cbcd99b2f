#include "vtrack/loop_filters.hpp"

#include <cmath>
#include <stdexcept>

#include "vtrack/constants.hpp"

namespace vtrack {

void validate(const DllConfig& cfg) {
  if (cfg.order != 1) throw std::invalid_argument("only a first-order DLL is supported");
  if (!(cfg.bandwidth > 0.0 && cfg.period > 0.0 && cfg.bandwidth * cfg.period < 0.25))
    throw std::invalid_argument("DLL needs 0 < B*T < 0.25");
  if (!(cfg.spacing > 0.0 && cfg.spacing < 1.0)) throw std::invalid_argument("DLL spacing must lie in (0, 1)");
}

void validate(const PllConfig& cfg) {
  if (cfg.order != 3) throw std::invalid_argument("only a third-order PLL is supported");
  if (!(cfg.bandwidth > 0.0 && cfg.period > 0.0 && cfg.bandwidth * cfg.period < 0.4))
    throw std::invalid_argument("PLL needs 0 < B*T < 0.4");
}

void validate(const FllConfig& cfg) {
  if (!(cfg.sub_interval > 0.0)) throw std::invalid_argument("FLL sub-interval must be positive");
  if (std::abs(cfg.period - 2.0 * cfg.sub_interval) > 1e-12)
    throw std::invalid_argument("FLL period must be twice the sub-interval");
}

double dll_filter_update(LoopFilterState& state, double disc_chips, const DllConfig& cfg) {
  state.last = 4.0 * cfg.bandwidth * disc_chips;
  return state.last;
}

PllCoefficients pll_coefficients(const PllConfig& cfg) {
  return {0.7238618686 * cfg.bandwidth, 1.4049732109, 3.3120285843};
}

double pll_filter_update(LoopFilterState& state, double disc_rad, const PllConfig& cfg) {
  const auto k = pll_coefficients(cfg);
  const double t = cfg.period;
  state.acc1 += t * k.w0 * k.w0 * k.w0 * disc_rad;
  state.acc2 += t * (state.acc1 + k.a3 * k.w0 * k.w0 * disc_rad);
  state.last = (state.acc2 + k.b3 * k.w0 * disc_rad) / kTwoPi;
  return state.last;
}

void pll_reset(LoopFilterState& state, double doppler_hz, double doppler_rate_hz_s) {
  state.acc1 = kTwoPi * doppler_rate_hz_s;
  state.acc2 = kTwoPi * doppler_hz;
  state.last = doppler_hz;
}

}  // namespace vtrack
