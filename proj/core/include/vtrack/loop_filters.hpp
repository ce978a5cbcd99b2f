#pragma once

namespace vtrack {

struct DllConfig {
  int order = 1;
  double bandwidth = 1.0;  // Hz
  double period = 0.02;    // s
  double spacing = 0.5;    // chips
  double sharpness = 1.0;
};

struct PllConfig {
  int order = 3;
  double bandwidth = 10.0;  // Hz
  double period = 0.02;     // s
};

struct FllConfig {
  double period = 0.02;        // s
  double sub_interval = 0.01;  // s
};

// Throw std::invalid_argument on unsupported order or B*T out of range.
void validate(const DllConfig& cfg);
void validate(const PllConfig& cfg);
void validate(const FllConfig& cfg);

struct LoopFilterState {
  double acc1 = 0.0;  // rate-feedback accumulator (rad/s^2 for the PLL)
  double acc2 = 0.0;  // frequency accumulator (rad/s for the PLL)
  double last = 0.0;  // last command
};

// First-order DLL: code-rate correction in chips/s.
double dll_filter_update(LoopFilterState& state, double disc_chips, const DllConfig& cfg);

// Coefficients of the third-order rate-feedback PLL filter: natural frequency
// w0 = scale * B, and the two feed-forward gains. Tuned for a one-period
// command delay at B*T = 0.2 so the closed loop realizes B with ~20% overshoot.
struct PllCoefficients {
  double w0 = 0.0;
  double a3 = 0.0;
  double b3 = 0.0;
};
PllCoefficients pll_coefficients(const PllConfig& cfg);

// Third-order PLL: returns the carrier Doppler command in Hz.
double pll_filter_update(LoopFilterState& state, double disc_rad, const PllConfig& cfg);

// Preloads the PLL so its command equals doppler_hz with zero Doppler rate.
void pll_reset(LoopFilterState& state, double doppler_hz, double doppler_rate_hz_s = 0.0);

}  // namespace vtrack
