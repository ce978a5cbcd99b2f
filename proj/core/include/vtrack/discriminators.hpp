#pragma once

#include <optional>

#include "vtrack/correlator.hpp"

namespace vtrack {

inline constexpr double kPowerFloor = 1e-12;

// Small-error slope of early-minus-late power per unit signal power, per chip.
double emlp_slope(const CorrelationModel& m);

// Early-minus-late power, chips, positive when the true delay leads the replica.
// With a reference signal power (noise-free |P|^2 scale, i.e. A^2) the output
// has unit slope and exact linearity inside +-Cs/2. Without it the output is
// self-normalized by the early-plus-late power.
// nullopt when the prompt power is below the floor.
std::optional<double> emlp_discriminator(const CorrelatorTriplet& c, const CorrelationModel& m,
                                         std::optional<double> reference_power = std::nullopt);

// Cross-product frequency discriminator on two consecutive prompt pairs, Hz.
// Output is the frequency of the signal relative to the replica; wraps beyond
// +-1/(2*sub_interval).
std::optional<double> ddcp_fll_discriminator(double ip1, double qp1, double ip2, double qp2, double sub_interval);

// atan(QP/IP) in (-pi/2, pi/2]. nullopt for a zero prompt.
std::optional<double> costas_discriminator(double ip, double qp);

struct VarianceResult {
  double value = 0.0;
  bool clamped = false;  // C/N0 was outside [10, 60] dB-Hz
};

// Code tracking variance of the EMLP discriminator under thermal noise, m^2.
VarianceResult open_loop_code_variance(double cn0_dbhz, double T, double spacing, double sharpness,
                                       double f_code = 1.023e6);

// Frequency variance of the cross-product discriminator, (m/s)^2.
VarianceResult open_loop_freq_variance(double cn0_dbhz, double T_fll, double f_carr = 1.57542e9);

// Throws std::invalid_argument unless B*T < 0.25.
double closed_loop_factor(double bandwidth, double T);
double closed_loop_variance(double open_variance, double bandwidth, double T);

}  // namespace vtrack
