#include "vtrack/discriminators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vtrack/constants.hpp"

namespace vtrack {

double emlp_slope(const CorrelationModel& m) {
  return 2.0 * m.sharpness * (2.0 - m.sharpness * m.spacing);
}

std::optional<double> emlp_discriminator(const CorrelatorTriplet& c, const CorrelationModel& m,
                                         std::optional<double> reference_power) {
  if (!(c.prompt_power() > kPowerFloor)) return std::nullopt;
  const double e = c.early_power(), l = c.late_power();
  if (reference_power) {
    if (!(*reference_power > kPowerFloor)) return std::nullopt;
    return (e - l) / (emlp_slope(m) * *reference_power);
  }
  const double sum = e + l;
  if (!(sum > kPowerFloor)) return std::nullopt;
  const double r = autocorrelation(m, m.spacing / 2.0);
  return (e - l) * 2.0 * r * r / (emlp_slope(m) * sum);
}

std::optional<double> ddcp_fll_discriminator(double ip1, double qp1, double ip2, double qp2, double sub_interval) {
  if (!(ip1 * ip1 + qp1 * qp1 > kPowerFloor) || !(ip2 * ip2 + qp2 * qp2 > kPowerFloor)) return std::nullopt;
  if (!(sub_interval > 0.0)) throw std::invalid_argument("sub-interval must be positive");
  const double cross = ip1 * qp2 - ip2 * qp1;
  const double dot = ip1 * ip2 + qp1 * qp2;
  return std::atan2(cross, dot) / (kTwoPi * sub_interval);
}

std::optional<double> costas_discriminator(double ip, double qp) {
  if (ip == 0.0 && qp == 0.0) return std::nullopt;
  if (ip == 0.0) return kPi / 2.0;
  double v = std::atan(qp / ip);
  if (v == -kPi / 2.0) v = kPi / 2.0;
  return v;
}

namespace {
double clamp_cn0(double cn0_dbhz, bool& clamped) {
  const double c = std::clamp(cn0_dbhz, 10.0, 60.0);
  clamped = c != cn0_dbhz;
  return std::pow(10.0, c / 10.0);
}
}  // namespace

VarianceResult open_loop_code_variance(double cn0_dbhz, double T, double spacing, double sharpness, double f_code) {
  VarianceResult r;
  const double cn0 = clamp_cn0(cn0_dbhz, r.clamped);
  const double chip = kSpeedOfLight / f_code;
  r.value = chip * chip * spacing / (4.0 * sharpness * cn0 * T) * (1.0 + 2.0 / ((2.0 - spacing) * cn0 * T));
  return r;
}

VarianceResult open_loop_freq_variance(double cn0_dbhz, double T_fll, double f_carr) {
  VarianceResult r;
  const double cn0 = clamp_cn0(cn0_dbhz, r.clamped);
  const double lambda = kSpeedOfLight / f_carr;
  r.value = lambda * lambda * (2.0 / (kPi * kPi)) / (cn0 * T_fll * T_fll * T_fll);
  return r;
}

double closed_loop_factor(double bandwidth, double T) {
  if (!(bandwidth > 0.0 && T > 0.0 && bandwidth * T < 0.25))
    throw std::invalid_argument("closed-loop scaling needs 0 < B*T < 0.25");
  return 2.0 * bandwidth * T;
}

double closed_loop_variance(double open_variance, double bandwidth, double T) {
  return open_variance * closed_loop_factor(bandwidth, T);
}

}  // namespace vtrack
