#include "vtrack/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vtrack/constants.hpp"

namespace vtrack {

CorrelationModel CorrelationModel::bpsk1(double spacing) { return {Modulation::Bpsk1, spacing, 1.0}; }
CorrelationModel CorrelationModel::boc11(double spacing) { return {Modulation::Boc11, spacing, 3.0}; }
CorrelationModel CorrelationModel::for_constellation(Constellation c) {
  return c == Constellation::Gps ? bpsk1() : boc11();
}

void validate(const CorrelationModel& m) {
  if (!(m.spacing > 0.0 && m.spacing < 1.0)) throw std::invalid_argument("chip spacing must lie in (0, 1)");
  if (!(m.sharpness > 0.0)) throw std::invalid_argument("sharpness must be positive");
}

double autocorrelation(const CorrelationModel& m, double offset) {
  const double x = std::abs(offset);
  if (m.kind == Modulation::Bpsk1) return std::max(0.0, 1.0 - x);
  if (x <= 0.5) return 1.0 - 3.0 * x;
  if (x <= 1.0) return x - 1.0;
  return 0.0;
}

double correlator_amplitude(double cn0_dbhz, double T) {
  return std::sqrt(2.0 * std::pow(10.0, cn0_dbhz / 10.0) * T);
}

namespace {

double sinc_pi(double x) {
  const double a = kPi * x;
  return std::abs(a) < 1e-12 ? 1.0 : std::sin(a) / a;
}

Eigen::Matrix3d noise_cholesky(const CorrelationModel& m) {
  const double r1 = autocorrelation(m, m.spacing / 2.0);
  const double r2 = autocorrelation(m, m.spacing);
  Eigen::Matrix3d c;
  c << 1.0, r1, r2,
       r1, 1.0, r1,
       r2, r1, 1.0;
  return c.llt().matrixL();
}

CorrelatorTriplet signal_part(double code_err, double freq_err, double phase_err, double cn0, const CorrelationModel& m,
                              double T) {
  const double a = correlator_amplitude(cn0, T) * sinc_pi(freq_err * T);
  const double ci = std::cos(phase_err), si = std::sin(phase_err);
  const double d = m.spacing / 2.0;
  const double re = autocorrelation(m, code_err - d);
  const double rp = autocorrelation(m, code_err);
  const double rl = autocorrelation(m, code_err + d);
  return {a * re * ci, a * re * si, a * rp * ci, a * rp * si, a * rl * ci, a * rl * si};
}

void add_noise(CorrelatorTriplet& c, const Eigen::Matrix3d& l, const double* z, double scale) {
  const Eigen::Vector3d ni = l * Eigen::Vector3d(z[0], z[1], z[2]);
  const Eigen::Vector3d nq = l * Eigen::Vector3d(z[3], z[4], z[5]);
  c.ie += scale * ni[0];
  c.ip += scale * ni[1];
  c.il += scale * ni[2];
  c.qe += scale * nq[0];
  c.qp += scale * nq[1];
  c.ql += scale * nq[2];
}

}  // namespace

CorrelatorTriplet generate_correlators(const TruthChannelState& truth, const ChannelNcoState& nco,
                                       const CorrelationModel& model, double T, std::mt19937_64* rng) {
  if (!(T > 0.0)) throw std::invalid_argument("integration time must be positive");
  CorrelatorTriplet c = signal_part(truth.code_delay - nco.code_phase, truth.doppler - nco.carrier_doppler,
                                    truth.carrier_phase - nco.carrier_phase, truth.cn0_dbhz, model, T);
  if (rng) {
    std::normal_distribution<double> n01;
    double z[6];
    for (double& v : z) v = n01(*rng);
    add_noise(c, noise_cholesky(model), z, 1.0);
  }
  return c;
}

EpochCorrelators generate_epoch(const IntervalErrors& err, const CorrelationModel& model, double T,
                                std::mt19937_64& rng, bool noise) {
  std::normal_distribution<double> n01;
  double z[12];
  for (double& v : z) v = n01(rng);
  const Eigen::Matrix3d l = noise_cholesky(model);
  const double half = T / 2.0;

  EpochCorrelators out;
  CorrelatorTriplet* halves[2] = {&out.first, &out.second};
  for (int h = 0; h < 2; ++h) {
    const double frac = (h + 0.5) / 2.0;
    const double code = err.code_start + (err.code_end - err.code_start) * frac;
    const double phase = err.phase_start + kTwoPi * err.freq * frac * T;
    *halves[h] = signal_part(code, err.freq, phase, err.cn0_dbhz, model, half);
    add_noise(*halves[h], l, z + 6 * h, noise ? 1.0 : 0.0);
  }
  const double s = 1.0 / std::sqrt(2.0);
  out.full = {s * (out.first.ie + out.second.ie), s * (out.first.qe + out.second.qe),
              s * (out.first.ip + out.second.ip), s * (out.first.qp + out.second.qp),
              s * (out.first.il + out.second.il), s * (out.first.ql + out.second.ql)};
  return out;
}

void Cn0Schedule::add_channel(const std::string& channel, double nominal_dbhz) { channels_[channel].nominal = nominal_dbhz; }

const Cn0Schedule::Entry& Cn0Schedule::entry(const std::string& channel) const {
  auto it = channels_.find(channel);
  if (it == channels_.end()) throw std::out_of_range("unknown channel " + channel);
  return it->second;
}

void Cn0Schedule::add_outage(const std::string& channel, const OutageInterval& iv) {
  auto it = channels_.find(channel);
  if (it == channels_.end()) throw std::invalid_argument("outage for unknown channel " + channel);
  if (!(iv.start < iv.end)) throw std::invalid_argument("outage start must precede end");
  for (const auto& o : it->second.outages)
    if (iv.start < o.end && o.start < iv.end) throw std::invalid_argument("overlapping outage intervals");
  it->second.outages.push_back(iv);
  std::sort(it->second.outages.begin(), it->second.outages.end(),
            [](const OutageInterval& a, const OutageInterval& b) { return a.start < b.start; });
}

double Cn0Schedule::nominal(const std::string& channel) const { return entry(channel).nominal; }

const std::vector<OutageInterval>& Cn0Schedule::outages(const std::string& channel) const {
  return entry(channel).outages;
}

bool Cn0Schedule::in_outage(double t) const {
  for (const auto& [name, e] : channels_)
    for (const auto& o : e.outages)
      if (t >= o.start && t < o.end) return true;
  return false;
}

std::vector<std::string> Cn0Schedule::channels() const {
  std::vector<std::string> out;
  for (const auto& kv : channels_) out.push_back(kv.first);
  return out;
}

double cn0_at(const Cn0Schedule& schedule, const std::string& channel, double t) {
  const auto& e = schedule.entry(channel);
  for (const auto& o : e.outages)
    if (t >= o.start && t < o.end) return o.level;
  return e.nominal;
}

}  // namespace vtrack
