#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "vtrack/geometry.hpp"

namespace vtrack {

enum class Modulation { Bpsk1, Boc11 };

struct CorrelationModel {
  Modulation kind = Modulation::Bpsk1;
  double spacing = 0.5;    // early-late spacing, chips
  double sharpness = 1.0;  // 1 for BPSK(1), 3 for BOC(1,1)

  static CorrelationModel bpsk1(double spacing = 0.5);
  static CorrelationModel boc11(double spacing = 0.2);
  static CorrelationModel for_constellation(Constellation c);
};

void validate(const CorrelationModel& m);

// Ideal autocorrelation, offset in chips.
double autocorrelation(const CorrelationModel& m, double offset);

struct TruthChannelState {
  double code_delay = 0.0;     // chips
  double doppler = 0.0;        // Hz
  double carrier_phase = 0.0;  // rad, at the interval midpoint
  double cn0_dbhz = 45.0;
};

struct ChannelNcoState {
  double code_phase = 0.0;       // chips
  double code_rate = 0.0;        // Hz, chipping-rate offset
  double carrier_doppler = 0.0;  // Hz
  double carrier_phase = 0.0;    // rad, at the interval midpoint
};

struct CorrelatorTriplet {
  double ie = 0, qe = 0, ip = 0, qp = 0, il = 0, ql = 0;

  double early_power() const { return ie * ie + qe * qe; }
  double prompt_power() const { return ip * ip + qp * qp; }
  double late_power() const { return il * il + ql * ql; }
};

double correlator_amplitude(double cn0_dbhz, double T);

// Pass rng == nullptr for noiseless output.
CorrelatorTriplet generate_correlators(const TruthChannelState& truth, const ChannelNcoState& nco,
                                       const CorrelationModel& model, double T, std::mt19937_64* rng);

// Errors of the replica over one integration interval [0, T): code error varies
// linearly between the interval edges, frequency error is constant.
struct IntervalErrors {
  double code_start = 0.0;   // chips, truth minus replica
  double code_end = 0.0;     // chips
  double freq = 0.0;         // Hz
  double phase_start = 0.0;  // rad
  double cn0_dbhz = 45.0;
};

struct EpochCorrelators {
  CorrelatorTriplet first;   // [0, T/2)
  CorrelatorTriplet second;  // [T/2, T)
  CorrelatorTriplet full;    // (first + second) / sqrt(2), unit-variance noise
};

// Always consumes exactly 12 standard normals from rng so streams stay aligned
// whatever the channel state. noise = false zeroes the noise after drawing.
EpochCorrelators generate_epoch(const IntervalErrors& err, const CorrelationModel& model, double T,
                                std::mt19937_64& rng, bool noise = true);

struct OutageInterval {
  double start = 0.0;  // s, inclusive
  double end = 0.0;    // s, exclusive
  double level = 20.0;  // dB-Hz
};

class Cn0Schedule {
 public:
  // Channels are keyed by label, e.g. "G3" or "E51".
  void add_channel(const std::string& channel, double nominal_dbhz);
  // Throws std::invalid_argument for unknown channel, start >= end or overlap.
  void add_outage(const std::string& channel, const OutageInterval& interval);
  bool has_channel(const std::string& channel) const { return channels_.count(channel) != 0; }
  double nominal(const std::string& channel) const;
  const std::vector<OutageInterval>& outages(const std::string& channel) const;
  bool affected(const std::string& channel) const { return !outages(channel).empty(); }
  bool in_outage(double t) const;  // any channel inside one of its intervals
  std::vector<std::string> channels() const;

 private:
  struct Entry {
    double nominal = 45.0;
    std::vector<OutageInterval> outages;
  };
  const Entry& entry(const std::string& channel) const;
  std::map<std::string, Entry> channels_;

  friend double cn0_at(const Cn0Schedule&, const std::string&, double);
};

// Throws std::out_of_range for an unknown channel.
double cn0_at(const Cn0Schedule& schedule, const std::string& channel, double t);

}  // namespace vtrack
