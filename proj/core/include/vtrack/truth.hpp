#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vtrack/correlator.hpp"
#include "vtrack/geometry.hpp"
#include "vtrack/scenario.hpp"

namespace vtrack {

// Independent, reproducible random streams. Every consumer derives its own
// generator from the scenario seed, a stream kind and an optional channel
// label, so draws never depend on execution order or channel subsets.
enum class StreamKind : std::uint32_t { Clock = 1, Init = 2, Correlator = 3, Reacquisition = 4, ScalarStart = 5 };
std::mt19937_64 make_stream(std::uint64_t seed, StreamKind kind, const std::string& channel = "");

struct ChannelTruth {
  std::string label;
  AlmanacEntry almanac;
  CorrelationModel model;
  std::vector<SatelliteEpochState> sat;  // per epoch
  std::vector<double> pseudorange;       // m, includes receiver clock bias
  double phase0 = 0.0;                   // rad
};

// Ground truth on the epoch grid t_k = k * dt, k = 0 .. epochs, plus one
// extra epoch so the last interval has an end point.
struct ScenarioTruth {
  double dt = 0.02;
  std::size_t epochs = 0;  // index of the final reported epoch
  std::vector<double> t;
  std::vector<EcefState> user;
  std::vector<double> bias_gps;
  std::vector<double> drift;
  double gal_offset = 0.0;
  std::vector<ChannelTruth> channels;
  Cn0Schedule schedule;
  GeodeticPosition origin;

  double bias(Constellation c, std::size_t k) const {
    return c == Constellation::Gps ? bias_gps[k] : bias_gps[k] + gal_offset;
  }
  // Doppler over [t_k, t_k+1), Hz, positive for a shrinking range.
  double chord_doppler(std::size_t j, std::size_t k) const;
  double carrier_phase(std::size_t j, std::size_t k) const;  // rad, wrapped
  double cn0(std::size_t j, std::size_t k) const;             // level over [t_k, t_k+1)
  std::vector<SatelliteEpochState> satellites(std::size_t k) const;
};

// Throws ConfigError for unknown channels or unreadable inputs.
ScenarioTruth build_truth(const ScenarioConfig& cfg);

// Replica generator of one channel, in range units.
struct Replica {
  double range = 0.0;       // m at the start of the current interval
  double range_rate = 0.0;  // m/s over the interval
  double phase = 0.0;       // rad at the start of the interval
  double doppler = 0.0;     // Hz over the interval
};

IntervalErrors interval_errors(const ScenarioTruth& truth, std::size_t j, std::size_t k, const Replica& r);
void advance(Replica& r, double dt);
double wrap_pi(double a);

}  // namespace vtrack
