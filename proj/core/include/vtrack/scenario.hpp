#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vtrack/ekf.hpp"
#include "vtrack/geometry.hpp"
#include "vtrack/lock_detector.hpp"
#include "vtrack/loop_filters.hpp"
#include "vtrack/trajectory.hpp"

namespace vtrack {

enum class Architecture { Scalar1Hz, Scalar50Hz, Vdfll };
enum class TrajectoryKind { Static, Car, External };

std::string to_string(Architecture a);
// Throws ConfigError for an unknown name.
Architecture architecture_from_string(const std::string& s);
std::vector<Architecture> all_architectures();

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutageSpec {
  std::string channel;  // label, e.g. "G3"
  double start = 0.0;
  double end = 0.0;
  double level = 20.0;
};

struct TrackingConfig {
  double bpsk_spacing = 0.5;
  double boc_spacing = 0.2;
  DllConfig dll;
  PllConfig pll;
  FllConfig fll;
  LockDetectorConfig lock;
  double reacq_time = 1.0;            // s
  double reacq_doppler_sigma = 2.0;   // Hz
  double start_code_sigma = 0.025;    // chips, scalar channels at t = 0
  double start_doppler_sigma = 1.0;   // Hz, scalar channels at t = 0
};

struct InitConfig {
  double position_sigma = 10.0;  // m
  double velocity_sigma = 1.0;   // m/s
  double clock_sigma = 30.0;     // m
  double drift_sigma = 0.5;      // m/s
};

struct ClockTruthConfig {
  double gps_bias0 = 150.0;   // m
  double gal_offset = 5.0;    // m, Galileo minus GPS receiver clock bias
  double drift0 = 0.3;        // m/s
};

struct ScenarioConfig {
  double duration = 200.0;
  TrajectoryKind trajectory = TrajectoryKind::Static;
  GeodeticPosition origin;  // static position or car start
  CarProfile car = default_car_profile();
  std::string trajectory_csv;
  std::string almanac_path;             // empty selects the built-in almanac
  std::vector<std::string> channels;    // empty selects every almanac satellite
  double cn0_nominal = 45.0;
  std::vector<OutageSpec> outages;
  std::vector<Architecture> architectures = all_architectures();
  std::uint64_t seed = 1;
  ProcessNoiseConfig process;
  ClockTruthConfig clock;
  InitConfig init;
  TrackingConfig tracking;
  bool noise = true;  // correlator thermal noise
};

GeodeticPosition enac_position();
std::vector<OutageSpec> default_outages();
// Channels of the stress test: three healthy GPS satellites plus the three
// affected satellites G3, G4 and E51.
std::vector<std::string> reduced_channel_set();

ScenarioConfig build_static_scenario();
ScenarioConfig build_car_scenario(bool reduced = false);

// Throws ConfigError.
void validate_config(const ScenarioConfig& cfg);

// Plain-text "key = value" lines; see README for the key list. Relative
// paths are resolved against base_dir. Throws ConfigError.
ScenarioConfig parse_config(std::istream& in, const std::string& base_dir = ".");
ScenarioConfig load_config(const std::string& path);

}  // namespace vtrack
