#include "vtrack/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "vtrack/constants.hpp"

namespace vtrack {

std::string to_string(Architecture a) {
  switch (a) {
    case Architecture::Scalar1Hz: return "scalar1hz";
    case Architecture::Scalar50Hz: return "scalar50hz";
    case Architecture::Vdfll: return "vdfll";
  }
  return "?";
}

Architecture architecture_from_string(const std::string& s) {
  if (s == "scalar1hz") return Architecture::Scalar1Hz;
  if (s == "scalar50hz") return Architecture::Scalar50Hz;
  if (s == "vdfll") return Architecture::Vdfll;
  throw ConfigError("unknown architecture '" + s + "'");
}

std::vector<Architecture> all_architectures() {
  return {Architecture::Scalar1Hz, Architecture::Scalar50Hz, Architecture::Vdfll};
}

GeodeticPosition enac_position() {
  return {dms_to_rad(43, 33, 56.688), -dms_to_rad(1, 28, 49.796), 200.0};
}

std::vector<OutageSpec> default_outages() {
  std::vector<OutageSpec> out;
  for (const char* ch : {"G3", "G4", "E51", "E52"})
    for (auto [a, b] : {std::pair{2.0, 12.0}, {60.0, 80.0}, {140.0, 160.0}}) out.push_back({ch, a, b, 20.0});
  return out;
}

std::vector<std::string> reduced_channel_set() { return {"G1", "G2", "G3", "G4", "G5", "E51"}; }

ScenarioConfig build_static_scenario() {
  ScenarioConfig c;
  c.trajectory = TrajectoryKind::Static;
  c.origin = enac_position();
  c.outages = default_outages();
  c.process.sigma2_x = c.process.sigma2_y = c.process.sigma2_z = 0.01;
  return c;
}

ScenarioConfig build_car_scenario(bool reduced) {
  ScenarioConfig c = build_static_scenario();
  c.trajectory = TrajectoryKind::Car;
  c.process.sigma2_x = c.process.sigma2_y = c.process.sigma2_z = 1.0;
  if (reduced) c.channels = reduced_channel_set();
  return c;
}

void validate_config(const ScenarioConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (!(c.duration > 0.0) || !std::isfinite(c.duration)) fail("duration must be positive");
  if (std::abs(c.duration / kEpochPeriod - std::round(c.duration / kEpochPeriod)) > 1e-6)
    fail("duration must be a multiple of 0.02 s");
  if (std::abs(c.origin.latitude) > kPi / 2 || std::abs(c.origin.longitude) > kPi) fail("origin out of range");
  if (c.trajectory == TrajectoryKind::External && c.trajectory_csv.empty()) fail("trajectory = csv needs trajectory.csv");
  if (c.architectures.empty()) fail("no architecture selected");
  if (!(c.cn0_nominal >= 10.0 && c.cn0_nominal <= 55.0)) fail("cn0.nominal must lie in [10, 55] dB-Hz");
  for (const auto& o : c.outages) {
    if (!(o.start < o.end)) fail("outage on " + o.channel + ": start must precede end");
    if (!(o.level >= 10.0 && o.level <= 55.0)) fail("outage level must lie in [10, 55] dB-Hz");
  }
  std::set<std::string> seen;
  for (const auto& ch : c.channels)
    if (!seen.insert(ch).second) fail("duplicate channel " + ch);
  try {
    validate(c.process);
    validate(c.tracking.dll);
    validate(c.tracking.pll);
    validate(c.tracking.fll);
    validate(CorrelationModel::bpsk1(c.tracking.bpsk_spacing));
    validate(CorrelationModel::boc11(c.tracking.boc_spacing));
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (std::abs(c.tracking.dll.period - kEpochPeriod) > 1e-12 || std::abs(c.tracking.pll.period - kEpochPeriod) > 1e-12)
    fail("loop periods are fixed at 0.02 s");
  if (!(c.tracking.reacq_time > 0.0)) fail("reacquisition time must be positive");
  if (c.car.waypoints_enu.size() < 2 && c.trajectory == TrajectoryKind::Car) fail("car needs 2 waypoints");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (seps.find(ch) != std::string::npos) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const auto d = std::stoull(v, &pos, 0);
    if (pos != v.size() || v[0] == '-') throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an unsigned integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected on/off, got '" + v + "'");
}

std::string resolve(const std::string& base, const std::string& p) {
  const std::filesystem::path path(p);
  if (path.is_absolute()) return p;
  return (std::filesystem::path(base) / path).lexically_normal().string();
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::string& base_dir) {
  ScenarioConfig c = build_static_scenario();
  bool outages_given = false;
  bool process_given = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) throw ConfigError(where + key + ": empty value");
    try {
      if (key == "duration") {
        c.duration = to_double(key, val);
      } else if (key == "trajectory") {
        if (val == "static") c.trajectory = TrajectoryKind::Static;
        else if (val == "car") c.trajectory = TrajectoryKind::Car;
        else if (val == "csv") c.trajectory = TrajectoryKind::External;
        else throw ConfigError(key + ": expected static, car or csv");
      } else if (key == "origin.lat_deg" || key == "static.lat_deg") {
        c.origin.latitude = to_double(key, val) * kPi / 180.0;
      } else if (key == "origin.lon_deg" || key == "static.lon_deg") {
        c.origin.longitude = to_double(key, val) * kPi / 180.0;
      } else if (key == "origin.height_m" || key == "static.height_m") {
        c.origin.height = to_double(key, val);
      } else if (key == "car.waypoints") {
        c.car.waypoints_enu.clear();
        for (const auto& wp : split(val, ";")) {
          const auto xs = split(wp, ", \t");
          if (xs.size() != 2 && xs.size() != 3) throw ConfigError(key + ": each waypoint is 'east north [up]'");
          c.car.waypoints_enu.emplace_back(to_double(key, xs[0]), to_double(key, xs[1]),
                                           xs.size() == 3 ? to_double(key, xs[2]) : 0.0);
        }
      } else if (key == "car.speed") {
        c.car.speeds.clear();
        for (const auto& s : split(val, ", \t")) c.car.speeds.push_back(to_double(key, s));
      } else if (key == "car.accel") {
        c.car.accel = to_double(key, val);
      } else if (key == "trajectory.csv") {
        c.trajectory_csv = resolve(base_dir, val);
      } else if (key == "almanac") {
        c.almanac_path = val == "default" ? "" : resolve(base_dir, val);
      } else if (key == "channels") {
        if (val == "full") c.channels.clear();
        else if (val == "reduced") c.channels = reduced_channel_set();
        else c.channels = split(val, ", \t");
      } else if (key == "cn0.nominal") {
        c.cn0_nominal = to_double(key, val);
      } else if (key == "outage") {
        if (!outages_given) c.outages.clear();
        outages_given = true;
        if (val == "none") continue;
        if (val == "default") {
          c.outages = default_outages();
          continue;
        }
        const auto xs = split(val, ", \t");
        if (xs.size() != 4) throw ConfigError(key + ": expected 'channel start end level'");
        c.outages.push_back({xs[0], to_double(key, xs[1]), to_double(key, xs[2]), to_double(key, xs[3])});
      } else if (key == "arch") {
        c.architectures.clear();
        for (const auto& a : split(val, ", \t")) {
          if (a == "all") c.architectures = all_architectures();
          else c.architectures.push_back(architecture_from_string(a));
        }
      } else if (key == "seed") {
        c.seed = to_u64(key, val);
      } else if (key == "process.sigma2_xyz") {
        c.process.sigma2_x = c.process.sigma2_y = c.process.sigma2_z = to_double(key, val);
        process_given = true;
      } else if (key == "process.sigma2_x") {
        c.process.sigma2_x = to_double(key, val);
        process_given = true;
      } else if (key == "process.sigma2_y") {
        c.process.sigma2_y = to_double(key, val);
        process_given = true;
      } else if (key == "process.sigma2_z") {
        c.process.sigma2_z = to_double(key, val);
        process_given = true;
      } else if (key == "process.bias_cross_term") {
        c.process.shared_drift_cross_term = to_bool(key, val);
      } else if (key == "clock.h0") {
        c.process.h0 = to_double(key, val);
      } else if (key == "clock.hm2") {
        c.process.hm2 = to_double(key, val);
      } else if (key == "clock.gal_offset_m") {
        c.clock.gal_offset = to_double(key, val);
      } else if (key == "clock.bias0_m") {
        c.clock.gps_bias0 = to_double(key, val);
      } else if (key == "clock.drift0_mps") {
        c.clock.drift0 = to_double(key, val);
      } else if (key == "init.position_sigma_m") {
        c.init.position_sigma = to_double(key, val);
      } else if (key == "init.velocity_sigma_mps") {
        c.init.velocity_sigma = to_double(key, val);
      } else if (key == "init.clock_sigma_m") {
        c.init.clock_sigma = to_double(key, val);
      } else if (key == "init.drift_sigma_mps") {
        c.init.drift_sigma = to_double(key, val);
      } else if (key == "tracking.dll_bandwidth_hz") {
        c.tracking.dll.bandwidth = to_double(key, val);
      } else if (key == "tracking.pll_bandwidth_hz") {
        c.tracking.pll.bandwidth = to_double(key, val);
      } else if (key == "tracking.bpsk_spacing") {
        c.tracking.bpsk_spacing = to_double(key, val);
      } else if (key == "tracking.boc_spacing") {
        c.tracking.boc_spacing = to_double(key, val);
      } else if (key == "reacq.time_s") {
        c.tracking.reacq_time = to_double(key, val);
      } else if (key == "reacq.doppler_sigma_hz") {
        c.tracking.reacq_doppler_sigma = to_double(key, val);
      } else if (key == "noise") {
        c.noise = to_bool(key, val);
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  if (!process_given && c.trajectory != TrajectoryKind::Static)
    c.process.sigma2_x = c.process.sigma2_y = c.process.sigma2_z = 1.0;
  validate_config(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  const auto base = std::filesystem::path(path).parent_path().string();
  try {
    return parse_config(f, base.empty() ? "." : base);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace vtrack
