#pragma once

#include <string>
#include <vector>

#include "vtrack/geometry.hpp"

namespace vtrack {

struct TrajectorySample {
  double t = 0.0;
  EcefState state;
};

struct CarProfile {
  std::vector<Vec3> waypoints_enu;  // m, relative to the scenario origin
  std::vector<double> speeds;       // cruise speed per leg, or a single value for all legs, m/s
  double accel = 1.5;               // m/s^2; <= 0 drives each leg at constant speed without stopping
};

// Default route: three legs with stops at the two corners, timed so that the
// corners fall inside the default 60-80 s and 140-160 s outages.
CarProfile default_car_profile();

// Continuous-time position/velocity along the waypoint polyline; the car
// stays at the last waypoint after the route ends. Throws std::invalid_argument
// for fewer than 2 waypoints, duplicate consecutive waypoints, or speeds
// outside (0, 30] m/s.
class CarPath {
 public:
  CarPath(const GeodeticPosition& origin, CarProfile profile);
  EcefState at(double t) const;  // ECEF
  double route_duration() const { return leg_end_.empty() ? 0.0 : leg_end_.back(); }

 private:
  struct Leg {
    Vec3 start, dir;
    double length = 0, speed = 0, accel = 0, t_ramp = 0, t_total = 0;
  };
  GeodeticPosition origin_;
  std::vector<Leg> legs_;
  std::vector<double> leg_end_;
  void enu_at(double t, Vec3& p, Vec3& v) const;
};

// Cubic Hermite resampling from position/velocity samples onto a uniform grid
// 0, 1/rate, ..., duration. Throws when samples do not cover the grid or
// times are not strictly increasing.
std::vector<TrajectorySample> hermite_resample(const std::vector<TrajectorySample>& samples, double rate,
                                               double duration);

// 1 Hz reference samples of the car path, resampled to rate.
std::vector<TrajectorySample> generate_car_trajectory(const GeodeticPosition& origin, const CarProfile& profile,
                                                      double duration, double rate = 50.0);

std::vector<TrajectorySample> static_trajectory(const Vec3& position, double duration, double rate = 50.0);

// CSV with header t,x,y,z,vx,vy,vz (ECEF, s, m, m/s).
std::vector<TrajectorySample> load_trajectory_csv(const std::string& path);

}  // namespace vtrack
