#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vtrack {

using Vec3 = Eigen::Vector3d;

enum class Constellation { Gps, Galileo };

struct EcefState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
};

struct AlmanacEntry {
  int prn = 0;
  Constellation constellation = Constellation::Gps;
  double radius = 0.0;       // m
  double inclination = 0.0;  // rad
  double raan = 0.0;         // rad
  double arg_lat0 = 0.0;     // rad, argument of latitude at t = 0
  double clock_bias = 0.0;   // m
  double clock_drift = 0.0;  // m/s
};

struct SatelliteEpochState {
  EcefState ecef;
  double clock_bias = 0.0;
  double clock_drift = 0.0;
  int prn = 0;
  Constellation constellation = Constellation::Gps;
};

struct GeodeticPosition {
  double latitude = 0.0;   // rad
  double longitude = 0.0;  // rad
  double height = 0.0;     // m
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SatelliteEpochState propagate_satellite(const AlmanacEntry& entry, double t);

// Throws GeometryError when the two points are closer than 1 m.
Vec3 los_unit_vector(const Vec3& sat_pos, const Vec3& user_pos);
double predicted_range(const Vec3& sat_pos, const Vec3& user_pos);
double velocity_projection(const SatelliteEpochState& sat, const EcefState& user, const Vec3& los);

Vec3 geodetic_to_ecef(const GeodeticPosition& g);
GeodeticPosition ecef_to_geodetic(const Vec3& p);
// Rows are the east, north and up axes expressed in ECEF.
Eigen::Matrix3d enu_rotation(const GeodeticPosition& ref);
Vec3 ecef_to_enu(const GeodeticPosition& ref, const Vec3& p);
Vec3 enu_to_ecef(const GeodeticPosition& ref, const Vec3& enu);

// Elevation of sat as seen from user, rad.
double elevation(const Vec3& sat_pos, const Vec3& user_pos);

double dms_to_rad(double deg, double min, double sec);

std::string channel_label(Constellation c, int prn);

}  // namespace vtrack
