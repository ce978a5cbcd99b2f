#include "vtrack/geometry.hpp"

#include <cmath>

#include "vtrack/constants.hpp"

namespace vtrack {

SatelliteEpochState propagate_satellite(const AlmanacEntry& entry, double t) {
  const double r = entry.radius;
  const double n = std::sqrt(kEarthMu / (r * r * r));
  const double u = entry.arg_lat0 + n * t;
  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(entry.raan), so = std::sin(entry.raan);
  const double ci = std::cos(entry.inclination), si = std::sin(entry.inclination);

  SatelliteEpochState s;
  s.prn = entry.prn;
  s.constellation = entry.constellation;
  s.ecef.position = r * Vec3(co * cu - so * su * ci, so * cu + co * su * ci, su * si);
  s.ecef.velocity = r * n * Vec3(-co * su - so * cu * ci, -so * su + co * cu * ci, cu * si);
  s.clock_bias = entry.clock_bias + entry.clock_drift * t;
  s.clock_drift = entry.clock_drift;
  return s;
}

Vec3 los_unit_vector(const Vec3& sat_pos, const Vec3& user_pos) {
  const Vec3 d = sat_pos - user_pos;
  const double r = d.norm();
  if (!(r >= 1.0)) throw GeometryError("degenerate geometry: satellite-user range below 1 m");
  return d / r;
}

double predicted_range(const Vec3& sat_pos, const Vec3& user_pos) { return (sat_pos - user_pos).norm(); }

double velocity_projection(const SatelliteEpochState& sat, const EcefState& user, const Vec3& los) {
  return (sat.ecef.velocity - user.velocity).dot(los);
}

Vec3 geodetic_to_ecef(const GeodeticPosition& g) {
  const double sl = std::sin(g.latitude), cl = std::cos(g.latitude);
  const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * sl * sl);
  return {(n + g.height) * cl * std::cos(g.longitude), (n + g.height) * cl * std::sin(g.longitude),
          (n * (1.0 - kWgs84E2) + g.height) * sl};
}

GeodeticPosition ecef_to_geodetic(const Vec3& p) {
  GeodeticPosition g;
  g.longitude = std::atan2(p.y(), p.x());
  const double rho = std::hypot(p.x(), p.y());
  if (rho < 1e-9) {
    g.latitude = p.z() >= 0.0 ? kPi / 2 : -kPi / 2;
    g.height = std::abs(p.z()) - kWgs84B;
    return g;
  }
  double lat = std::atan2(p.z(), rho * (1.0 - kWgs84E2));
  double h = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double sl = std::sin(lat);
    const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * sl * sl);
    h = rho / std::cos(lat) - n;
    const double next = std::atan2(p.z(), rho * (1.0 - kWgs84E2 * n / (n + h)));
    const bool done = std::abs(next - lat) < 1e-15;
    lat = next;
    if (done) break;
  }
  const double sl = std::sin(lat);
  const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * sl * sl);
  // Height from the component along the normal, stable at high latitude.
  h = rho * std::cos(lat) + p.z() * sl - kWgs84A * kWgs84A / n;
  g.latitude = lat;
  g.height = h;
  return g;
}

Eigen::Matrix3d enu_rotation(const GeodeticPosition& ref) {
  const double sl = std::sin(ref.latitude), cl = std::cos(ref.latitude);
  const double so = std::sin(ref.longitude), co = std::cos(ref.longitude);
  Eigen::Matrix3d m;
  m << -so, co, 0.0,
       -sl * co, -sl * so, cl,
       cl * co, cl * so, sl;
  return m;
}

Vec3 ecef_to_enu(const GeodeticPosition& ref, const Vec3& p) {
  return enu_rotation(ref) * (p - geodetic_to_ecef(ref));
}

Vec3 enu_to_ecef(const GeodeticPosition& ref, const Vec3& enu) {
  return geodetic_to_ecef(ref) + enu_rotation(ref).transpose() * enu;
}

double elevation(const Vec3& sat_pos, const Vec3& user_pos) {
  const Vec3 enu = enu_rotation(ecef_to_geodetic(user_pos)) * los_unit_vector(sat_pos, user_pos);
  return std::asin(enu.z());
}

double dms_to_rad(double deg, double min, double sec) {
  const double s = deg < 0.0 ? -1.0 : 1.0;
  return s * (std::abs(deg) + min / 60.0 + sec / 3600.0) * kPi / 180.0;
}

std::string channel_label(Constellation c, int prn) {
  return (c == Constellation::Gps ? "G" : "E") + std::to_string(prn);
}

}  // namespace vtrack
