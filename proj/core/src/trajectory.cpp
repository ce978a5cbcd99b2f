#include "vtrack/trajectory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vtrack {

CarProfile default_car_profile() {
  CarProfile p;
  p.waypoints_enu = {Vec3(0, 0, 0), Vec3(900, 0, 0), Vec3(900, 1050, 0), Vec3(300, 1050, 0)};
  p.speeds = {15.0};
  p.accel = 1.5;
  return p;
}

CarPath::CarPath(const GeodeticPosition& origin, CarProfile profile) : origin_(origin) {
  const auto& wp = profile.waypoints_enu;
  if (wp.size() < 2) throw std::invalid_argument("car trajectory needs at least 2 waypoints");
  const std::size_t nlegs = wp.size() - 1;
  if (profile.speeds.size() != 1 && profile.speeds.size() != nlegs)
    throw std::invalid_argument("give one speed or one speed per leg");
  double t = 0.0;
  for (std::size_t i = 0; i < nlegs; ++i) {
    Leg leg;
    leg.start = wp[i];
    const Vec3 d = wp[i + 1] - wp[i];
    leg.length = d.norm();
    if (leg.length < 1e-6) throw std::invalid_argument("duplicate consecutive waypoints");
    leg.dir = d / leg.length;
    const double v = profile.speeds.size() == 1 ? profile.speeds[0] : profile.speeds[i];
    if (!(v > 0.0 && v <= 30.0)) throw std::invalid_argument("leg speed must lie in (0, 30] m/s");
    leg.accel = profile.accel;
    if (leg.accel > 0.0) {
      // Trapezoid, or triangle when the leg is too short to reach cruise speed.
      leg.speed = std::min(v, std::sqrt(leg.accel * leg.length));
      leg.t_ramp = leg.speed / leg.accel;
      const double cruise = leg.length - leg.speed * leg.t_ramp;
      leg.t_total = 2.0 * leg.t_ramp + cruise / leg.speed;
    } else {
      leg.speed = v;
      leg.t_total = leg.length / v;
    }
    t += leg.t_total;
    legs_.push_back(leg);
    leg_end_.push_back(t);
  }
}

void CarPath::enu_at(double t, Vec3& p, Vec3& v) const {
  double t0 = 0.0;
  for (std::size_t i = 0; i < legs_.size(); ++i) {
    const Leg& leg = legs_[i];
    if (t < leg_end_[i]) {
      const double tau = std::max(0.0, t - t0);
      double s = 0.0, sd = 0.0;
      if (leg.accel <= 0.0) {
        s = leg.speed * tau;
        sd = leg.speed;
      } else if (tau < leg.t_ramp) {
        s = 0.5 * leg.accel * tau * tau;
        sd = leg.accel * tau;
      } else if (tau < leg.t_total - leg.t_ramp) {
        s = 0.5 * leg.speed * leg.t_ramp + leg.speed * (tau - leg.t_ramp);
        sd = leg.speed;
      } else {
        const double r = leg.t_total - tau;
        s = leg.length - 0.5 * leg.accel * r * r;
        sd = leg.accel * r;
      }
      p = leg.start + s * leg.dir;
      v = sd * leg.dir;
      return;
    }
    t0 = leg_end_[i];
  }
  const Leg& last = legs_.back();
  p = last.start + last.length * last.dir;
  v = last.accel <= 0.0 ? Vec3(last.speed * last.dir) : Vec3::Zero();
  if (last.accel <= 0.0) p += (t - leg_end_.back()) * v;
}

EcefState CarPath::at(double t) const {
  Vec3 p, v;
  enu_at(t, p, v);
  const Eigen::Matrix3d r = enu_rotation(origin_).transpose();
  return {enu_to_ecef(origin_, p), r * v};
}

std::vector<TrajectorySample> hermite_resample(const std::vector<TrajectorySample>& samples, double rate,
                                               double duration) {
  if (samples.size() < 2) throw std::invalid_argument("need at least 2 trajectory samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].t > samples[i - 1].t)) throw std::invalid_argument("trajectory times must strictly increase");
  if (!(rate > 0.0 && duration > 0.0)) throw std::invalid_argument("rate and duration must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration * rate));
  if (samples.front().t > 1e-9 || samples.back().t < static_cast<double>(n) / rate - 1e-9)
    throw std::invalid_argument("trajectory samples do not cover the scenario duration");

  std::vector<TrajectorySample> out;
  out.reserve(n + 1);
  std::size_t i = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / rate;
    while (i + 2 < samples.size() && samples[i + 1].t <= t) ++i;
    const auto& a = samples[i];
    const auto& b = samples[i + 1];
    const double h = b.t - a.t;
    const double s = std::clamp((t - a.t) / h, 0.0, 1.0);
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const double d00 = 6 * s2 - 6 * s, d10 = 3 * s2 - 4 * s + 1, d01 = -6 * s2 + 6 * s, d11 = 3 * s2 - 2 * s;
    TrajectorySample o;
    o.t = t;
    o.state.position = h00 * a.state.position + h10 * h * a.state.velocity + h01 * b.state.position +
                       h11 * h * b.state.velocity;
    o.state.velocity = (d00 * a.state.position + d10 * h * a.state.velocity + d01 * b.state.position +
                        d11 * h * b.state.velocity) /
                       h;
    out.push_back(o);
  }
  return out;
}

std::vector<TrajectorySample> generate_car_trajectory(const GeodeticPosition& origin, const CarProfile& profile,
                                                      double duration, double rate) {
  const CarPath path(origin, profile);
  std::vector<TrajectorySample> ref;
  const auto secs = static_cast<int>(std::ceil(duration - 1e-9));
  for (int s = 0; s <= std::max(secs, 1); ++s) ref.push_back({double(s), path.at(double(s))});
  return hermite_resample(ref, rate, duration);
}

std::vector<TrajectorySample> static_trajectory(const Vec3& position, double duration, double rate) {
  const auto n = static_cast<std::size_t>(std::llround(duration * rate));
  std::vector<TrajectorySample> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) out[k] = {static_cast<double>(k) / rate, {position, Vec3::Zero()}};
  return out;
}

std::vector<TrajectorySample> load_trajectory_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open trajectory file: " + path);
  std::vector<TrajectorySample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    TrajectorySample s;
    if (!(ss >> s.t >> s.state.position.x() >> s.state.position.y() >> s.state.position.z() >>
          s.state.velocity.x() >> s.state.velocity.y() >> s.state.velocity.z()))
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected t,x,y,z,vx,vy,vz");
    out.push_back(s);
  }
  if (out.size() < 2) throw std::invalid_argument(path + ": fewer than 2 trajectory samples");
  return out;
}

}  // namespace vtrack
