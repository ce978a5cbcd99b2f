#include "vtrack/metrics.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace vtrack {

SeriesStats series_stats(const std::vector<double>& v) {
  SeriesStats s;
  s.count = v.size();
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return s;
}

std::string to_string(Segment s) { return s == Segment::Outage ? "outage" : "no_outage"; }

Segment segment_of(const Cn0Schedule& schedule, double t) {
  return schedule.in_outage(t) ? Segment::Outage : Segment::NoOutage;
}

std::optional<SeriesStats> MetricsReport::find(const std::string& architecture, const std::string& segment,
                                               const std::string& field) const {
  for (const auto& r : rows)
    if (r.architecture == architecture && r.segment == segment && r.field == field) return r.stats;
  return std::nullopt;
}

std::vector<std::string> metric_fields() {
  return {"pos_err_x", "pos_err_y",   "pos_err_z",     "pos_err_e",         "pos_err_n",
          "pos_err_u", "clk_bias_err", "code_err",     "doppler_err",       "code_disc_err",
          "code_err_affected", "doppler_err_affected", "code_disc_err_affected"};
}

MetricsReport compute_metrics(const RunResult& run, const Cn0Schedule& schedule, const GeodeticPosition& origin) {
  if (run.epochs.empty()) throw std::invalid_argument("empty time series");
  const Eigen::Matrix3d rot = enu_rotation(origin);
  std::map<std::string, std::vector<double>> data[2];
  for (const auto& e : run.epochs) {
    auto& d = data[segment_of(schedule, e.t) == Segment::Outage ? 1 : 0];
    if (e.nav_valid) {
      const Vec3 enu = rot * e.pos_err;
      d["pos_err_x"].push_back(e.pos_err.x());
      d["pos_err_y"].push_back(e.pos_err.y());
      d["pos_err_z"].push_back(e.pos_err.z());
      d["pos_err_e"].push_back(enu.x());
      d["pos_err_n"].push_back(enu.y());
      d["pos_err_u"].push_back(enu.z());
      d["clk_bias_err"].push_back(e.clk_err);
    }
    for (std::size_t j = 0; j < e.channels.size(); ++j) {
      const auto& c = e.channels[j];
      if (!c.tracking) continue;
      const bool aff = j < run.affected.size() && run.affected[j];
      auto put = [&](const char* name, double v) {
        if (!std::isfinite(v)) return;
        d[name].push_back(v);
        if (aff) d[std::string(name) + "_affected"].push_back(v);
      };
      put("code_err", c.code_err);
      put("doppler_err", c.doppler_err);
      put("code_disc_err", c.disc_err);
    }
  }
  MetricsReport rep;
  const std::string arch = to_string(run.architecture);
  for (int s = 0; s < 2; ++s)
    for (const auto& f : metric_fields())
      rep.rows.push_back({arch, to_string(s ? Segment::Outage : Segment::NoOutage), f, series_stats(data[s][f])});
  return rep;
}

}  // namespace vtrack
