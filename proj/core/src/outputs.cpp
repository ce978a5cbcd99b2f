#include "vtrack/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace vtrack {

namespace {

std::string num(double v, const char* f = "%.9g") {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(path + ": cannot open for writing");
  return f;
}

void close_out(std::ofstream& f, const std::string& path) {
  f.close();
  if (!f) throw std::runtime_error(path + ": write failed");
}

}  // namespace

void write_metrics_csv(const std::string& path, const MetricsReport& report) {
  auto f = open_out(path);
  f << "architecture,segment,field,mean,std\n";
  for (const auto& r : report.rows)
    f << r.architecture << ',' << r.segment << ',' << r.field << ',' << num(r.stats.mean) << ','
      << num(r.stats.std) << '\n';
  close_out(f, path);
}

void write_timeseries_csv(const std::string& path, const RunResult& run, const GeodeticPosition& origin) {
  auto f = open_out(path);
  const Eigen::Matrix3d rot = enu_rotation(origin);
  f << "t,nav_valid,truth_x,truth_y,truth_z,est_x,est_y,est_z,err_x,err_y,err_z,err_e,err_n,err_u,clk_bias_err,nis,"
       "nis_dof";
  for (const auto& l : run.labels)
    f << ',' << l << "_code_err," << l << "_doppler_err," << l << "_disc_err," << l << "_cn0_est," << l
      << "_tracking," << l << "_measured";
  f << '\n';
  for (const auto& e : run.epochs) {
    const Vec3 enu = rot * e.pos_err;
    f << num(e.t, "%.2f") << ',' << (e.nav_valid ? 1 : 0);
    for (const Vec3* v : {&e.truth_pos, &e.est_pos})
      for (int i = 0; i < 3; ++i) f << ',' << num((*v)[i], "%.4f");
    for (int i = 0; i < 3; ++i) f << ',' << num(e.pos_err[i], "%.6f");
    for (int i = 0; i < 3; ++i) f << ',' << num(enu[i], "%.6f");
    f << ',' << num(e.clk_err, "%.6f") << ',' << num(e.nis, "%.6g") << ',' << e.nis_dof;
    for (const auto& c : e.channels)
      f << ',' << num(c.code_err, "%.6f") << ',' << num(c.doppler_err, "%.6f") << ',' << num(c.disc_err, "%.6f")
        << ',' << num(c.cn0_est, "%.3f") << ',' << (c.tracking ? 1 : 0) << ',' << (c.measured ? 1 : 0);
    f << '\n';
  }
  close_out(f, path);
}

void write_events_csv(const std::string& path, const std::vector<RunResult>& runs) {
  auto f = open_out(path);
  f << "architecture,channel,event,t\n";
  for (const auto& r : runs)
    for (const auto& e : r.events)
      f << to_string(r.architecture) << ',' << e.channel << ',' << to_string(e.kind) << ',' << num(e.t, "%.2f")
        << '\n';
  close_out(f, path);
}

void write_svg_plot(const std::string& path, const std::string& title, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};
  const double w = 900, h = 360, l = 70, r = 150, t = 40, b = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = -1, y1 = 1;
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y0 -= 1, y1 += 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return l + (x - x0) / (x1 - x0) * (w - l - r); };
  auto py = [&](double y) { return h - b - (y - y0) / (y1 - y0) * (h - t - b); };

  auto f = open_out(path);
  char buf[256];
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"360\" font-family=\"sans-serif\" "
       "font-size=\"12\">\n<rect width=\"900\" height=\"360\" fill=\"white\"/>\n";
  f << "<text x=\"450\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n",
                l, t, w - l - r, h - t - b);
  f << buf;
  for (int i = 0; i <= 4; ++i) {
    const double yv = y0 + (y1 - y0) * i / 4.0, xv = x0 + (x1 - x0) * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/><text x=\"%.1f\" y=\"%.1f\" "
                  "text-anchor=\"end\">%.3g</text>\n",
                  l, py(yv), w - r, py(yv), l - 5, py(yv) + 4, yv);
    f << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.4g</text>\n", px(xv),
                  h - b + 18, xv);
    f << buf;
  }
  f << "<text x=\"" << (l + w - r) / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">time (s)</text>\n";
  f << "<text x=\"16\" y=\"" << (t + h - b) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (t + h - b) / 2 << ")\">" << y_label << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* col = colors[si % 7];
    const std::size_t n = std::min(s.x.size(), s.y.size());
    const std::size_t stride = std::max<std::size_t>(1, n / 2000);
    bool open = false;
    for (std::size_t i = 0; i < n; i += stride) {
      if (!std::isfinite(s.y[i])) {
        if (open) f << "\"/>\n";
        open = false;
        continue;
      }
      if (!open) f << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1\" points=\"";
      std::snprintf(buf, sizeof buf, "%s%.1f,%.1f", open ? " " : "", px(s.x[i]), py(s.y[i]));
      f << buf;
      open = true;
    }
    if (open) f << "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" stroke-width=\"2\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\">",
                  w - r + 10, t + 12 + 18.0 * si, w - r + 30, t + 12 + 18.0 * si, col, w - r + 35, t + 16 + 18.0 * si);
    f << buf << s.name << "</text>\n";
  }
  f << "</svg>\n";
  close_out(f, path);
}

void write_plots(const std::string& dir, const std::vector<RunResult>& runs, const ScenarioTruth& truth) {
  const std::filesystem::path d(dir);
  for (const auto& r : runs) {
    const std::string arch = to_string(r.architecture);
    std::vector<PlotSeries> pos(3);
    const char* axes[] = {"X", "Y", "Z"};
    for (int i = 0; i < 3; ++i) pos[i].name = axes[i];
    std::vector<PlotSeries> code, dopp;
    for (std::size_t j = 0; j < r.labels.size(); ++j)
      if (r.affected[j]) {
        code.push_back({r.labels[j], {}, {}});
        dopp.push_back({r.labels[j], {}, {}});
      }
    for (const auto& e : r.epochs) {
      if (e.nav_valid)
        for (int i = 0; i < 3; ++i) {
          pos[i].x.push_back(e.t);
          pos[i].y.push_back(e.pos_err[i]);
        }
      std::size_t a = 0;
      for (std::size_t j = 0; j < r.labels.size(); ++j) {
        if (!r.affected[j]) continue;
        const auto& c = e.channels[j];
        code[a].x.push_back(e.t);
        code[a].y.push_back(c.tracking ? c.code_err : kNaN);
        dopp[a].x.push_back(e.t);
        dopp[a].y.push_back(c.tracking ? c.doppler_err : kNaN);
        ++a;
      }
    }
    write_svg_plot((d / ("pos_err_" + arch + ".svg")).string(), arch + ": position error (ECEF)", "m", pos);
    if (!code.empty()) {
      write_svg_plot((d / ("code_err_" + arch + ".svg")).string(), arch + ": code delay error, affected channels",
                     "m", code);
      write_svg_plot((d / ("doppler_err_" + arch + ".svg")).string(), arch + ": Doppler error, affected channels",
                     "Hz", dopp);
    }
  }
  std::vector<PlotSeries> cn0;
  for (std::size_t j = 0; j < truth.channels.size(); ++j) {
    if (!truth.schedule.affected(truth.channels[j].label) && !cn0.empty()) continue;
    PlotSeries s{truth.channels[j].label, {}, {}};
    for (std::size_t k = 0; k <= truth.epochs; ++k) {
      s.x.push_back(truth.t[k]);
      s.y.push_back(truth.cn0(j, k));
    }
    cn0.push_back(std::move(s));
  }
  write_svg_plot((d / "cn0_schedule.svg").string(), "C/N0 schedule", "dB-Hz", cn0);
}

}  // namespace vtrack
