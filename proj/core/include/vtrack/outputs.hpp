#pragma once

#include <string>
#include <vector>

#include "vtrack/metrics.hpp"
#include "vtrack/records.hpp"

namespace vtrack {

// All writers throw std::runtime_error naming the file on I/O failure.
void write_metrics_csv(const std::string& path, const MetricsReport& report);
void write_timeseries_csv(const std::string& path, const RunResult& run, const GeodeticPosition& origin);
void write_events_csv(const std::string& path, const std::vector<RunResult>& runs);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;  // NaN breaks the line
};

void write_svg_plot(const std::string& path, const std::string& title, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

// Position error per axis and affected-channel code/Doppler error per run,
// plus the C/N0 schedule.
void write_plots(const std::string& dir, const std::vector<RunResult>& runs, const ScenarioTruth& truth);

}  // namespace vtrack
