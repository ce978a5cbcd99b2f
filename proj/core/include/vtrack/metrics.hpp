#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vtrack/correlator.hpp"
#include "vtrack/records.hpp"

namespace vtrack {

struct SeriesStats {
  double mean = kNaN;
  double std = kNaN;  // sample standard deviation, 0 for a single value
  std::size_t count = 0;
};

SeriesStats series_stats(const std::vector<double>& v);

enum class Segment { NoOutage, Outage };
std::string to_string(Segment s);
// Half-open outage intervals: t belongs to the outage segment when any
// channel has start <= t < end.
Segment segment_of(const Cn0Schedule& schedule, double t);

struct MetricRow {
  std::string architecture;
  std::string segment;
  std::string field;
  SeriesStats stats;
};

struct MetricsReport {
  std::vector<MetricRow> rows;
  std::optional<SeriesStats> find(const std::string& architecture, const std::string& segment,
                                  const std::string& field) const;
};

// Position fields use epochs with a filter solution; channel fields pool the
// samples of tracking channels only, so a channel without lock contributes
// nothing. "_affected" fields restrict to channels with an outage schedule.
// A field without samples gets count 0 and NaN stats. Throws
// std::invalid_argument for a run without epochs.
MetricsReport compute_metrics(const RunResult& run, const Cn0Schedule& schedule, const GeodeticPosition& origin);

std::vector<std::string> metric_fields();

}  // namespace vtrack
