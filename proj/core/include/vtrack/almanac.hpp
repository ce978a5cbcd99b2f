#pragma once

#include <istream>
#include <string>
#include <vector>

#include "vtrack/geometry.hpp"

namespace vtrack {

// 7 GPS and 6 Galileo satellites, all above 10 deg elevation at the default
// static site for the first 200 s.
std::vector<AlmanacEntry> default_almanac();

// One satellite per line: prn, constellation, radius_m, incl_rad, raan_rad,
// arglat0_rad, clkbias_m, clkdrift_mps. Commas or whitespace separate fields,
// '#' starts a comment. Constellation is GPS or GAL.
// Throws std::invalid_argument with the offending line number.
std::vector<AlmanacEntry> parse_almanac(std::istream& in);
std::vector<AlmanacEntry> load_almanac(const std::string& path);

void validate_almanac_entry(const AlmanacEntry& e);

}  // namespace vtrack
