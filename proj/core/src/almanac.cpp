#include "vtrack/almanac.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vtrack/constants.hpp"

namespace vtrack {

std::vector<AlmanacEntry> default_almanac() {
  using C = Constellation;
  return {
      {1, C::Gps, 26560000.0, 0.959931088596881, 5.226942667919261, 1.427501125990736, 0.0, 0.0},
      {2, C::Gps, 26560000.0, 0.959931088596881, 3.953792912172765, 2.764312807830748, 0.0, 0.0},
      {3, C::Gps, 26560000.0, 0.959931088596881, 5.868901432905770, 0.378605645930044, 0.0, 0.0},
      {4, C::Gps, 26560000.0, 0.959931088596881, 2.902377745216945, 1.989852323276619, 0.0, 0.0},
      {5, C::Gps, 26560000.0, 0.959931088596881, 5.212788921553055, 0.205549779515493, 0.0, 0.0},
      {6, C::Gps, 26560000.0, 0.959931088596881, 4.764527908680971, 2.577666844916962, 0.0, 0.0},
      {7, C::Gps, 26560000.0, 0.959931088596881, 3.307349865869822, 3.288820404859166, 0.0, 0.0},
      {51, C::Galileo, 29600000.0, 0.977384381116825, 6.078772385226905, 1.136121484972599, 0.0, 0.0},
      {52, C::Galileo, 29600000.0, 0.977384381116825, 6.267408819131823, 0.773299664903840, 0.0, 0.0},
      {53, C::Galileo, 29600000.0, 0.977384381116825, 3.151403899569903, 3.077897832314247, 0.0, 0.0},
      {54, C::Galileo, 29600000.0, 0.977384381116825, 5.039018814781700, 0.780966767659275, 0.0, 0.0},
      {55, C::Galileo, 29600000.0, 0.977384381116825, 4.842663812948349, 1.323428968719797, 0.0, 0.0},
      {56, C::Galileo, 29600000.0, 0.977384381116825, 0.775982233410577, 6.008511285823980, 0.0, 0.0},
  };
}

void validate_almanac_entry(const AlmanacEntry& e) {
  if (!(e.radius > kWgs84A)) throw std::invalid_argument("orbit radius must exceed the Earth radius");
  for (double v : {e.inclination, e.raan, e.arg_lat0, e.clock_bias, e.clock_drift})
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite almanac field");
}

std::vector<AlmanacEntry> parse_almanac(std::istream& in) {
  std::vector<AlmanacEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    const std::string where = "almanac line " + std::to_string(lineno) + ": ";
    AlmanacEntry e;
    std::string cons;
    try {
      e.prn = std::stoi(first);
    } catch (const std::exception&) {
      throw std::invalid_argument(where + "bad prn '" + first + "'");
    }
    if (!(ss >> cons >> e.radius >> e.inclination >> e.raan >> e.arg_lat0 >> e.clock_bias >> e.clock_drift))
      throw std::invalid_argument(where + "expected 8 fields");
    if (cons == "GPS" || cons == "gps")
      e.constellation = Constellation::Gps;
    else if (cons == "GAL" || cons == "gal")
      e.constellation = Constellation::Galileo;
    else
      throw std::invalid_argument(where + "unknown constellation '" + cons + "'");
    try {
      validate_almanac_entry(e);
    } catch (const std::invalid_argument& ex) {
      throw std::invalid_argument(where + ex.what());
    }
    for (const auto& prev : out)
      if (prev.prn == e.prn && prev.constellation == e.constellation)
        throw std::invalid_argument(where + "duplicate satellite");
    out.push_back(e);
  }
  if (out.empty()) throw std::invalid_argument("almanac contains no satellites");
  return out;
}

std::vector<AlmanacEntry> load_almanac(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open almanac file: " + path);
  return parse_almanac(f);
}

}  // namespace vtrack
