#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "slopewalk/math_util.hpp"

namespace slopewalk {

// Piecewise-linear height field h(x). Each breakpoint starts a segment with a
// constant slope that runs until the next breakpoint; the first segment also
// extends to the left of breaks[0]. Heights are accumulated so the profile is
// continuous, with h(breaks[0]) = 0.
class Terrain {
 public:
  Terrain(std::vector<double> breaks, std::vector<double> slopes);

  static Terrain flat(double length = 10.0);

  double height(double x) const;
  // Slope angle in radians of the segment containing x.
  double slope(double x) const;

  double x_begin() const { return breaks_.front(); }
  double x_end() const { return x_end_; }

  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& slopes() const { return slopes_; }

 private:
  friend Terrain build_track(double, const struct TrackShape&);

  std::vector<double> breaks_;
  std::vector<double> slopes_;
  std::vector<double> heights_;
  double x_end_ = 0.0;
};

struct TrackShape {
  double ramp_length = 3.0;
  double plateau_length = 2.0;
  double lead_in = 2.0;
  double lead_out = 2.0;
};

// Flat lead-in, incline ramp, flat plateau, decline ramp, flat lead-out.
Terrain build_track(double incline, const TrackShape& shape = {});

// Text form used on the command line, e.g. "ramp:7deg,3m;plateau:2m" or
// "flat". Unspecified segments keep TrackShape defaults.
Terrain parse_track_spec(const std::string& spec);

// X coordinate past which the full track (through the decline ramp) has been
// walked; x_end for flat terrain.
double track_traverse_x(const Terrain& terrain);

}  // namespace slopewalk
