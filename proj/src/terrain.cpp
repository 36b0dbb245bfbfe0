#include "slopewalk/terrain.hpp"

#include <algorithm>
#include <stdexcept>

namespace slopewalk {

Terrain::Terrain(std::vector<double> breaks, std::vector<double> slopes)
    : breaks_(std::move(breaks)), slopes_(std::move(slopes)) {
  if (breaks_.empty() || breaks_.size() != slopes_.size()) {
    throw std::invalid_argument("terrain: need matching breaks and slopes");
  }
  for (size_t i = 1; i < breaks_.size(); ++i) {
    if (!(breaks_[i] > breaks_[i - 1])) {
      throw std::invalid_argument("terrain: breakpoints must increase");
    }
  }
  heights_.resize(breaks_.size());
  heights_[0] = 0.0;
  for (size_t i = 1; i < breaks_.size(); ++i) {
    heights_[i] = heights_[i - 1] +
                  (breaks_[i] - breaks_[i - 1]) * std::tan(slopes_[i - 1]);
  }
  x_end_ = breaks_.back() + 2.0;
}

Terrain Terrain::flat(double length) {
  Terrain t({0.0}, {0.0});
  t.x_end_ = length;
  return t;
}

double Terrain::height(double x) const {
  // Index of the segment containing x; first segment extends left.
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  const size_t i = it == breaks_.begin() ? 0 : (it - breaks_.begin() - 1);
  return heights_[i] + (x - breaks_[i]) * std::tan(slopes_[i]);
}

double Terrain::slope(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  const size_t i = it == breaks_.begin() ? 0 : (it - breaks_.begin() - 1);
  return slopes_[i];
}

Terrain build_track(double incline, const TrackShape& shape) {
  if (!(shape.ramp_length > 0.0 && shape.plateau_length > 0.0 &&
        shape.lead_in > 0.0 && shape.lead_out > 0.0)) {
    throw std::invalid_argument("track: all segment lengths must be > 0");
  }
  const double b1 = shape.lead_in;
  const double b2 = b1 + shape.ramp_length;
  const double b3 = b2 + shape.plateau_length;
  const double b4 = b3 + shape.ramp_length;
  Terrain t({0.0, b1, b2, b3, b4}, {0.0, incline, 0.0, -incline, 0.0});
  t.x_end_ = b4 + shape.lead_out;
  return t;
}

namespace {

double parse_length_m(std::string tok, const std::string& spec) {
  if (tok.size() > 1 && tok.back() == 'm') {
    tok.pop_back();
  }
  try {
    return std::stod(tok);
  } catch (const std::exception&) {
    throw std::invalid_argument("track spec '" + spec + "': bad length '" +
                                tok + "'");
  }
}

}  // namespace

Terrain parse_track_spec(const std::string& spec) {
  if (spec == "flat" || spec.empty()) {
    return Terrain::flat();
  }
  TrackShape shape;
  double incline = 0.0;
  bool saw_ramp = false;
  std::string rest = spec;
  while (!rest.empty()) {
    const size_t semi = rest.find(';');
    std::string part = rest.substr(0, semi);
    rest = semi == std::string::npos ? "" : rest.substr(semi + 1);
    const size_t colon = part.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("track spec '" + spec +
                                  "': expected name:args in '" + part + "'");
    }
    const std::string name = part.substr(0, colon);
    const std::string args = part.substr(colon + 1);
    if (name == "ramp") {
      const size_t comma = args.find(',');
      std::string angle = comma == std::string::npos ? args : args.substr(0, comma);
      if (angle.size() > 3 && angle.substr(angle.size() - 3) == "deg") {
        angle = angle.substr(0, angle.size() - 3);
      }
      try {
        incline = deg2rad(std::stod(angle));
      } catch (const std::exception&) {
        throw std::invalid_argument("track spec '" + spec + "': bad angle");
      }
      if (comma != std::string::npos) {
        shape.ramp_length = parse_length_m(args.substr(comma + 1), spec);
      }
      saw_ramp = true;
    } else if (name == "plateau") {
      shape.plateau_length = parse_length_m(args, spec);
    } else if (name == "lead_in") {
      shape.lead_in = parse_length_m(args, spec);
    } else if (name == "lead_out") {
      shape.lead_out = parse_length_m(args, spec);
    } else {
      throw std::invalid_argument("track spec '" + spec +
                                  "': unknown segment '" + name + "'");
    }
  }
  if (!saw_ramp) {
    throw std::invalid_argument("track spec '" + spec + "': missing ramp");
  }
  return build_track(incline, shape);
}

double track_traverse_x(const Terrain& terrain) {
  return terrain.breaks().size() > 1 ? terrain.breaks().back()
                                     : terrain.x_end();
}

}  // namespace slopewalk
