#include "slopewalk/gait.hpp"

#include <stdexcept>

namespace slopewalk {

void GaitConfig::validate() const {
  if (!(period > 0.0)) {
    throw std::invalid_argument("gait: period must be > 0");
  }
  if (!(swing_height > 0.0 && swing_height < hip_height)) {
    throw std::invalid_argument("gait: need 0 < swing_height < hip_height");
  }
  if (phase_offset < 0.0 || phase_offset >= 1.0) {
    throw std::invalid_argument("gait: phase_offset must be in [0, 1)");
  }
}

namespace {
double wrap_unit(double v) {
  const double w = v - std::floor(v);
  return w >= 1.0 ? 0.0 : w;  // floor rounding can land exactly on 1
}
}  // namespace

double phase_advance(double phase, double dt, const GaitConfig& config) {
  return wrap_unit(phase + dt / config.period);
}

std::pair<double, double> leg_phases(double phase, const GaitConfig& config) {
  return {phase, wrap_unit(phase + config.phase_offset)};
}

Vec3 reference_foot_point(double phase, double step_length,
                          const GaitConfig& config) {
  const double x = config.stance_offset +
                   0.5 * step_length * std::cos(2.0 * kPi * (1.0 - phase));
  double z = -config.hip_height;
  if (phase >= 0.5) {  // swing
    z += config.swing_height * std::sin(2.0 * kPi * (1.0 - phase));
  }
  return {x, 0.0, z};
}

FootTarget transform_foot_point(const Vec3& p, const GaitAction& action) {
  return {action.shift_x + p.x() * std::cos(action.steering),
          action.shift_y + p.x() * std::sin(action.steering),
          action.shift_z + p.z()};
}

}  // namespace slopewalk
