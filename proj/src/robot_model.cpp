#include "slopewalk/robot_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace slopewalk {

namespace {
double rod_inertia(double mass, double length) {
  return mass * length * length / 12.0;
}
}  // namespace

RobotModel RobotModel::rabbit() {
  RobotModel m;
  m.torso_inertia = rod_inertia(m.torso_mass, m.torso_length);
  m.thigh_inertia = rod_inertia(m.thigh_mass, m.thigh_length);
  m.shin_inertia = rod_inertia(m.shin_mass, m.shin_length);
  m.torso_com = 0.5 * m.torso_length;
  m.thigh_com = 0.5 * m.thigh_length;
  m.shin_com = 0.5 * m.shin_length;
  return m;
}

void RobotModel::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string("robot model: ") + name +
                                  " must be > 0");
    }
  };
  positive(torso_mass, "torso_mass");
  positive(thigh_mass, "thigh_mass");
  positive(shin_mass, "shin_mass");
  positive(torso_length, "torso_length");
  positive(thigh_length, "thigh_length");
  positive(shin_length, "shin_length");
  positive(torso_inertia, "torso_inertia");
  positive(thigh_inertia, "thigh_inertia");
  positive(shin_inertia, "shin_inertia");
  positive(torque_limit, "torque_limit");
  positive(pd_kp, "pd_kp");
  if (pd_kd < 0.0) {
    throw std::invalid_argument("robot model: pd_kd must be >= 0");
  }
  if (torso_com <= 0.0 || torso_com > torso_length || thigh_com <= 0.0 ||
      thigh_com > thigh_length || shin_com <= 0.0 || shin_com > shin_length) {
    throw std::invalid_argument("robot model: COM offsets must lie on links");
  }
  if (hip_min >= hip_max || knee_min >= knee_max) {
    throw std::invalid_argument("robot model: empty joint range");
  }
  if (knee_min < 0.0) {
    throw std::invalid_argument(
        "robot model: knee_min < 0 would allow hyperextension past the "
        "straight leg");
  }
}

Vec2 forward_kinematics(double hip, double knee, const RobotModel& model) {
  const double a1 = hip;
  const double a2 = hip + knee;
  return {model.thigh_length * std::sin(a1) + model.shin_length * std::sin(a2),
          -model.thigh_length * std::cos(a1) -
              model.shin_length * std::cos(a2)};
}

std::optional<LegJointAngles> inverse_kinematics(double x, double z,
                                                 const RobotModel& model) {
  const double l1 = model.thigh_length;
  const double l2 = model.shin_length;
  const double r2 = x * x + z * z;
  const double r = std::sqrt(r2);
  constexpr double kTol = 1e-12;
  if (r > model.leg_reach() + kTol || r < model.min_leg_radius() - kTol) {
    return std::nullopt;
  }
  const double cos_knee =
      std::clamp((r2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2), -1.0, 1.0);
  const double knee = std::acos(cos_knee);  // [0, pi]: knee-backward branch
  // Angle of the hip-to-foot line from the downward vertical, minus the
  // interior offset between that line and the thigh.
  const double line = std::atan2(x, -z);
  const double offset = std::atan2(l2 * std::sin(knee), l1 + l2 * cos_knee);
  return LegJointAngles{line - offset, knee};
}

Vec2 clip_to_workspace(const Vec2& target, const RobotModel& model,
                       double margin) {
  const double r_max = model.leg_reach() - margin;
  const double r_min = model.min_leg_radius() + margin;
  const double r = target.norm();
  if (r < 1e-12) {
    // Direction undefined at the hip; push straight down.
    return {0.0, -r_min};
  }
  const double clipped = std::clamp(r, std::min(r_min, r_max), r_max);
  return target * (clipped / r);
}

double estimate_terrain_pitch(const ContactRecord& prev,
                              const ContactRecord& curr,
                              double previous_estimate) {
  const double dx = curr.position(0) - prev.position(0);
  const double dz = curr.position(1) - prev.position(1);
  if (std::abs(dx) < 0.01) {
    return previous_estimate;  // stepping in place
  }
  // Slope of the line through the contacts, independent of which foot is
  // ahead; stays in (-pi/2, pi/2) even for backward steps.
  return std::atan(dz / dx);
}

}  // namespace slopewalk
