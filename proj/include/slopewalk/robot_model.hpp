#pragma once

#include <optional>

#include "slopewalk/math_util.hpp"

namespace slopewalk {

enum class Leg { kLeft = 0, kRight = 1 };

/// Planar five-link biped: a torso and two identical two-link legs that share
/// a single hip joint at the base of the torso.
///
/// Angle conventions, used everywhere in this codebase:
///  - The leg frame is hip-centered and torso-fixed. Its "down" axis is the
///    torso axis extended below the hip, which coincides with the world
///    vertical when the torso is upright.
///  - Hip angle: thigh direction measured from the leg frame's downward
///    vertical, positive swings the foot forward (+x).
///  - Knee angle: shin flexion relative to the thigh, zero for a straight
///    leg, positive on the knee-backward branch (knee behind the hip-foot
///    line, as on the Rabbit testbed). The knee limit excludes hyperextension
///    past the straight configuration.
///  - Torso pitch: zero upright, positive leans the torso top forward.
struct RobotModel {
  double torso_mass = 12.0;  // kg
  double thigh_mass = 6.8;
  double shin_mass = 3.2;

  double torso_length = 0.625;  // m
  double thigh_length = 0.4;
  double shin_length = 0.4;

  // Rotational inertia about each link COM, kg m^2.
  double torso_inertia = 0.0;
  double thigh_inertia = 0.0;
  double shin_inertia = 0.0;

  // COM position measured from the proximal joint along the link, m.
  double torso_com = 0.0;
  double thigh_com = 0.0;
  double shin_com = 0.0;

  double hip_min = deg2rad(-110.0);  // rad
  double hip_max = deg2rad(110.0);
  double knee_min = 0.0;
  double knee_max = deg2rad(160.0);

  double torque_limit = 150.0;  // N m
  double pd_kp = 300.0;         // N m / rad
  double pd_kd = 8.0;           // N m s / rad

  /// Rabbit defaults: 32 kg total split 12 / 6.8 / 6.8 / 3.2 / 3.2, uniform
  /// rod inertias, COM at each link midpoint.
  static RobotModel rabbit();

  double total_mass() const {
    return torso_mass + 2.0 * (thigh_mass + shin_mass);
  }
  double leg_reach() const { return thigh_length + shin_length; }
  double min_leg_radius() const {
    return std::abs(thigh_length - shin_length);
  }

  /// Throws std::invalid_argument on non-positive masses/lengths/inertias or
  /// a knee limit that allows hyperextension.
  void validate() const;
};

struct LegJointAngles {
  double hip = 0.0;
  double knee = 0.0;
};

/// Foot position in the hip-centered leg frame.
Vec2 forward_kinematics(double hip, double knee, const RobotModel& model);

/// Knee-backward branch inverse kinematics. Returns nullopt when the target
/// lies outside the reachable annulus; callers are expected to clip targets
/// first (see clip_to_workspace).
std::optional<LegJointAngles> inverse_kinematics(double x, double z,
                                                 const RobotModel& model);

/// Radially clamps a foot target into the reachable annulus, shrunk by
/// `margin` on both boundaries.
Vec2 clip_to_workspace(const Vec2& target, const RobotModel& model,
                       double margin = 0.005);

/// Foot touchdown event, recorded at the swing-to-stance transition.
struct ContactRecord {
  Vec2 position = Vec2::Zero();  // world frame
  Leg leg = Leg::kLeft;
  double time = 0.0;
};

/// Support-plane pitch from two successive touchdowns of opposite legs:
/// the angle of the line connecting the contact points. Falls back to
/// `previous_estimate` when the horizontal separation is below 1 cm.
double estimate_terrain_pitch(const ContactRecord& prev,
                              const ContactRecord& curr,
                              double previous_estimate);

}  // namespace slopewalk
