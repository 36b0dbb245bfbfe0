#pragma once

#include <utility>

#include "slopewalk/math_util.hpp"

namespace slopewalk {

/// Clock parameters for the semi-elliptical end-foot trajectory.
struct GaitConfig {
  double period = 0.8;        // s, full gait cycle
  double hip_height = 0.7;    // m, desired hip height above the support plane
  double swing_height = 0.1;  // m, apex of the swing arc
  double phase_offset = 0.5;  // fraction of a cycle between the legs
  // x offset of the reference ellipse center (m). Negative keeps the support
  // on average behind the hip, so stance tracking propels the body forward
  // instead of braking it at each touchdown.
  double stance_offset = 0.0;

  void validate() const;
};

/// Per-leg semi-ellipse parameters commanded by the policy.
struct GaitAction {
  double step_length = 0.0;  // m, may be negative for backward steps
  double steering = 0.0;     // rad, rotation of the major axis about vertical
  double shift_x = 0.0;      // m
  double shift_y = 0.0;      // m
  double shift_z = 0.0;      // m
};

/// Foot Cartesian target in the leg frame after the action transform.
struct FootTarget {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Advances the free-running gait clock: (phase + dt/T) mod 1.
double phase_advance(double phase, double dt, const GaitConfig& config);

/// Left leg runs at the global phase, right leg at a constant offset.
std::pair<double, double> leg_phases(double phase, const GaitConfig& config);

/// Point on the reference semi-ellipse at the given phase. Stance for
/// phase in [0, 0.5) holds z = -hip_height; swing lifts along a sine arc.
Vec3 reference_foot_point(double phase, double step_length,
                          const GaitConfig& config);

/// Applies the per-leg action: steering rotates the major axis, shifts
/// translate the curve rigidly in the leg frame.
FootTarget transform_foot_point(const Vec3& p, const GaitAction& action);

}  // namespace slopewalk
