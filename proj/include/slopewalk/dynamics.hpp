#pragma once

#include "slopewalk/math_util.hpp"
#include "slopewalk/robot_model.hpp"

namespace slopewalk {

/// Generalized coordinate layout used by the whole simulator:
/// (torso x, torso z, torso pitch, hip L, knee L, hip R, knee R).
/// The hip/knee entries are the joint-space angles of robot_model.hpp.
enum Coord : int {
  kX = 0,
  kZ = 1,
  kPitch = 2,
  kHipL = 3,
  kKneeL = 4,
  kHipR = 5,
  kKneeR = 6,
};

inline constexpr int kNumCoords = 7;
inline constexpr double kGravity = 9.81;  // m/s^2

/// Closed-form Lagrangian dynamics of the planar five-link chain. Internally
/// the equations are assembled in absolute link angles (torso pitch plus the
/// four world-frame leg segment angles), where the mass matrix has a fixed
/// sparsity pattern, and mapped to the joint-space coordinates above through
/// a constant linear transform.
class PlanarBipedDynamics {
 public:
  explicit PlanarBipedDynamics(const RobotModel& model);

  Matrix7d mass_matrix(const Vector7d& q) const;
  /// Coriolis/centrifugal generalized force C(q, v)·v.
  Vector7d velocity_bias(const Vector7d& q, const Vector7d& v) const;
  /// Gradient of the potential, so the equation of motion reads
  /// M(q)·a = Q - velocity_bias - gravity_forces.
  Vector7d gravity_forces(const Vector7d& q) const;

  /// Solves M(q)·a = generalized_force - bias - gravity.
  Vector7d forward_dynamics(const Vector7d& q, const Vector7d& v,
                            const Vector7d& generalized_force) const;

  Vec2 foot_position(const Vector7d& q, Leg leg) const;
  Vec2 foot_velocity(const Vector7d& q, const Vector7d& v, Leg leg) const;
  Matrix2x7d foot_jacobian(const Vector7d& q, Leg leg) const;

  Vec2 torso_com_position(const Vector7d& q) const;
  Matrix2x7d torso_com_jacobian(const Vector7d& q) const;

  Vec2 com_position(const Vector7d& q) const;
  Vec2 linear_momentum(const Vector7d& q, const Vector7d& v) const;

  double kinetic_energy(const Vector7d& q, const Vector7d& v) const;
  /// Zero at q = 0 apart from link offsets; only differences are meaningful.
  double potential_energy(const Vector7d& q) const;

  const RobotModel& model() const { return model_; }

 private:
  /// Absolute link angles (thigh, shin) of one leg, measured from the world
  /// downward vertical, positive forward.
  void leg_angles(const Vector7d& q, Leg leg, double& thigh,
                  double& shin) const;

  Matrix7d mass_matrix_abs(const Vector7d& q_abs) const;

  RobotModel model_;
  Matrix7d T_;  // q_abs = T_ * q_joint

  // Lumped mass/inertia constants of the absolute-angle formulation.
  double kt_ = 0.0;  // torso first moment about the hip
  double k1_ = 0.0;  // thigh chain first moment
  double k2_ = 0.0;  // shin first moment
  double k3_ = 0.0;  // thigh-shin coupling
  double Jt_ = 0.0;  // torso inertia about the hip
  double J1_ = 0.0;  // thigh chain inertia about the hip
  double J2_ = 0.0;  // shin inertia about the knee
  double m_total_ = 0.0;
};

}  // namespace slopewalk
