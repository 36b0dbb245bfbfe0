#include "slopewalk/dynamics.hpp"

#include <Eigen/Cholesky>

namespace slopewalk {

namespace {

// Absolute-angle coordinate order: x, z, pitch, thighL, shinL, thighR, shinR.
constexpr int kAbsThighL = 3;
constexpr int kAbsShinL = 4;
constexpr int kAbsThighR = 5;
constexpr int kAbsShinR = 6;

// Unit vector along a leg segment with absolute angle a (0 = straight down,
// positive = foot forward) and its derivative with respect to a.
inline Vec2 leg_dir(double a) { return {std::sin(a), -std::cos(a)}; }
inline Vec2 leg_dir_deriv(double a) { return {std::cos(a), std::sin(a)}; }

}  // namespace

PlanarBipedDynamics::PlanarBipedDynamics(const RobotModel& model)
    : model_(model) {
  model_.validate();

  const RobotModel& m = model_;
  kt_ = m.torso_mass * m.torso_com;
  k1_ = m.thigh_mass * m.thigh_com + m.shin_mass * m.thigh_length;
  k2_ = m.shin_mass * m.shin_com;
  k3_ = m.shin_mass * m.thigh_length * m.shin_com;
  Jt_ = m.torso_inertia + m.torso_mass * m.torso_com * m.torso_com;
  J1_ = m.thigh_inertia + m.thigh_mass * m.thigh_com * m.thigh_com +
        m.shin_mass * m.thigh_length * m.thigh_length;
  J2_ = m.shin_inertia + m.shin_mass * m.shin_com * m.shin_com;
  m_total_ = m.total_mass();

  T_.setZero();
  T_(kX, kX) = 1.0;
  T_(kZ, kZ) = 1.0;
  T_(kPitch, kPitch) = 1.0;
  T_(kAbsThighL, kPitch) = -1.0;
  T_(kAbsThighL, kHipL) = 1.0;
  T_(kAbsShinL, kPitch) = -1.0;
  T_(kAbsShinL, kHipL) = 1.0;
  T_(kAbsShinL, kKneeL) = 1.0;
  T_(kAbsThighR, kPitch) = -1.0;
  T_(kAbsThighR, kHipR) = 1.0;
  T_(kAbsShinR, kPitch) = -1.0;
  T_(kAbsShinR, kHipR) = 1.0;
  T_(kAbsShinR, kKneeR) = 1.0;
}

void PlanarBipedDynamics::leg_angles(const Vector7d& q, Leg leg, double& thigh,
                                     double& shin) const {
  const int hip = leg == Leg::kLeft ? kHipL : kHipR;
  const int knee = leg == Leg::kLeft ? kKneeL : kKneeR;
  thigh = q[hip] - q[kPitch];
  shin = q[hip] + q[knee] - q[kPitch];
}

Matrix7d PlanarBipedDynamics::mass_matrix_abs(const Vector7d& qa) const {
  const double ct = std::cos(qa[kPitch]);
  const double st = std::sin(qa[kPitch]);

  Matrix7d M = Matrix7d::Zero();
  M(kX, kX) = m_total_;
  M(kZ, kZ) = m_total_;
  M(kPitch, kPitch) = Jt_;
  M(kX, kPitch) = kt_ * ct;
  M(kZ, kPitch) = -kt_ * st;

  for (int leg = 0; leg < 2; ++leg) {
    const int it = leg == 0 ? kAbsThighL : kAbsThighR;
    const int is = leg == 0 ? kAbsShinL : kAbsShinR;
    const double at = qa[it];
    const double as = qa[is];
    M(kX, it) = k1_ * std::cos(at);
    M(kX, is) = k2_ * std::cos(as);
    M(kZ, it) = k1_ * std::sin(at);
    M(kZ, is) = k2_ * std::sin(as);
    M(it, it) = J1_;
    M(is, is) = J2_;
    M(it, is) = k3_ * std::cos(at - as);
  }
  return M.selfadjointView<Eigen::Upper>();
}

Matrix7d PlanarBipedDynamics::mass_matrix(const Vector7d& q) const {
  return T_.transpose() * mass_matrix_abs(T_ * q) * T_;
}

Vector7d PlanarBipedDynamics::velocity_bias(const Vector7d& q,
                                            const Vector7d& v) const {
  const Vector7d qa = T_ * q;
  const Vector7d va = T_ * v;

  // In absolute angles every velocity product collapses to a centrifugal
  // term: the pitch row is identically zero and the translational rows see
  // each link's angular rate squared.
  Vector7d c = Vector7d::Zero();
  c[kX] = -kt_ * std::sin(qa[kPitch]) * va[kPitch] * va[kPitch];
  c[kZ] = -kt_ * std::cos(qa[kPitch]) * va[kPitch] * va[kPitch];
  for (int leg = 0; leg < 2; ++leg) {
    const int it = leg == 0 ? kAbsThighL : kAbsThighR;
    const int is = leg == 0 ? kAbsShinL : kAbsShinR;
    const double at = qa[it];
    const double as = qa[is];
    const double wt = va[it];
    const double ws = va[is];
    c[kX] += -k1_ * std::sin(at) * wt * wt - k2_ * std::sin(as) * ws * ws;
    c[kZ] += k1_ * std::cos(at) * wt * wt + k2_ * std::cos(as) * ws * ws;
    const double s = k3_ * std::sin(at - as);
    c[it] = s * ws * ws;
    c[is] = -s * wt * wt;
  }
  return T_.transpose() * c;
}

Vector7d PlanarBipedDynamics::gravity_forces(const Vector7d& q) const {
  const Vector7d qa = T_ * q;
  Vector7d g = Vector7d::Zero();
  g[kZ] = m_total_;
  g[kPitch] = -kt_ * std::sin(qa[kPitch]);
  g[kAbsThighL] = k1_ * std::sin(qa[kAbsThighL]);
  g[kAbsShinL] = k2_ * std::sin(qa[kAbsShinL]);
  g[kAbsThighR] = k1_ * std::sin(qa[kAbsThighR]);
  g[kAbsShinR] = k2_ * std::sin(qa[kAbsShinR]);
  return kGravity * (T_.transpose() * g);
}

Vector7d PlanarBipedDynamics::forward_dynamics(
    const Vector7d& q, const Vector7d& v,
    const Vector7d& generalized_force) const {
  const Vector7d rhs = generalized_force - velocity_bias(q, v) -
                       gravity_forces(q);
  return mass_matrix(q).ldlt().solve(rhs);
}

Vec2 PlanarBipedDynamics::foot_position(const Vector7d& q, Leg leg) const {
  double at, as;
  leg_angles(q, leg, at, as);
  return Vec2(q[kX], q[kZ]) + model_.thigh_length * leg_dir(at) +
         model_.shin_length * leg_dir(as);
}

Matrix2x7d PlanarBipedDynamics::foot_jacobian(const Vector7d& q,
                                              Leg leg) const {
  double at, as;
  leg_angles(q, leg, at, as);
  const Vec2 dthigh = model_.thigh_length * leg_dir_deriv(at);
  const Vec2 dshin = model_.shin_length * leg_dir_deriv(as);

  const int hip = leg == Leg::kLeft ? kHipL : kHipR;
  const int knee = leg == Leg::kLeft ? kKneeL : kKneeR;

  Matrix2x7d J = Matrix2x7d::Zero();
  J(0, kX) = 1.0;
  J(1, kZ) = 1.0;
  J.col(kPitch) = -(dthigh + dshin);
  J.col(hip) = dthigh + dshin;
  J.col(knee) = dshin;
  return J;
}

Vec2 PlanarBipedDynamics::foot_velocity(const Vector7d& q, const Vector7d& v,
                                        Leg leg) const {
  return foot_jacobian(q, leg) * v;
}

Vec2 PlanarBipedDynamics::torso_com_position(const Vector7d& q) const {
  const double th = q[kPitch];
  return Vec2(q[kX], q[kZ]) +
         model_.torso_com * Vec2(std::sin(th), std::cos(th));
}

Matrix2x7d PlanarBipedDynamics::torso_com_jacobian(const Vector7d& q) const {
  const double th = q[kPitch];
  Matrix2x7d J = Matrix2x7d::Zero();
  J(0, kX) = 1.0;
  J(1, kZ) = 1.0;
  J.col(kPitch) = model_.torso_com * Vec2(std::cos(th), -std::sin(th));
  return J;
}

Vec2 PlanarBipedDynamics::com_position(const Vector7d& q) const {
  const Vector7d qa = T_ * q;
  // First moments: m_total * com = m_total * hip + sum of lumped offsets.
  Vec2 moment = m_total_ * Vec2(q[kX], q[kZ]);
  moment += kt_ * Vec2(std::sin(qa[kPitch]), std::cos(qa[kPitch]));
  moment += k1_ * leg_dir(qa[kAbsThighL]) + k2_ * leg_dir(qa[kAbsShinL]);
  moment += k1_ * leg_dir(qa[kAbsThighR]) + k2_ * leg_dir(qa[kAbsShinR]);
  return moment / m_total_;
}

Vec2 PlanarBipedDynamics::linear_momentum(const Vector7d& q,
                                          const Vector7d& v) const {
  const Vector7d qa = T_ * q;
  const Vector7d va = T_ * v;
  Vec2 p = m_total_ * Vec2(v[kX], v[kZ]);
  p += kt_ * va[kPitch] *
       Vec2(std::cos(qa[kPitch]), -std::sin(qa[kPitch]));
  p += k1_ * va[kAbsThighL] * leg_dir_deriv(qa[kAbsThighL]);
  p += k2_ * va[kAbsShinL] * leg_dir_deriv(qa[kAbsShinL]);
  p += k1_ * va[kAbsThighR] * leg_dir_deriv(qa[kAbsThighR]);
  p += k2_ * va[kAbsShinR] * leg_dir_deriv(qa[kAbsShinR]);
  return p;
}

double PlanarBipedDynamics::kinetic_energy(const Vector7d& q,
                                           const Vector7d& v) const {
  return 0.5 * v.dot(mass_matrix(q) * v);
}

double PlanarBipedDynamics::potential_energy(const Vector7d& q) const {
  const Vector7d qa = T_ * q;
  return kGravity *
         (m_total_ * q[kZ] + kt_ * std::cos(qa[kPitch]) -
          k1_ * std::cos(qa[kAbsThighL]) - k2_ * std::cos(qa[kAbsShinL]) -
          k1_ * std::cos(qa[kAbsThighR]) - k2_ * std::cos(qa[kAbsShinR]));
}

}  // namespace slopewalk
