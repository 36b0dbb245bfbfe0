#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "slopewalk/dynamics.hpp"
#include "slopewalk/math_util.hpp"
#include "slopewalk/robot_model.hpp"

using namespace slopewalk;

namespace {

// First-principles description of one link, built from plain trigonometry
// only. Everything the dynamics object computes is checked against sums over
// these. Angle conventions: torso tilts by q[kPitch] from vertical; a leg
// segment's absolute angle from the downward vertical is (joint sum - pitch).
struct LinkState {
  Vec2 com = Vec2::Zero();
  Vec2 vel = Vec2::Zero();
  double omega = 0.0;
  double mass = 0.0;
  double inertia = 0.0;
};

std::vector<LinkState> link_states(const RobotModel& m, const Vector7d& q,
                                   const Vector7d& v) {
  const double x = q[kX], z = q[kZ], th = q[kPitch];
  const double vx = v[kX], vz = v[kZ], w = v[kPitch];
  std::vector<LinkState> links;

  LinkState torso;
  torso.mass = m.torso_mass;
  torso.inertia = m.torso_inertia;
  torso.com = Vec2(x + m.torso_com * std::sin(th),
                   z + m.torso_com * std::cos(th));
  torso.vel = Vec2(vx + m.torso_com * std::cos(th) * w,
                   vz - m.torso_com * std::sin(th) * w);
  torso.omega = w;
  links.push_back(torso);

  for (int leg = 0; leg < 2; ++leg) {
    const int hip_i = kHipL + 2 * leg;
    const int knee_i = kKneeL + 2 * leg;
    const double a = q[hip_i] - th;             // thigh absolute angle
    const double b = q[hip_i] + q[knee_i] - th; // shin absolute angle
    const double da = v[hip_i] - w;
    const double db = v[hip_i] + v[knee_i] - w;

    LinkState thigh;
    thigh.mass = m.thigh_mass;
    thigh.inertia = m.thigh_inertia;
    thigh.com = Vec2(x + m.thigh_com * std::sin(a),
                     z - m.thigh_com * std::cos(a));
    thigh.vel = Vec2(vx + m.thigh_com * std::cos(a) * da,
                     vz + m.thigh_com * std::sin(a) * da);
    thigh.omega = da;
    links.push_back(thigh);

    LinkState shin;
    shin.mass = m.shin_mass;
    shin.inertia = m.shin_inertia;
    shin.com = Vec2(
        x + m.thigh_length * std::sin(a) + m.shin_com * std::sin(b),
        z - m.thigh_length * std::cos(a) - m.shin_com * std::cos(b));
    shin.vel = Vec2(
        vx + m.thigh_length * std::cos(a) * da + m.shin_com * std::cos(b) * db,
        vz + m.thigh_length * std::sin(a) * da + m.shin_com * std::sin(b) * db);
    shin.omega = db;
    links.push_back(shin);
  }
  return links;
}

Vector7d random_q(Rng& rng) {
  Vector7d q;
  q[kX] = rng.uniform(-1.0, 1.0);
  q[kZ] = rng.uniform(0.5, 1.5);
  q[kPitch] = rng.uniform(-0.5, 0.5);
  q[kHipL] = rng.uniform(-1.0, 1.0);
  q[kKneeL] = rng.uniform(0.1, 2.0);
  q[kHipR] = rng.uniform(-1.0, 1.0);
  q[kKneeR] = rng.uniform(0.1, 2.0);
  return q;
}

Vector7d random_v(Rng& rng) {
  Vector7d v;
  for (int i = 0; i < kNumCoords; ++i) {
    v[i] = rng.uniform(-2.0, 2.0);
  }
  return v;
}

}  // namespace

TEST_CASE("mass matrix is symmetric positive definite") {
  const RobotModel m = RobotModel::rabbit();
  const PlanarBipedDynamics dyn(m);
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector7d q = random_q(rng);
    const Matrix7d M = dyn.mass_matrix(q);
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::SelfAdjointEigenSolver<Matrix7d> es(M);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    // Translation block: point-mass behaviour of the total mass.
    CHECK(M(kX, kX) == doctest::Approx(m.total_mass()).epsilon(1e-12));
    CHECK(M(kZ, kZ) == doctest::Approx(m.total_mass()).epsilon(1e-12));
    CHECK(M(kX, kZ) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("kinetic energy matches the per-link sum") {
  const RobotModel m = RobotModel::rabbit();
  const PlanarBipedDynamics dyn(m);
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector7d q = random_q(rng);
    const Vector7d v = random_v(rng);
    double expected = 0.0;
    for (const LinkState& link : link_states(m, q, v)) {
      expected += 0.5 * link.mass * link.vel.squaredNorm() +
                  0.5 * link.inertia * link.omega * link.omega;
    }
    CHECK(dyn.kinetic_energy(q, v) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("potential energy matches the per-link sum") {
  const RobotModel m = RobotModel::rabbit();
  const PlanarBipedDynamics dyn(m);
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector7d q = random_q(rng);
    double expected = 0.0;
    for (const LinkState& link : link_states(m, q, Vector7d::Zero())) {
      expected += link.mass * kGravity * link.com(1);
    }
    CHECK(dyn.potential_energy(q) ==
          doctest::Approx(expected).scale(100.0).epsilon(1e-11));
  }
}

TEST_CASE("gravity forces are the gradient of the potential") {
  const RobotModel m = RobotModel::rabbit();
  const PlanarBipedDynamics dyn(m);
  Rng rng(4);
  const double h = 1e-6;
  for (int trial = 0; trial < 30; ++trial) {
    const Vector7d q = random_q(rng);
    const Vector7d g = dyn.gravity_forces(q);
    for (int i = 0; i < kNumCoords; ++i) {
      Vector7d qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      const double fd =
          (dyn.potential_energy(qp) - dyn.potential_energy(qm)) / (2.0 * h);
      CHECK(g[i] == doctest::Approx(fd).scale(1.0).epsilon(1e-5));
    }
  }
}

TEST_CASE("velocity bias matches Christoffel symbols built from M alone") {
  const RobotModel m = RobotModel::rabbit();
  const PlanarBipedDynamics dyn(m);
  Rng rng(5);
  const double h = 1e-6;
  for (int trial = 0; trial < 15; ++trial) {
    const Vector7d q = random_q(rng);
    const Vector7d v = random_v(rng);

    // dM/dq_k by central differences; only mass_matrix is trusted here.
    std::vector<Matrix7d> dM(kNumCoords);
    for (int k = 0; k < kNumCoords; ++k) {
      Vector7d qp = q, qm = q;
      qp[k] += h;
      qm[k] -= h;
      dM[k] = (dyn.mass_matrix(qp) - dyn.mass_matrix(qm)) / (2.0 * h);
    }

    Vector7d expected = Vector7d::Zero();
    for (int i = 0; i < kNumCoords; ++i) {
      double ci = 0.0;
      for (int j = 0; j < kNumCoords; ++j) {
        for (int k = 0; k < kNumCoords; ++k) {
          const double gamma =
              0.5 * (dM[k](i, j) + dM[j](i, k) - dM[i](j, k));
          ci += gamma * v[j] * v[k];
        }
      }
      expected[i] = ci;
    }

    const Vector7d bias = dyn.velocity_bias(q, v);
    for (int i = 0; i < kNumCoords; ++i) {
      CHECK(bias[i] == doctest::Approx(expected[i]).scale(1.0).epsilon(1e-4));
    }
  }
}

TEST_CASE("forward dynamics solves the assembled equation of motion") {
  const RobotModel m = RobotModel::rabbit();
  const PlanarBipedDynamics dyn(m);
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const Vector7d q = random_q(rng);
    const Vector7d v = random_v(rng);
    Vector7d Q;
    for (int i = 0; i < kNumCoords; ++i) {
      Q[i] = rng.uniform(-50.0, 50.0);
    }
    const Vector7d a = dyn.forward_dynamics(q, v, Q);
    const Vector7d residual = dyn.mass_matrix(q) * a +
                              dyn.velocity_bias(q, v) +
                              dyn.gravity_forces(q) - Q;
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("foot position, velocity, and jacobian") {
  const RobotModel m = RobotModel::rabbit();
  const PlanarBipedDynamics dyn(m);
  Rng rng(7);
  const double h = 1e-6;
  for (int trial = 0; trial < 30; ++trial) {
    const Vector7d q = random_q(rng);
    const Vector7d v = random_v(rng);
    for (const Leg leg : {Leg::kLeft, Leg::kRight}) {
      // World position: hip plus the leg-frame FK rotated by the pitch.
      const int hip_i = leg == Leg::kLeft ? kHipL : kHipR;
      const int knee_i = leg == Leg::kLeft ? kKneeL : kKneeR;
      const Vec2 local = forward_kinematics(q[hip_i], q[knee_i], m);
      const double c = std::cos(q[kPitch]);
      const double s = std::sin(q[kPitch]);
      const Vec2 world(q[kX] + c * local(0) + s * local(1),
                       q[kZ] - s * local(0) + c * local(1));
      const Vec2 p = dyn.foot_position(q, leg);
      CHECK((p - world).norm() < 1e-12);

      const Matrix2x7d J = dyn.foot_jacobian(q, leg);
      for (int i = 0; i < kNumCoords; ++i) {
        Vector7d qp = q, qm = q;
        qp[i] += h;
        qm[i] -= h;
        const Vec2 fd =
            (dyn.foot_position(qp, leg) - dyn.foot_position(qm, leg)) /
            (2.0 * h);
        CHECK((J.col(i) - fd).norm() < 1e-8);
      }

      const Vec2 vel = dyn.foot_velocity(q, v, leg);
      CHECK((vel - J * v).norm() < 1e-12);
    }
  }
}

TEST_CASE("torso COM position and jacobian") {
  const RobotModel m = RobotModel::rabbit();
  const PlanarBipedDynamics dyn(m);
  Rng rng(8);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const Vector7d q = random_q(rng);
    const Vec2 expected(q[kX] + m.torso_com * std::sin(q[kPitch]),
                        q[kZ] + m.torso_com * std::cos(q[kPitch]));
    CHECK((dyn.torso_com_position(q) - expected).norm() < 1e-12);

    const Matrix2x7d J = dyn.torso_com_jacobian(q);
    for (int i = 0; i < kNumCoords; ++i) {
      Vector7d qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      const Vec2 fd =
          (dyn.torso_com_position(qp) - dyn.torso_com_position(qm)) /
          (2.0 * h);
      CHECK((J.col(i) - fd).norm() < 1e-8);
    }
  }
}

TEST_CASE("COM position and linear momentum match the per-link sums") {
  const RobotModel m = RobotModel::rabbit();
  const PlanarBipedDynamics dyn(m);
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector7d q = random_q(rng);
    const Vector7d v = random_v(rng);

    Vec2 com = Vec2::Zero();
    Vec2 momentum = Vec2::Zero();
    for (const LinkState& link : link_states(m, q, v)) {
      com += link.mass * link.com;
      momentum += link.mass * link.vel;
    }
    com /= m.total_mass();

    CHECK((dyn.com_position(q) - com).norm() < 1e-12);
    CHECK((dyn.linear_momentum(q, v) - momentum).norm() < 1e-10);
    // Momentum is also the translation rows of M v.
    const Vector7d Mv = dyn.mass_matrix(q) * v;
    CHECK(dyn.linear_momentum(q, v)(0) == doctest::Approx(Mv[kX]));
    CHECK(dyn.linear_momentum(q, v)(1) == doctest::Approx(Mv[kZ]));
  }
}

TEST_CASE("passive flight conserves energy and horizontal momentum") {
  const RobotModel m = RobotModel::rabbit();
  const PlanarBipedDynamics dyn(m);

  Vector7d q;
  q << 0.0, 5.0, 0.1, 0.2, 0.5, -0.1, 0.8;
  Vector7d v;
  v << 0.5, 1.0, 0.3, 0.2, -0.1, 0.1, 0.2;

  const double e0 = dyn.kinetic_energy(q, v) + dyn.potential_energy(q);
  const double px0 = dyn.linear_momentum(q, v)(0);
  const double dt = 5e-4;
  for (int step = 0; step < 2000; ++step) {  // 1 s of free flight
    const Vector7d a = dyn.forward_dynamics(q, v, Vector7d::Zero());
    v += dt * a;
    q += dt * v;
  }
  const double e1 = dyn.kinetic_energy(q, v) + dyn.potential_energy(q);
  const double px1 = dyn.linear_momentum(q, v)(0);

  CHECK(std::abs(e1 - e0) < 0.005 * std::abs(e0));
  CHECK(std::abs(px1 - px0) < 0.005 * m.total_mass());  // vs ~1 m/s scale

  // Vertical momentum follows gravity: dp_z = -m g t.
  const double pz1 = dyn.linear_momentum(q, v)(1);
  const double pz0 = m.total_mass() * 1.0;
  CHECK(pz1 - pz0 ==
        doctest::Approx(-m.total_mass() * kGravity * 1.0).epsilon(0.01));
}
