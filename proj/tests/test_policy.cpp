#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "slopewalk/math_util.hpp"
#include "slopewalk/policy.hpp"

using namespace slopewalk;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("observation and action dimensions") {
  CHECK(observation_dim(PolicyMode::kReduced) == 3);
  CHECK(action_dim(PolicyMode::kReduced) == 3);
  CHECK(observation_dim(PolicyMode::kFull) == 8);
  CHECK(action_dim(PolicyMode::kFull) == 10);

  CHECK(observation_labels(PolicyMode::kReduced) ==
        std::vector<std::string>{"pitch", "pitch_rate", "support_pitch"});
  CHECK(observation_labels(PolicyMode::kFull).size() == 8);
  CHECK(action_labels(PolicyMode::kReduced).size() == 3);
  const auto full_actions = action_labels(PolicyMode::kFull);
  REQUIRE(full_actions.size() == 10);
  CHECK(full_actions[0] == "L.step_length");
  CHECK(full_actions[5] == "R.step_length");
  CHECK(full_actions[9] == "R.z_shift");
}

TEST_CASE("build_observation layouts") {
  const Eigen::VectorXd reduced =
      build_observation(0.1, -0.2, deg2rad(7.0), PolicyMode::kReduced);
  REQUIRE(reduced.size() == 3);
  CHECK(reduced(0) == 0.1);
  CHECK(reduced(1) == -0.2);
  CHECK(reduced(2) == doctest::Approx(deg2rad(7.0)).epsilon(1e-15));

  const Eigen::VectorXd full =
      build_observation(0.1, -0.2, 0.05, PolicyMode::kFull);
  REQUIRE(full.size() == 8);
  CHECK(full(0) == 0.0);  // roll
  CHECK(full(1) == 0.1);  // pitch
  CHECK(full(2) == 0.0);  // yaw
  CHECK(full(3) == 0.0);
  CHECK(full(4) == -0.2);
  CHECK(full(5) == 0.0);
  CHECK(full(6) == 0.0);  // support roll
  CHECK(full(7) == 0.05);
}

TEST_CASE("affine evaluation: zero matrix, linearity, mismatch") {
  SeedGains gains;
  AffinePolicy p = build_seed_policy(gains, PolicyMode::kReduced);
  p.M.setZero();

  const Eigen::VectorXd zero_state = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd out = p.evaluate(zero_state);
  CHECK(out(0) == doctest::Approx(gains.nominal_step));
  CHECK(out(1) == doctest::Approx(0.0).scale(1.0));
  CHECK(out(2) == doctest::Approx(0.0).scale(1.0));

  Rng rng(5);
  p.M = Eigen::MatrixXd::NullaryExpr(
      3, 3, [&rng](Eigen::Index, Eigen::Index) { return rng.normal(); });
  Eigen::VectorXd a(3), b(3);
  for (int i = 0; i < 3; ++i) {
    a(i) = rng.uniform(-1.0, 1.0);
    b(i) = rng.uniform(-1.0, 1.0);
  }
  const Eigen::VectorXd lhs = p.evaluate(a + b) - p.offset;
  const Eigen::VectorXd rhs =
      (p.evaluate(a) - p.offset) + (p.evaluate(b) - p.offset);
  CHECK((lhs - rhs).norm() < 1e-12);

  CHECK_THROWS_AS(p.evaluate(Eigen::VectorXd::Zero(8)),
                  std::invalid_argument);
}

TEST_CASE("action clipping") {
  Eigen::VectorXd lo, hi;
  default_clip_bounds(PolicyMode::kReduced, &lo, &hi);
  CHECK(lo(0) == -0.3);
  CHECK(hi(0) == 0.4);
  CHECK(lo(1) == -0.12);
  CHECK(hi(2) == 0.12);

  Eigen::VectorXd raw(3);
  raw << 1.0, -0.5, 0.05;
  const Eigen::VectorXd clipped = clip_action(raw, lo, hi);
  CHECK(clipped(0) == 0.4);
  CHECK(clipped(1) == -0.12);
  CHECK(clipped(2) == 0.05);

  // Idempotent.
  CHECK((clip_action(clipped, lo, hi) - clipped).norm() == 0.0);

  raw << -0.5, 0.0, 0.0;
  CHECK(clip_action(raw, lo, hi)(0) == -0.3);

  default_clip_bounds(PolicyMode::kFull, &lo, &hi);
  REQUIRE(lo.size() == 10);
  CHECK(lo(1) == -0.5);  // steering bound
  CHECK(hi(6) == 0.5);
  CHECK(hi(5) == 0.4);  // right-leg step length
}

TEST_CASE("expanding clipped actions to per-leg gait actions") {
  Eigen::VectorXd reduced(3);
  reduced << 0.2, 0.03, -0.04;
  const auto both = to_leg_actions(reduced, PolicyMode::kReduced, true);
  for (const GaitAction& a : both) {
    CHECK(a.step_length == 0.2);
    CHECK(a.shift_x == 0.03);
    CHECK(a.shift_z == -0.04);
    CHECK(a.steering == 0.0);
    CHECK(a.shift_y == 0.0);
  }

  Eigen::VectorXd full(10);
  full << 0.1, 0.2, 0.3, 0.4, 0.5, -0.1, -0.2, -0.3, -0.4, -0.5;
  const auto legs = to_leg_actions(full, PolicyMode::kFull, false);
  CHECK(legs[0].step_length == 0.1);
  CHECK(legs[0].steering == 0.2);
  CHECK(legs[0].shift_x == 0.3);
  CHECK(legs[0].shift_y == 0.4);
  CHECK(legs[0].shift_z == 0.5);
  CHECK(legs[1].step_length == -0.1);
  CHECK(legs[1].shift_z == -0.5);

  const auto planar = to_leg_actions(full, PolicyMode::kFull, true);
  CHECK(planar[0].steering == 0.0);
  CHECK(planar[0].shift_y == 0.0);
  CHECK(planar[1].steering == 0.0);
  CHECK(planar[0].step_length == 0.1);  // in-plane entries kept
}

TEST_CASE("seed policy parameter counts") {
  SeedGains gains;
  CHECK(build_seed_policy(gains, PolicyMode::kReduced).learnable_count() == 9);
  CHECK(build_seed_policy(gains, PolicyMode::kFull).learnable_count() == 80);
}

TEST_CASE("reduced seed policy reproduces the balance laws") {
  SeedGains gains;
  gains.pitch_setpoint = 0.05;  // nonzero setpoint exercises the offset
  const AffinePolicy p = build_seed_policy(gains, PolicyMode::kReduced);

  Rng rng(404);
  for (int i = 0; i < 100; ++i) {
    const double pitch = rng.uniform(-0.3, 0.3);
    const double pitch_rate = rng.uniform(-1.0, 1.0);
    const double alpha = rng.uniform(-0.25, 0.25);
    const Eigen::VectorXd out = p.evaluate(
        build_observation(pitch, pitch_rate, alpha, PolicyMode::kReduced));

    const double step = gains.nominal_step +
                        gains.k_step * (pitch - gains.pitch_setpoint) +
                        gains.k_step_rate * pitch_rate;
    const double xshift =
        gains.k_xshift * (pitch - gains.pitch_setpoint - alpha) +
        gains.k_xshift_rate * pitch_rate;
    const double zshift = gains.k_zshift * alpha;

    CHECK(out(0) == doctest::Approx(step).scale(1.0).epsilon(1e-12));
    CHECK(out(1) == doctest::Approx(xshift).scale(1.0).epsilon(1e-12));
    CHECK(out(2) == doctest::Approx(zshift).scale(1.0).epsilon(1e-12));
  }

  // Named special cases: zero state, pitch at setpoint, x-shift null point.
  const Eigen::VectorXd at_zero =
      p.evaluate(build_observation(0.0, 0.0, 0.0, PolicyMode::kReduced));
  CHECK(at_zero(0) == doctest::Approx(gains.nominal_step -
                                      gains.k_step * gains.pitch_setpoint));

  const Eigen::VectorXd at_setpoint = p.evaluate(build_observation(
      gains.pitch_setpoint, 0.0, 0.0, PolicyMode::kReduced));
  CHECK(at_setpoint(0) == doctest::Approx(gains.nominal_step).epsilon(1e-12));

  SeedGains plain;  // zero setpoint: pitch = alpha nulls the x-shift
  const AffinePolicy q = build_seed_policy(plain, PolicyMode::kReduced);
  const Eigen::VectorXd nulled =
      q.evaluate(build_observation(0.1, 0.0, 0.1, PolicyMode::kReduced));
  CHECK(nulled(1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("full seed policy reproduces the per-leg laws") {
  SeedGains gains;
  gains.k_steer = 0.25;
  gains.k_steer_rate = 0.02;
  gains.k_yshift = 0.35;
  gains.k_yshift_rate = 0.04;
  gains.pitch_setpoint = 0.03;
  gains.roll_setpoint = -0.02;
  gains.yaw_setpoint = 0.01;
  const AffinePolicy p = build_seed_policy(gains, PolicyMode::kFull);

  Rng rng(808);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd s(8);
    for (int k = 0; k < 8; ++k) {
      s(k) = rng.uniform(-0.4, 0.4);
    }
    const double roll = s(0), pitch = s(1), yaw = s(2);
    const double roll_rate = s(3), pitch_rate = s(4), yaw_rate = s(5);
    const double support_pitch = s(7);
    const Eigen::VectorXd out = p.evaluate(s);

    const double step = gains.nominal_step +
                        gains.k_step * (pitch - gains.pitch_setpoint) +
                        gains.k_step_rate * pitch_rate;
    const double steer = gains.k_steer * (yaw - gains.yaw_setpoint) +
                         gains.k_steer_rate * yaw_rate;
    const double xshift =
        gains.k_xshift * (pitch - gains.pitch_setpoint - support_pitch) +
        gains.k_xshift_rate * pitch_rate;
    const double yshift = gains.k_yshift * (roll - gains.roll_setpoint) +
                          gains.k_yshift_rate * roll_rate;
    const double zshift = gains.k_zshift * support_pitch;

    for (int leg = 0; leg < 2; ++leg) {
      const int base = 5 * leg;
      CHECK(out(base + 0) == doctest::Approx(step).scale(1.0).epsilon(1e-12));
      CHECK(out(base + 1) == doctest::Approx(steer).scale(1.0).epsilon(1e-12));
      CHECK(out(base + 2) ==
            doctest::Approx(xshift).scale(1.0).epsilon(1e-12));
      CHECK(out(base + 3) ==
            doctest::Approx(yshift).scale(1.0).epsilon(1e-12));
      CHECK(out(base + 4) ==
            doctest::Approx(zshift).scale(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("policy file round-trips bit-exactly") {
  SeedGains gains;
  AffinePolicy p = build_seed_policy(gains, PolicyMode::kReduced);
  Rng rng(17);
  p.M = Eigen::MatrixXd::NullaryExpr(3, 3, [&rng](Eigen::Index, Eigen::Index) {
    return rng.normal() * 0.123456789;
  });

  const std::string path = temp_path("slopewalk_policy_roundtrip.txt");
  save_policy(path, p);
  const AffinePolicy q = load_policy(path);
  CHECK(q.mode == p.mode);
  CHECK((q.M - p.M).cwiseAbs().maxCoeff() == 0.0);
  CHECK((q.offset - p.offset).cwiseAbs().maxCoeff() == 0.0);
  CHECK((q.clip_lo - p.clip_lo).cwiseAbs().maxCoeff() == 0.0);
  CHECK((q.clip_hi - p.clip_hi).cwiseAbs().maxCoeff() == 0.0);

  // Saving the loaded policy reproduces the file byte for byte.
  const std::string path2 = temp_path("slopewalk_policy_roundtrip2.txt");
  save_policy(path2, q);
  std::ifstream f1(path), f2(path2);
  const std::string c1((std::istreambuf_iterator<char>(f1)),
                       std::istreambuf_iterator<char>());
  const std::string c2((std::istreambuf_iterator<char>(f2)),
                       std::istreambuf_iterator<char>());
  CHECK(c1 == c2);
  CHECK(c1.rfind("slopewalk-policy v1\n", 0) == 0);

  std::filesystem::remove(path);
  std::filesystem::remove(path2);

  AffinePolicy full = build_seed_policy(gains, PolicyMode::kFull);
  const std::string path3 = temp_path("slopewalk_policy_full.txt");
  save_policy(path3, full);
  const AffinePolicy full2 = load_policy(path3);
  CHECK(full2.mode == PolicyMode::kFull);
  CHECK((full2.M - full.M).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path3);
}

TEST_CASE("policy file error handling") {
  CHECK_THROWS_AS(load_policy(temp_path("slopewalk_no_such_file.txt")),
                  std::runtime_error);

  const std::string bad = temp_path("slopewalk_policy_bad.txt");
  {
    std::ofstream out(bad);
    out << "definitely not a policy\n";
  }
  CHECK_THROWS_AS(load_policy(bad), std::runtime_error);

  {
    std::ofstream out(bad);
    out << "slopewalk-policy v1\nmode reduced\nobs_dim 3\nact_dim 3\nM\n";
    out << "1 2 3\n";  // truncated matrix
  }
  CHECK_THROWS_AS(load_policy(bad), std::runtime_error);

  {
    std::ofstream out(bad);
    // Dimensions inconsistent with the declared mode.
    out << "slopewalk-policy v1\nmode reduced\nobs_dim 8\nact_dim 10\n";
  }
  CHECK_THROWS_AS(load_policy(bad), std::runtime_error);
  std::filesystem::remove(bad);
}
