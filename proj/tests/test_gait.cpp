#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "slopewalk/gait.hpp"
#include "slopewalk/math_util.hpp"

using namespace slopewalk;

TEST_CASE("gait config validation") {
  GaitConfig g;
  CHECK_NOTHROW(g.validate());
  SUBCASE("period must be positive") {
    g.period = 0.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
  SUBCASE("swing height below hip height") {
    g.swing_height = g.hip_height;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
  SUBCASE("swing height positive") {
    g.swing_height = 0.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
  SUBCASE("phase offset in [0,1)") {
    g.phase_offset = 1.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  }
}

TEST_CASE("phase advance wraps modulo the period") {
  GaitConfig g;
  g.period = 1.0;
  CHECK(phase_advance(0.0, 0.0, g) == 0.0);
  CHECK(phase_advance(0.9, 0.2, g) == doctest::Approx(0.1).epsilon(1e-12));
  g.period = 2.0;
  CHECK(phase_advance(0.25, 0.5, g) == doctest::Approx(0.5).epsilon(1e-12));

  // Result always lands in [0, 1), even across many wraps.
  g.period = 0.8;
  double phase = 0.0;
  for (int i = 0; i < 10000; ++i) {
    phase = phase_advance(phase, 0.001, g);
    CHECK(phase >= 0.0);
    CHECK(phase < 1.0);
  }
}

TEST_CASE("leg phases keep a constant offset") {
  GaitConfig g;
  g.phase_offset = 0.5;
  auto [l1, r1] = leg_phases(0.2, g);
  CHECK(l1 == doctest::Approx(0.2));
  CHECK(r1 == doctest::Approx(0.7));
  auto [l2, r2] = leg_phases(0.8, g);
  CHECK(l2 == doctest::Approx(0.8));
  CHECK(r2 == doctest::Approx(0.3).epsilon(1e-12));

  g.phase_offset = 0.0;
  auto [l3, r3] = leg_phases(0.37, g);
  CHECK(l3 == r3);
}

TEST_CASE("reference foot point hits the named waypoints") {
  GaitConfig g;
  g.hip_height = 0.7;
  g.swing_height = 0.1;

  const Vec3 start = reference_foot_point(0.0, 0.3, g);
  CHECK(start(0) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(start(1) == 0.0);
  CHECK(start(2) == doctest::Approx(-0.7).epsilon(1e-12));

  const Vec3 apex = reference_foot_point(0.75, 0.3, g);
  CHECK(apex(0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(apex(2) == doctest::Approx(-0.6).epsilon(1e-12));

  // Continuity at the stance -> swing switch.
  const Vec3 before = reference_foot_point(0.5 - 1e-12, 0.3, g);
  const Vec3 after = reference_foot_point(0.5, 0.3, g);
  CHECK((before - after).norm() < 1e-9);
  CHECK(after(2) == doctest::Approx(-0.7).epsilon(1e-12));
}

TEST_CASE("curve closure, stance flatness, apex bound, mirror") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    GaitConfig g;
    g.hip_height = rng.uniform(0.3, 1.0);
    g.swing_height = rng.uniform(0.01, 0.9) * g.hip_height;
    const double step = rng.uniform(-0.4, 0.4);

    const Vec3 end = reference_foot_point(1.0 - 1e-12, step, g);
    const Vec3 begin = reference_foot_point(0.0, step, g);
    CHECK((end - begin).norm() < 1e-9);

    for (int k = 0; k < 100; ++k) {
      const double stance_phase = 0.5 * static_cast<double>(k) / 100.0;
      CHECK(reference_foot_point(stance_phase, step, g)(2) == -g.hip_height);

      const double any_phase = static_cast<double>(k) / 100.0;
      const Vec3 p = reference_foot_point(any_phase, step, g);
      CHECK(p(2) >= -g.hip_height - 1e-12);
      CHECK(p(2) <= -g.hip_height + g.swing_height + 1e-12);

      const Vec3 mirrored = reference_foot_point(any_phase, -step, g);
      CHECK(mirrored(0) == doctest::Approx(-p(0)).scale(1.0).epsilon(1e-15));
      CHECK(mirrored(2) == p(2));
    }
  }
}

TEST_CASE("action transform examples") {
  GaitAction id;
  const Vec3 p(0.12, 0.0, -0.66);
  const FootTarget same = transform_foot_point(p, id);
  CHECK(same.x == doctest::Approx(0.12));
  CHECK(same.y == doctest::Approx(0.0).scale(1.0));
  CHECK(same.z == doctest::Approx(-0.66));

  GaitAction steer;
  steer.steering = kPi / 2.0;
  steer.shift_x = 0.02;
  const FootTarget t = transform_foot_point(Vec3(0.15, 0.0, -0.7), steer);
  CHECK(t.x == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(t.y == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(t.z == doctest::Approx(-0.7));
}

TEST_CASE("action transform matches an independent oracle") {
  Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    const Vec3 p(rng.uniform(-0.5, 0.5), 0.0, rng.uniform(-1.0, 0.0));
    GaitAction a;
    a.steering = rng.uniform(-1.0, 1.0);
    a.shift_x = rng.uniform(-0.2, 0.2);
    a.shift_y = rng.uniform(-0.2, 0.2);
    a.shift_z = rng.uniform(-0.2, 0.2);
    const FootTarget t = transform_foot_point(p, a);
    CHECK(t.x == doctest::Approx(a.shift_x + p(0) * std::cos(a.steering))
                     .scale(1.0)
                     .epsilon(1e-15));
    CHECK(t.y == doctest::Approx(a.shift_y + p(0) * std::sin(a.steering))
                     .scale(1.0)
                     .epsilon(1e-15));
    CHECK(t.z ==
          doctest::Approx(a.shift_z + p(2)).scale(1.0).epsilon(1e-15));
  }
}
