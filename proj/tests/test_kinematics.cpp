#include <cmath>

#include "doctest.h"
#include "orcadrl/kinematics.hpp"
#include "orcadrl/rng.hpp"

using namespace orcadrl;

TEST_CASE("track_holonomic aligned target moves straight") {
  const ActionBounds b{};
  DiffDriveState s;
  s.heading = 0.0;
  const auto [v, w] = track_holonomic(s, {0.15, 0.0}, b);
  CHECK(v == doctest::Approx(0.15));
  CHECK(w == doctest::Approx(0.0));
}

TEST_CASE("track_holonomic clamps to action bounds") {
  const ActionBounds b{};
  DiffDriveState s;
  s.heading = 0.0;
  SUBCASE("fast target clamps speed") {
    const auto [v, w] = track_holonomic(s, {0.5, 0.0}, b);
    CHECK(v == doctest::Approx(b.v_max));
  }
  SUBCASE("large heading error saturates turn rate") {
    const auto [v, w] = track_holonomic(s, {-0.1, 0.05}, b);
    CHECK(w == doctest::Approx(b.w_max));
  }
  SUBCASE("behind target keeps forward speed at v_min not negative") {
    const auto [v, w] = track_holonomic(s, {-0.1, 0.0}, b);
    CHECK(v >= b.v_min);
  }
  SUBCASE("zero target stops") {
    const auto [v, w] = track_holonomic(s, {0.0, 0.0}, b);
    CHECK(v == 0.0);
    CHECK(w == 0.0);
  }
}

TEST_CASE("track_holonomic speed scales with cos of heading error") {
  const ActionBounds b{};
  DiffDriveState s;
  s.heading = 0.0;
  const double ang = 1.0;  // below the saturation error of w_max/gain > 0.6
  const auto [v, w] = track_holonomic(s, 0.2 * unit_from_angle(ang), b);
  CHECK(v == doctest::Approx(std::max(b.v_min, 0.2 * std::cos(ang))));
  CHECK(w == doctest::Approx(std::min(b.w_max, kHeadingGain * ang)));
}

TEST_CASE("integrate straight segment") {
  DiffDriveState s;
  s.position = {1.0, 2.0};
  s.heading = M_PI / 2.0;
  const DiffDriveState n = integrate(s, {0.1, 0.0}, 0.2);
  CHECK(n.position.x == doctest::Approx(1.0));
  CHECK(n.position.y == doctest::Approx(2.02));
  CHECK(n.heading == doctest::Approx(M_PI / 2.0));
}

TEST_CASE("integrate exact arc matches dense Euler oracle") {
  Rng rng(5);
  for (int it = 0; it < 50; ++it) {
    DiffDriveState s;
    s.position = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    s.heading = rng.uniform(-M_PI, M_PI);
    const double v = rng.uniform(0.01, 0.2);
    const double w = rng.uniform(-2.5, 2.5);
    const double dt = 0.2;
    const DiffDriveState n = integrate(s, {v, w}, dt);

    // Dense Euler integration as the oracle.
    Vec2 p = s.position;
    double psi = s.heading;
    const int steps = 20000;
    const double h = dt / steps;
    for (int k = 0; k < steps; ++k) {
      p = p + h * v * unit_from_angle(psi);
      psi += h * w;
    }
    CHECK(n.position.x == doctest::Approx(p.x).epsilon(1e-6));
    CHECK(n.position.y == doctest::Approx(p.y).epsilon(1e-6));
    CHECK(wrap_angle(n.heading - psi) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("tracked endpoint stays within the tracking error bound") {
  const ActionBounds b{};
  const double dt = 0.2;
  const double bound = tracking_error_bound(b.v_max, dt);
  Rng rng(11);
  for (int it = 0; it < 500; ++it) {
    DiffDriveState s;
    s.heading = rng.uniform(-M_PI, M_PI);
    const Vec2 v_h = rng.uniform(0.0, b.v_max) *
                     unit_from_angle(rng.uniform(-M_PI, M_PI));
    const Command cmd = track_holonomic(s, v_h, b);
    const DiffDriveState n = integrate(s, cmd, dt);
    const Vec2 ideal = s.position + dt * v_h;
    CHECK((n.position - ideal).norm() <= bound + 1e-12);
  }
}
