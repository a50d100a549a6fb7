#include <cmath>

#include "doctest.h"
#include "orcadrl/geometry.hpp"
#include "orcadrl/rng.hpp"

using namespace orcadrl;

namespace {

Polygon unit_square_at(Vec2 center) {
  return make_rect(center - Vec2{0.5, 0.5}, center + Vec2{0.5, 0.5});
}

// Dense point-sampling overlap oracle: sample the first polygon's interior
// on a grid and test containment in the second.
bool overlap_oracle(const Polygon& p, const Pose& pa, const Polygon& q,
                    const Pose& qb, int grid = 200) {
  const Polygon pw = p.transformed(pa);
  const Polygon qw = q.transformed(qb);
  double lo_x = 1e9, lo_y = 1e9, hi_x = -1e9, hi_y = -1e9;
  for (Vec2 v : pw.vertices) {
    lo_x = std::min(lo_x, v.x);
    hi_x = std::max(hi_x, v.x);
    lo_y = std::min(lo_y, v.y);
    hi_y = std::max(hi_y, v.y);
  }
  for (int i = 1; i < grid; ++i) {
    for (int j = 1; j < grid; ++j) {
      const Vec2 s{lo_x + (hi_x - lo_x) * i / grid,
                   lo_y + (hi_y - lo_y) * j / grid};
      if (pw.contains(s) && qw.contains(s)) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("ray_cast axis-aligned hit") {
  const Polygon sq = make_rect({1.0, -1.0}, {2.0, 1.0});
  CHECK(ray_cast({0, 0}, {1, 0}, {sq}, 10.0) == doctest::Approx(1.0));
}

TEST_CASE("ray_cast miss returns max_range") {
  CHECK(ray_cast({0, 0}, {0, 1}, {}, 3.0) == doctest::Approx(3.0));
}

TEST_CASE("ray_cast diagonal hit matches analytic distance") {
  const Polygon sq{{{2, 0}, {3, 0}, {3, 3}, {2, 3}}};
  const Vec2 dir = Vec2{1, 1}.normalized();
  // Analytic segment-intersection oracle: the ray r(t) = t*(1,1)/sqrt(2)
  // meets the left edge x = 2 at t = 2*sqrt(2).
  CHECK(ray_cast({0, 0}, dir, {sq}, 10.0) ==
        doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("ray_cast range and monotonicity properties") {
  Rng rng(11);
  for (int it = 0; it < 200; ++it) {
    std::vector<Polygon> obstacles;
    const int n = rng.uniform_int(1, 4);
    for (int k = 0; k < n; ++k) {
      const Vec2 c{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      obstacles.push_back(
          make_rect(c, c + Vec2{rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5)}));
    }
    const Vec2 dir = unit_from_angle(rng.uniform(0, 2 * M_PI));
    const double full = ray_cast({0, 0}, dir, obstacles, 5.0);
    CHECK(full >= 0.0);
    CHECK(full <= 5.0);
    // Removing an obstacle never decreases the distance.
    std::vector<Polygon> fewer(obstacles.begin() + 1, obstacles.end());
    CHECK(ray_cast({0, 0}, dir, fewer, 5.0) >= full - 1e-12);
  }
}

TEST_CASE("polygons_overlap trivial cases") {
  const Polygon sq = unit_square_at({0, 0});
  CHECK(polygons_overlap(sq, {}, sq, {}));
  CHECK_FALSE(polygons_overlap(sq, {{0, 0}, 0}, sq, {{10, 0}, 0}));
  CHECK(polygons_overlap(sq, {{0, 0}, 0}, sq, {{0.9, 0}, 0}));
}

TEST_CASE("polygons_overlap shared boundary is not overlap") {
  const Polygon sq = unit_square_at({0, 0});
  CHECK_FALSE(polygons_overlap(sq, {{0, 0}, 0}, sq, {{1.0, 0}, 0}));
}

TEST_CASE("polygons_overlap non-convex and symmetry vs sampling oracle") {
  // A U-shaped pocket: overlap tests go through convex decomposition.
  const Polygon pocket{{{0, 0},
                        {1.0, 0},
                        {1.0, 1.0},
                        {0.8, 1.0},
                        {0.8, 0.2},
                        {0.2, 0.2},
                        {0.2, 1.0},
                        {0, 1.0}}};
  const Polygon sq = unit_square_at({0, 0});
  Rng rng(5);
  int agreements = 0;
  for (int it = 0; it < 60; ++it) {
    const Pose pose_q{{rng.uniform(-1.5, 2.5), rng.uniform(-1.5, 2.5)},
                      rng.uniform(0, 2 * M_PI)};
    const bool got = polygons_overlap(pocket, {}, sq, pose_q);
    CHECK(got == polygons_overlap(sq, pose_q, pocket, {}));  // symmetry
    const bool oracle = overlap_oracle(pocket, {}, sq, pose_q);
    // The sampling oracle misses slivers; require agreement whenever it
    // reports an overlap, and spot-check clear negatives.
    if (oracle) CHECK(got);
    if (got == oracle) ++agreements;
  }
  CHECK(agreements >= 55);
}

TEST_CASE("point_to_halfplane_distance") {
  const HalfPlane h{{0, 0}, {1, 0}};
  CHECK(point_to_halfplane_distance({0, 0.3}, h) == doctest::Approx(0.0));
  CHECK(point_to_halfplane_distance({0.5, 0}, h) == doctest::Approx(0.5));
  CHECK(point_to_halfplane_distance({-0.2, 1.0}, h) == doctest::Approx(-0.2));
}

TEST_CASE("point_to_halfplane_distance matches grid-search oracle") {
  Rng rng(17);
  for (int it = 0; it < 50; ++it) {
    const HalfPlane h{{rng.uniform(-1, 1), rng.uniform(-1, 1)},
                      unit_from_angle(rng.uniform(0, 2 * M_PI))};
    const Vec2 v{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double d = point_to_halfplane_distance(v, h);
    // Grid-search the boundary line for the closest point.
    double best = 1e18;
    for (int i = -4000; i <= 4000; ++i) {
      const Vec2 b = h.point + (i * 0.002) * h.normal.perp();
      best = std::min(best, (v - b).norm());
    }
    CHECK(std::abs(d) == doctest::Approx(best).epsilon(1e-3));
    CHECK((d >= 0.0) == (dot(v - h.point, h.normal) >= 0.0));
  }
}

TEST_CASE("convex_decompose rejects degenerate polygons") {
  const Polygon flat{{{0, 0}, {1, 0}, {2, 0}}};
  CHECK(convex_decompose(flat).empty());
}

TEST_CASE("convex_decompose covers the polygon area") {
  const Polygon pocket{
      {{0, 0}, {1, 0}, {1, 1}, {0.8, 1}, {0.8, 0.2}, {0.2, 0.2}, {0.2, 1}, {0, 1}}};
  const auto parts = convex_decompose(pocket);
  double total = 0.0;
  for (const Polygon& p : parts) total += p.signed_area();
  Polygon ccw = pocket;
  ccw.make_ccw();
  CHECK(total == doctest::Approx(ccw.signed_area()).epsilon(1e-9));
}
