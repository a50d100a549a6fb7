#include "orcadrl/norms.hpp"

#include <algorithm>
#include <limits>

namespace orcadrl {

NormPolygon default_norm_polygon() {
  // z1..z6 key points; listed clockwise in the reference, reordered to CCW.
  NormPolygon poly{{
      {0.07, 0.126},
      {-0.14, 0.07},
      {-0.14, -0.07},
      {0.07, -0.182},
      {0.21, -0.07},
      {0.21, 0.07},
  }};
  poly.make_ccw();
  return poly;
}

double norm_reward(const Pose& self, const NormPolygon& self_region,
                   const std::vector<Pose>& others,
                   const std::vector<NormPolygon>& other_regions,
                   NormTrigger trigger) {
  for (std::size_t k = 0; k < others.size(); ++k) {
    bool hit = false;
    if (trigger == NormTrigger::kRegionOverlap) {
      hit = polygons_overlap(self_region, self, other_regions[k], others[k]);
    } else {
      hit = self_region.transformed(self).contains(others[k].position);
    }
    if (hit) return -2.0;
  }
  return 0.0;
}

namespace {

Vec2 motion_direction(const std::vector<Vec2>& traj, std::size_t t) {
  const std::size_t n = traj.size();
  const std::size_t hi = std::min(t + 1, n - 1);
  const std::size_t lo = t > 0 ? t - 1 : 0;
  Vec2 d = traj[hi] - traj[lo];
  if (d.norm_sq() < 1e-12) d = traj.back() - traj.front();
  return d;
}

}  // namespace

PassSide classify_pass_side(const std::vector<Vec2>& traj_i,
                            const std::vector<Vec2>& traj_j) {
  const std::size_t n = std::min(traj_i.size(), traj_j.size());
  if (n < 2) return PassSide::kNone;

  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double d = (traj_i[t] - traj_j[t]).norm();
    if (d < best_dist) {
      best_dist = d;
      best = t;
    }
  }
  if (best_dist > kInteractionThreshold) return PassSide::kNone;

  const Vec2 h = motion_direction(traj_i, best);
  const double cross = det(h, traj_j[best] - traj_i[best]);
  if (cross > 0.0) return PassSide::kRight;  // other on our left: we kept right
  if (cross < 0.0) return PassSide::kLeft;
  return PassSide::kNone;
}

PassSide classify_overtake_side(const std::vector<Vec2>& traj_fast,
                                const std::vector<Vec2>& traj_slow) {
  const std::size_t n = std::min(traj_fast.size(), traj_slow.size());
  if (n < 2) return PassSide::kNone;

  Vec2 axis = traj_slow.back() - traj_slow.front();
  if (axis.norm_sq() < 1e-12) axis = traj_fast.back() - traj_fast.front();
  if (axis.norm_sq() < 1e-12) return PassSide::kNone;
  axis = axis.normalized();

  for (std::size_t t = 1; t < n; ++t) {
    const double prev = dot(traj_fast[t - 1] - traj_slow[t - 1], axis);
    const double cur = dot(traj_fast[t] - traj_slow[t], axis);
    if (prev <= 0.0 && cur > 0.0) {
      if ((traj_fast[t] - traj_slow[t]).norm() > kInteractionThreshold) {
        return PassSide::kNone;
      }
      const double lateral = det(axis, traj_fast[t] - traj_slow[t]);
      if (lateral > 0.0) return PassSide::kLeft;
      if (lateral < 0.0) return PassSide::kRight;
      return PassSide::kNone;
    }
  }
  return PassSide::kNone;
}

}  // namespace orcadrl
