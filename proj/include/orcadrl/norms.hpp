#pragma once

#include <vector>

#include "orcadrl/geometry.hpp"

namespace orcadrl {

/// Body-frame social-norm penalty region. Asymmetric: wider on the right,
/// with a tail behind the right border, so overlap penalties push agents
/// toward pass-right / overtake-left behavior.
using NormPolygon = Polygon;

/// The six-vertex region from the reference design, CCW, anchored at the
/// agent center (meters, body frame, +x forward, +y left).
NormPolygon default_norm_polygon();

enum class NormTrigger {
  kRegionOverlap,  ///< penalty when the two regions overlap (default)
  kPointInRegion,  ///< penalty when the other agent's center is inside
};

/// -2 when any other agent triggers the penalty this tick, else 0. At most
/// one penalty per tick regardless of how many agents overlap.
double norm_reward(const Pose& self, const NormPolygon& self_region,
                   const std::vector<Pose>& others,
                   const std::vector<NormPolygon>& other_regions,
                   NormTrigger trigger = NormTrigger::kRegionOverlap);

enum class PassSide { kLeft, kRight, kNone };

/// Distance above which two trajectories count as non-interacting.
inline constexpr double kInteractionThreshold = 1.0;

/// Side classification at the tick of minimum pairwise distance. kRight
/// means the other agent passed on this agent's left, i.e. this agent kept
/// to the right. Unequal-length trajectories are truncated to the shorter.
PassSide classify_pass_side(const std::vector<Vec2>& traj_i,
                            const std::vector<Vec2>& traj_j);

/// Side on which the faster agent passed the slower one, evaluated at the
/// tick where their along-track order flips. kNone when the order never
/// flips or the agents are farther apart than the interaction threshold.
PassSide classify_overtake_side(const std::vector<Vec2>& traj_fast,
                                const std::vector<Vec2>& traj_slow);

}  // namespace orcadrl
