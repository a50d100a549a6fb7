#pragma once

#include <vector>

#include "orcadrl/geometry.hpp"
#include "orcadrl/norms.hpp"

namespace orcadrl {

/// Reward constants. Defaults are the reference values; all overridable via
/// run configuration.
struct RewardConfig {
  double b_mf = 3.0;       ///< progress coefficient
  double c_dir = 1.0;      ///< direction-term scale
  double d_col_s = -40.0;  ///< static-obstacle collision
  double e_col_d = -15.0;  ///< robot-robot collision
  double g_tim = -0.25;    ///< per-tick living penalty
  double m_goal = 80.0;    ///< arrival bonus
  double n_norm = -2.0;    ///< social-norm overlap penalty
  double q_goal = 0.12;    ///< arrival radius (m)
  NormTrigger norm_trigger = NormTrigger::kRegionOverlap;
};

struct RewardBreakdown {
  double mf = 0.0;
  double dir = 0.0;
  double col_s = 0.0;
  double col_d = 0.0;
  double tim = 0.0;
  double goal = 0.0;
  double norm = 0.0;
  double curiosity = 0.0;
  double total_ex = 0.0;  ///< sum of the seven external terms
  double total = 0.0;     ///< total_ex + curiosity
  bool dir_degenerate = false;
  bool collided_static = false;
  bool collided_dynamic = false;
  bool reached_goal = false;
};

/// Per-tick progress toward the goal: how much closer the agent got this
/// step. Summed over an episode it telescopes to total progress. Paying
/// cumulative-from-start progress every tick instead would make parking
/// beside the goal strictly dominate arriving.
double reward_mf(Vec2 p_prev, Vec2 p_now, Vec2 goal, double coeff = 3.0);

/// pi - 2*|angle between v and goal_vec|; 0 (flagged) on zero-norm input.
double reward_dir(Vec2 v, Vec2 goal_vec, bool* degenerate = nullptr);

/// Everything reward_step needs from the world snapshot of one tick.
struct RewardContext {
  Vec2 p_prev;
  Vec2 p_now;
  Vec2 velocity;
  Vec2 goal;
  double r_safe = 0.105;
  bool already_arrived = false;  ///< terms stop accruing once arrived
  Pose self_pose;
  const NormPolygon* norm_region = nullptr;
  std::vector<Pose> other_poses;
  std::vector<const NormPolygon*> other_regions;
  std::vector<Vec2> other_positions;
  std::vector<double> other_r_safe;
  const std::vector<Polygon>* obstacles = nullptr;
};

RewardBreakdown reward_step(const RewardContext& ctx,
                            const RewardConfig& cfg = {});

}  // namespace orcadrl
