#include "orcadrl/rewards.hpp"

#include <algorithm>
#include <cmath>

namespace orcadrl {

double reward_mf(Vec2 p_prev, Vec2 p_now, Vec2 goal, double coeff) {
  return coeff * ((goal - p_prev).norm() - (goal - p_now).norm());
}

double reward_dir(Vec2 v, Vec2 goal_vec, bool* degenerate) {
  const double nv = v.norm();
  const double ng = goal_vec.norm();
  if (nv < 1e-12 || ng < 1e-12) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  const double c = std::clamp(dot(v, goal_vec) / (nv * ng), -1.0, 1.0);
  return M_PI - 2.0 * std::abs(std::acos(c));
}

RewardBreakdown reward_step(const RewardContext& ctx, const RewardConfig& cfg) {
  RewardBreakdown out;
  if (ctx.already_arrived) {
    return out;  // all terms zero after arrival
  }

  out.mf = reward_mf(ctx.p_prev, ctx.p_now, ctx.goal, cfg.b_mf);
  out.dir = cfg.c_dir *
            reward_dir(ctx.velocity, ctx.goal - ctx.p_now, &out.dir_degenerate);
  out.tim = cfg.g_tim;

  if (ctx.obstacles) {
    for (const Polygon& poly : *ctx.obstacles) {
      if (point_polygon_distance(ctx.p_now, poly) <= ctx.r_safe) {
        out.col_s = cfg.d_col_s;
        out.collided_static = true;
        break;
      }
    }
  }

  for (std::size_t k = 0; k < ctx.other_positions.size(); ++k) {
    if ((ctx.p_now - ctx.other_positions[k]).norm() <=
        ctx.r_safe + ctx.other_r_safe[k]) {
      out.col_d = cfg.e_col_d;
      out.collided_dynamic = true;
      break;
    }
  }

  if ((ctx.p_now - ctx.goal).norm() <= cfg.q_goal) {
    out.goal = cfg.m_goal;
    out.reached_goal = true;
  }

  if (ctx.norm_region && !ctx.other_poses.empty()) {
    std::vector<NormPolygon> regions;
    regions.reserve(ctx.other_regions.size());
    for (const NormPolygon* r : ctx.other_regions) regions.push_back(*r);
    out.norm = (cfg.n_norm / -2.0) *
               norm_reward(ctx.self_pose, *ctx.norm_region, ctx.other_poses,
                           regions, cfg.norm_trigger);
  }

  out.total_ex =
      out.mf + out.dir + out.col_s + out.col_d + out.tim + out.goal + out.norm;
  out.total = out.total_ex + out.curiosity;
  return out;
}

}  // namespace orcadrl
