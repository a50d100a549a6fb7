#pragma once

#include <optional>
#include <vector>

#include "orcadrl/geometry.hpp"

namespace orcadrl {

/// Truncated-cone velocity obstacle query for one agent pair.
struct VOQuery {
  Vec2 rel_position;      ///< p_j - p_i (m)
  Vec2 rel_opt_velocity;  ///< v_i_opt - v_j_opt (m/s)
  double combined_radius; ///< r_i + eps_i + r_j + eps_j (m)
  double tau;             ///< collision horizon (s)
};

/// Responsibility split between two agents. The half-plane shifts by
/// pr_j / (pr_i + pr_j) of the avoidance adjustment, so high-priority agents
/// deviate less.
struct PrioritySplit {
  double pr_i = 1.0;
  double pr_j = 1.0;
  double responsibility() const { return pr_j / (pr_i + pr_j); }
};

struct UAndN {
  Vec2 u;  ///< minimum adjustment from rel_opt_velocity to the VO boundary
  Vec2 n;  ///< outward boundary normal at the adjusted point
};

/// Per-tick constraint set for one agent. Agent-induced half-planes may be
/// relaxed when the set is infeasible; obstacle and kinematic half-planes
/// are hard.
struct OrcaConstraintSet {
  std::vector<HalfPlane> agent_planes;
  std::vector<HalfPlane> fixed_planes;
  double max_speed = 0.2;
};

/// Neighbor snapshot as observed by the constraint-assembling agent.
struct ObservedAgent {
  Vec2 position;
  Vec2 velocity;
  double r_safe = 0.105;
  double heading = 0.0;
  double priority = 1.0;
};

/// Inputs describing the agent assembling its own constraints.
struct AssemblyContext {
  Vec2 position;
  Vec2 v_opt;              ///< optimization velocity (v_rl or v_pref)
  Vec2 velocity;           ///< current velocity, used to pick obstacle cone facets
  double r_safe = 0.105;
  double priority = 1.0;
  double heading = 0.0;
  double max_speed = 0.2;
  double tracking_error = 0.0;  ///< non-holonomic margin added to radii
  bool forward_only = true;     ///< add the no-backward kinematic half-plane
  double tau = 5.0;
  double tau_obst = 2.5;
  double dt = 0.2;              ///< time step used by interpenetration recovery
};

/// True iff the candidate relative velocity enters the open disc
/// D(rel_position, combined_radius) at some t in (0, tau].
bool vo_contains(const VOQuery& q, Vec2 candidate_rel_velocity);

/// Closest-point escape vector and boundary normal for the truncated cone.
/// Requires |rel_position| > combined_radius.
UAndN compute_u_and_n(const VOQuery& q);

HalfPlane priority_halfplane(Vec2 v_opt_i, Vec2 u, Vec2 n,
                             const PrioritySplit& split);

/// One half-plane per neighbor (priority split) and per nearby obstacle edge
/// (full responsibility, horizon tau_obst). Neighbors are processed sorted by
/// distance ascending. Interpenetrating pairs use a one-time-step separation
/// constraint instead of the VO construction.
OrcaConstraintSet assemble_constraints(const AssemblyContext& ctx,
                                       const std::vector<ObservedAgent>& neighbors,
                                       const std::vector<Polygon>& obstacles);

/// Feasibility margin: most-violated constraint (agent + fixed + speed disc),
/// negative when v is outside the feasible region.
double feasibility_margin(const OrcaConstraintSet& c, Vec2 v);

/// Largest positive violation among the agent half-planes only.
double max_agent_violation(const OrcaConstraintSet& c, Vec2 v);

/// Incremental 2-D LP: closest point to v_preferred inside all half-planes
/// intersected with the speed disc. Empty optional when infeasible.
std::optional<Vec2> lp2(const OrcaConstraintSet& constraints, Vec2 v_preferred);

/// Minimax relaxation used when lp2 is infeasible: minimizes the largest
/// agent-half-plane violation over the speed disc, keeping fixed planes hard.
/// Among minimizers, returns the one closest to v_preferred.
Vec2 lp3(const OrcaConstraintSet& constraints, Vec2 v_preferred = {});

}  // namespace orcadrl
