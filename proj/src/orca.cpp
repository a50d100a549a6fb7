#include "orcadrl/orca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orcadrl {

namespace {

// Width below which a 1-D feasible interval counts as empty.
constexpr double kLpEps = 1e-9;

}  // namespace

bool vo_contains(const VOQuery& q, Vec2 v) {
  const double speed_sq = v.norm_sq();
  if (speed_sq < kGeomEps * kGeomEps) return false;
  // Closest approach of the ray {t*v : t in [0, tau]} to rel_position.
  const double t = std::clamp(dot(q.rel_position, v) / speed_sq, 0.0, q.tau);
  if (t <= 0.0) return false;
  return (t * v - q.rel_position).norm() < q.combined_radius;
}

UAndN compute_u_and_n(const VOQuery& q) {
  const Vec2 rel_p = q.rel_position;
  const Vec2 rel_v = q.rel_opt_velocity;
  const double r = q.combined_radius;
  const double dist_sq = rel_p.norm_sq();
  const double r_sq = r * r;

  const Vec2 w = rel_v - rel_p / q.tau;
  const double w_len_sq = w.norm_sq();
  const double dot_wp = dot(w, rel_p);

  if (dot_wp < 0.0 && dot_wp * dot_wp > r_sq * w_len_sq) {
    // Closest point lies on the cutoff disc of radius r/tau.
    const double w_len = std::sqrt(w_len_sq);
    const Vec2 unit_w = w_len > 0.0 ? w / w_len : (-rel_p).normalized();
    return {.u = (r / q.tau - w_len) * unit_w, .n = unit_w};
  }

  // Closest point lies on one of the tangent legs.
  const double leg = std::sqrt(std::max(dist_sq - r_sq, 0.0));
  Vec2 dir;
  if (det(rel_p, w) > 0.0) {
    dir = Vec2{rel_p.x * leg - rel_p.y * r, rel_p.x * r + rel_p.y * leg} /
          dist_sq;
  } else {
    dir = -Vec2{rel_p.x * leg + rel_p.y * r, -rel_p.x * r + rel_p.y * leg} /
          dist_sq;
  }
  const double along = dot(rel_v, dir);
  const Vec2 u = along * dir - rel_v;
  return {.u = u, .n = Vec2{-dir.y, dir.x}};
}

HalfPlane priority_halfplane(Vec2 v_opt_i, Vec2 u, Vec2 n,
                             const PrioritySplit& split) {
  return {.point = v_opt_i + split.responsibility() * u, .normal = n};
}

namespace {

HalfPlane recovery_halfplane(Vec2 v_opt_i, Vec2 rel_v, Vec2 rel_p, double r,
                             double dist, double dt, double responsibility,
                             double heading) {
  Vec2 n = dist > kGeomEps ? (-rel_p).normalized()
                           : unit_from_angle(heading + M_PI);
  // Separate to radius r within one time step.
  const double required = (r - dist) / dt;
  const Vec2 u = (required - dot(rel_v, n)) * n;
  return {.point = v_opt_i + responsibility * u, .normal = n};
}

// Obstacle constraint line in (point, direction) form; the feasible side is
// the left of the directed line. Kept in this form while building because the
// redundancy test between edges is a left-of test against earlier lines.
struct ObstacleLine {
  Vec2 point;
  Vec2 direction;
};

// Builds the velocity-obstacle boundary lines induced by the polygon edges
// within reach of the agent. Each edge contributes at most one line: the
// facet of its truncated cone (cutoff arc, cutoff segment, or a tangent leg)
// closest to the agent's current velocity. Legs that belong to a neighboring
// edge's cone are skipped so that edge can claim them instead.
void append_obstacle_lines(const AssemblyContext& ctx, const Polygon& poly,
                           std::vector<ObstacleLine>* lines) {
  const auto& vs = poly.vertices;
  const int n = static_cast<int>(vs.size());
  if (n < 3) return;

  const double radius = ctx.r_safe + ctx.tracking_error;
  const double radius_sq = radius * radius;
  const double inv_tau = 1.0 / ctx.tau_obst;
  const double reach = radius + ctx.max_speed * ctx.tau_obst;
  const Vec2 pos = ctx.position;
  const Vec2 vel = ctx.velocity;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Unit direction of edge i (from vertex i to vertex i+1); vertices are CCW
  // so a vertex is convex when the boundary turns left there.
  const auto edge_dir = [&](int i) {
    return (vs[(i + 1) % n] - vs[i]).normalized();
  };
  const auto is_convex = [&](int i) {
    const Vec2 a = vs[(i + n - 1) % n];
    const Vec2 b = vs[i];
    const Vec2 c = vs[(i + 1) % n];
    return det(b - a, c - b) >= 0.0;
  };

  for (int e = 0; e < n; ++e) {
    const int i1 = e;
    const int i2 = (e + 1) % n;
    if (point_segment_distance(pos, {vs[i1], vs[i2]}) > reach) continue;

    const Vec2 rp1 = vs[i1] - pos;
    const Vec2 rp2 = vs[i2] - pos;

    // Only edges whose exterior faces the agent constrain it; back edges
    // are occluded by the obstacle body and their cones point the wrong
    // way (vertices are CCW, so exterior is the right side of the edge).
    if (det(vs[i2] - vs[i1], pos - vs[i1]) >= 0.0) continue;

    // Skip the edge when its scaled cone already lies inside the infeasible
    // side of a line contributed by a previously processed edge.
    bool covered = false;
    for (const ObstacleLine& l : *lines) {
      if (det(inv_tau * rp1 - l.point, l.direction) - inv_tau * radius >=
              -kGeomEps &&
          det(inv_tau * rp2 - l.point, l.direction) - inv_tau * radius >=
              -kGeomEps) {
        covered = true;
        break;
      }
    }
    if (covered) continue;

    const double dist_sq1 = rp1.norm_sq();
    const double dist_sq2 = rp2.norm_sq();
    const Vec2 obst_vec = vs[i2] - vs[i1];
    const double s = dot(-rp1, obst_vec) / obst_vec.norm_sq();
    const double dist_sq_line = (-rp1 - s * obst_vec).norm_sq();

    if (s < 0.0 && dist_sq1 <= radius_sq) {
      // Colliding with the left vertex: constrain to move away from it.
      if (is_convex(i1)) {
        lines->push_back(
            {{0.0, 0.0}, Vec2{-rp1.y, rp1.x}.normalized()});
      }
      continue;
    }
    if (s > 1.0 && dist_sq2 <= radius_sq) {
      // Colliding with the right vertex; the neighboring edge handles it
      // unless the agent is on the outside of that edge.
      if (is_convex(i2) && det(rp2, edge_dir(i2)) >= 0.0) {
        lines->push_back(
            {{0.0, 0.0}, Vec2{-rp2.y, rp2.x}.normalized()});
      }
      continue;
    }
    if (s >= 0.0 && s <= 1.0 && dist_sq_line <= radius_sq) {
      // Colliding with the edge interior.
      lines->push_back({{0.0, 0.0}, -edge_dir(i1)});
      continue;
    }

    Vec2 left_dir;
    Vec2 right_dir;
    int v_left = i1;
    int v_right = i2;
    bool oblique_vertex = false;  // cone emanates from a single vertex

    if (s < 0.0 && dist_sq_line <= radius_sq) {
      // The edge is obliquely viewed past its left vertex; the cone collapses
      // onto that vertex.
      if (!is_convex(i1)) continue;
      oblique_vertex = true;
      v_right = i1;
      const double leg1 = std::sqrt(dist_sq1 - radius_sq);
      left_dir = Vec2{rp1.x * leg1 - rp1.y * radius,
                      rp1.x * radius + rp1.y * leg1} /
                 dist_sq1;
      right_dir = Vec2{rp1.x * leg1 + rp1.y * radius,
                       -rp1.x * radius + rp1.y * leg1} /
                  dist_sq1;
    } else if (s > 1.0 && dist_sq_line <= radius_sq) {
      if (!is_convex(i2)) continue;
      oblique_vertex = true;
      v_left = i2;
      const double leg2 = std::sqrt(dist_sq2 - radius_sq);
      left_dir = Vec2{rp2.x * leg2 - rp2.y * radius,
                      rp2.x * radius + rp2.y * leg2} /
                 dist_sq2;
      right_dir = Vec2{rp2.x * leg2 + rp2.y * radius,
                       -rp2.x * radius + rp2.y * leg2} /
                  dist_sq2;
    } else {
      if (is_convex(i1)) {
        const double leg1 = std::sqrt(dist_sq1 - radius_sq);
        left_dir = Vec2{rp1.x * leg1 - rp1.y * radius,
                        rp1.x * radius + rp1.y * leg1} /
                   dist_sq1;
      } else {
        // Non-convex left vertex: the leg degenerates to the edge line.
        left_dir = -edge_dir(i1);
      }
      if (is_convex(i2)) {
        const double leg2 = std::sqrt(dist_sq2 - radius_sq);
        right_dir = Vec2{rp2.x * leg2 + rp2.y * radius,
                         -rp2.x * radius + rp2.y * leg2} /
                    dist_sq2;
      } else {
        right_dir = edge_dir(i1);
      }
    }

    // A leg that crosses into the neighboring edge's cone belongs to that
    // edge; replace it by the neighbor's edge line and never emit it here.
    bool left_foreign = false;
    bool right_foreign = false;
    const int prev = (v_left + n - 1) % n;
    if (is_convex(v_left) && det(left_dir, -edge_dir(prev)) >= 0.0) {
      left_dir = -edge_dir(prev);
      left_foreign = true;
    }
    if (is_convex(v_right) && det(right_dir, edge_dir(v_right)) <= 0.0) {
      right_dir = edge_dir(v_right);
      right_foreign = true;
    }

    const Vec2 left_cutoff = inv_tau * (vs[v_left] - pos);
    const Vec2 right_cutoff = inv_tau * (vs[v_right] - pos);
    const Vec2 cutoff_vec = right_cutoff - left_cutoff;

    // Project the current velocity onto the nearest cone facet.
    const double t =
        oblique_vertex
            ? 0.5
            : dot(vel - left_cutoff, cutoff_vec) / cutoff_vec.norm_sq();
    const double t_left = dot(vel - left_cutoff, left_dir);
    const double t_right = dot(vel - right_cutoff, right_dir);

    if ((t < 0.0 && t_left < 0.0) ||
        (oblique_vertex && t_left < 0.0 && t_right < 0.0)) {
      // Closest to the left cutoff circle.
      const Vec2 unit_w = (vel - left_cutoff).normalized();
      lines->push_back({left_cutoff + radius * inv_tau * unit_w,
                        Vec2{unit_w.y, -unit_w.x}});
      continue;
    }
    if (t > 1.0 && t_right < 0.0) {
      const Vec2 unit_w = (vel - right_cutoff).normalized();
      lines->push_back({right_cutoff + radius * inv_tau * unit_w,
                        Vec2{unit_w.y, -unit_w.x}});
      continue;
    }

    const double d_cutoff =
        (t < 0.0 || t > 1.0 || oblique_vertex)
            ? kInf
            : (vel - (left_cutoff + t * cutoff_vec)).norm_sq();
    const double d_left =
        t_left < 0.0 ? kInf
                     : (vel - (left_cutoff + t_left * left_dir)).norm_sq();
    const double d_right =
        t_right < 0.0 ? kInf
                      : (vel - (right_cutoff + t_right * right_dir)).norm_sq();

    if (d_cutoff <= d_left && d_cutoff <= d_right) {
      const Vec2 dir = -edge_dir(i1);
      lines->push_back(
          {left_cutoff + radius * inv_tau * Vec2{-dir.y, dir.x}, dir});
      continue;
    }
    if (d_left <= d_right) {
      if (left_foreign) continue;
      lines->push_back(
          {left_cutoff + radius * inv_tau * Vec2{-left_dir.y, left_dir.x},
           left_dir});
      continue;
    }
    if (right_foreign) continue;
    lines->push_back(
        {right_cutoff + radius * inv_tau * Vec2{right_dir.y, -right_dir.x},
         -right_dir});
  }
}

}  // namespace

OrcaConstraintSet assemble_constraints(
    const AssemblyContext& ctx, const std::vector<ObservedAgent>& neighbors,
    const std::vector<Polygon>& obstacles) {
  OrcaConstraintSet out;
  out.max_speed = ctx.max_speed;

  std::vector<const ObservedAgent*> sorted;
  sorted.reserve(neighbors.size());
  for (const ObservedAgent& nb : neighbors) sorted.push_back(&nb);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](const ObservedAgent* a, const ObservedAgent* b) {
                     return (a->position - ctx.position).norm_sq() <
                            (b->position - ctx.position).norm_sq();
                   });

  for (const ObservedAgent* nb : sorted) {
    const Vec2 rel_p = nb->position - ctx.position;
    const double r =
        ctx.r_safe + nb->r_safe + 2.0 * ctx.tracking_error;
    const Vec2 rel_v = ctx.v_opt - nb->velocity;
    const PrioritySplit split{ctx.priority, nb->priority};
    const double dist = rel_p.norm();
    if (dist > r) {
      const VOQuery q{rel_p, rel_v, r, ctx.tau};
      const UAndN un = compute_u_and_n(q);
      out.agent_planes.push_back(
          priority_halfplane(ctx.v_opt, un.u, un.n, split));
    } else {
      out.agent_planes.push_back(recovery_halfplane(
          ctx.v_opt, rel_v, rel_p, r, dist, ctx.dt, split.responsibility(),
          ctx.heading));
    }
  }

  std::vector<ObstacleLine> obstacle_lines;
  for (const Polygon& poly : obstacles) {
    append_obstacle_lines(ctx, poly, &obstacle_lines);
  }
  for (const ObstacleLine& l : obstacle_lines) {
    // Left of the directed line is feasible.
    out.fixed_planes.push_back(
        {.point = l.point, .normal = {-l.direction.y, l.direction.x}});
  }

  if (ctx.forward_only) {
    // Soft plane: trackability approximation, not a safety constraint. It
    // must be relaxable, or an agent wedged facing an obstacle edge has an
    // empty hard set and the fallback would trade the obstacle constraint
    // against it.
    out.agent_planes.push_back(
        {.point = {0.0, 0.0}, .normal = unit_from_angle(ctx.heading)});
  }
  return out;
}

double feasibility_margin(const OrcaConstraintSet& c, Vec2 v) {
  double margin = c.max_speed - v.norm();
  for (const HalfPlane& h : c.agent_planes) {
    margin = std::min(margin, point_to_halfplane_distance(v, h));
  }
  for (const HalfPlane& h : c.fixed_planes) {
    margin = std::min(margin, point_to_halfplane_distance(v, h));
  }
  return margin;
}

double max_agent_violation(const OrcaConstraintSet& c, Vec2 v) {
  double worst = 0.0;
  for (const HalfPlane& h : c.agent_planes) {
    worst = std::max(worst, -point_to_halfplane_distance(v, h));
  }
  return worst;
}

namespace {

// Solves the 1-D problem on the boundary line of `active`, feasible w.r.t.
// all planes in [planes.begin(), planes.begin()+count) and the speed disc.
std::optional<Vec2> lp1(const std::vector<HalfPlane>& planes,
                        std::size_t count, const HalfPlane& active,
                        double max_speed, Vec2 v_pref) {
  const Vec2 p = active.point;
  const Vec2 d = active.normal.perp();

  const double pd = dot(p, d);
  const double disc = pd * pd - p.norm_sq() + max_speed * max_speed;
  if (disc < 0.0) return std::nullopt;  // boundary line misses the disc
  const double sq = std::sqrt(disc);
  double t_left = -pd - sq;
  double t_right = -pd + sq;

  for (std::size_t j = 0; j < count; ++j) {
    const HalfPlane& h = planes[j];
    const double denom = dot(d, h.normal);
    const double num = dot(p - h.point, h.normal);
    if (std::abs(denom) < kLpEps) {
      if (num < 0.0) return std::nullopt;  // parallel and violated
      continue;
    }
    const double t = -num / denom;
    if (denom > 0.0) {
      t_left = std::max(t_left, t);
    } else {
      t_right = std::min(t_right, t);
    }
    if (t_right - t_left < kLpEps) return std::nullopt;
  }

  const double t = std::clamp(dot(v_pref - p, d), t_left, t_right);
  return p + t * d;
}

}  // namespace

std::optional<Vec2> lp2(const OrcaConstraintSet& constraints, Vec2 v_pref) {
  // Agent planes first (caller ordered them by distance), then the hard
  // obstacle/kinematic planes.
  std::vector<HalfPlane> planes = constraints.agent_planes;
  planes.insert(planes.end(), constraints.fixed_planes.begin(),
                constraints.fixed_planes.end());

  Vec2 v = v_pref;
  if (v.norm() > constraints.max_speed) {
    v = v.normalized() * constraints.max_speed;
  }
  for (std::size_t i = 0; i < planes.size(); ++i) {
    if (point_to_halfplane_distance(v, planes[i]) >= 0.0) continue;
    const auto on_line =
        lp1(planes, i, planes[i], constraints.max_speed, v_pref);
    if (!on_line) return std::nullopt;
    v = *on_line;
  }
  return v;
}

namespace {

OrcaConstraintSet relax_agents(const OrcaConstraintSet& c, double d) {
  OrcaConstraintSet out = c;
  for (HalfPlane& h : out.agent_planes) {
    h.point += (-d) * h.normal;
  }
  return out;
}

}  // namespace

Vec2 lp3(const OrcaConstraintSet& constraints, Vec2 v_pref) {
  if (auto v = lp2(constraints, v_pref)) return *v;

  // Seed the relaxation bound from any point satisfying the hard planes.
  OrcaConstraintSet hard_only = constraints;
  hard_only.agent_planes.clear();
  auto seed = lp2(hard_only, v_pref);
  if (!seed) {
    // Hard planes themselves conflict (can happen when wedged between
    // obstacle edges); relax everything as a last resort.
    OrcaConstraintSet all_soft = constraints;
    all_soft.agent_planes.insert(all_soft.agent_planes.end(),
                                 all_soft.fixed_planes.begin(),
                                 all_soft.fixed_planes.end());
    all_soft.fixed_planes.clear();
    return lp3(all_soft, v_pref);
  }

  double lo = 0.0;
  double hi = max_agent_violation(constraints, *seed) + kLpEps;
  for (int iter = 0; iter < 80 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (lp2(relax_agents(constraints, mid), v_pref)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  auto v = lp2(relax_agents(constraints, hi), v_pref);
  if (!v) {
    // Numeric corner: back off slightly further.
    v = lp2(relax_agents(constraints, hi + 1e-9), v_pref);
  }
  return v ? *v : *seed;
}

}  // namespace orcadrl
