#include "orcadrl/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace orcadrl {

const char* mode_name(ControlMode m) {
  switch (m) {
    case ControlMode::kOrcaDrl: return "orca-drl";
    case ControlMode::kPureDrl: return "pure-drl";
    case ControlMode::kPureOrca: return "pure-orca";
  }
  return "?";
}

ControlMode mode_from_name(const std::string& name) {
  if (name == "orca-drl") return ControlMode::kOrcaDrl;
  if (name == "pure-drl") return ControlMode::kPureDrl;
  if (name == "pure-orca") return ControlMode::kPureOrca;
  throw std::invalid_argument("unknown mode: " + name);
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kRunning: return "RUNNING";
    case Outcome::kSuccess: return "SUCCESS";
    case Outcome::kColRobot: return "COL_ROBOT";
    case Outcome::kColObst: return "COL_OBST";
    case Outcome::kTimeout: return "TIMEOUT";
    case Outcome::kRotateInPlace: return "ROTATE_IN_PLACE";
  }
  return "?";
}

namespace {

Vec2 world_velocity(const DiffDriveState& body) {
  return body.v * unit_from_angle(body.heading);
}

}  // namespace

World::World(const Scenario& sc, const WorldConfig& cfg, std::uint64_t seed)
    : scenario_(sc), cfg_(cfg) {
  Rng rng(seed);
  agents_.resize(sc.spawns.size());
  // Rejection-sample the randomized spawn offsets until starts are mutually
  // clear and off the obstacles; a spec with zero extents is kept as-is.
  for (int attempt = 0; attempt < 200; ++attempt) {
    bool ok = true;
    for (size_t i = 0; i < sc.spawns.size(); ++i) {
      const SpawnSpec& sp = sc.spawns[i];
      Agent& a = agents_[i];
      a.start = {sp.start.x + rng.uniform(-sp.start_extent.x, sp.start_extent.x),
                 sp.start.y + rng.uniform(-sp.start_extent.y, sp.start_extent.y)};
      a.goal = {sp.goal.x + rng.uniform(-sp.goal_extent.x, sp.goal_extent.x),
                sp.goal.y + rng.uniform(-sp.goal_extent.y, sp.goal_extent.y)};
      a.body = DiffDriveState{};
      a.body.position = a.start;
      a.body.heading = sp.heading;
      a.v_pref = sp.v_pref;
      a.bounds = sp.bounds;
      a.r_safe = sp.r_safe;
      a.priority = sp.priority;
      a.outcome = Outcome::kRunning;
      a.terminal_tick = -1;
      a.reward_ex_sum = 0.0;
      a.trajectory = {a.start};
      a.rot_window.clear();
      a.rot_w.clear();
    }
    for (size_t i = 0; i < agents_.size() && ok; ++i) {
      for (const Polygon& obst : sc.obstacles) {
        if (point_polygon_distance(agents_[i].start, obst) <=
            agents_[i].r_safe + 0.05) {
          ok = false;
          break;
        }
      }
      for (size_t j = i + 1; j < agents_.size() && ok; ++j) {
        if ((agents_[i].start - agents_[j].start).norm() <=
            agents_[i].r_safe + agents_[j].r_safe + 0.1) {
          ok = false;
        }
      }
    }
    if (ok) return;
  }
  throw std::runtime_error("could not place agents without overlap");
}

int World::state_dim() const {
  return 9 + 7 * cfg_.max_neighbors + cfg_.lidar_rays;
}

bool World::done() const {
  for (const Agent& a : agents_) {
    if (a.active()) return false;
  }
  return true;
}

Eigen::VectorXd World::observe(int i) const {
  const Agent& me = agents_[i];
  Eigen::VectorXd s = Eigen::VectorXd::Zero(state_dim());
  const double c = std::cos(-me.body.heading);
  const double sn = std::sin(-me.body.heading);
  auto to_body = [&](Vec2 w) {
    return Vec2{w.x * c - w.y * sn, w.x * sn + w.y * c};
  };

  const Vec2 goal_rel = to_body(me.goal - me.body.position);
  const Vec2 v_body = to_body(world_velocity(me.body));
  s[0] = goal_rel.x;
  s[1] = goal_rel.y;
  s[2] = v_body.x;
  s[3] = v_body.y;
  s[4] = me.v_pref;
  s[5] = me.body.heading;
  s[6] = me.r_safe;
  s[7] = me.priority;
  s[8] = (me.goal - me.body.position).norm();

  // k nearest active neighbors within range, ascending by distance.
  std::vector<std::pair<double, int>> order;
  for (int j = 0; j < num_agents(); ++j) {
    if (j == i || !agents_[j].active()) continue;
    const double d = (agents_[j].body.position - me.body.position).norm();
    if (d <= cfg_.neighbor_range) order.push_back({d, j});
  }
  std::sort(order.begin(), order.end());
  for (int k = 0; k < cfg_.max_neighbors && k < int(order.size()); ++k) {
    const Agent& nb = agents_[order[k].second];
    const int at = 9 + 7 * k;
    const Vec2 rel_p = to_body(nb.body.position - me.body.position);
    const Vec2 rel_v = to_body(world_velocity(nb.body) - world_velocity(me.body));
    s[at + 0] = rel_p.x;
    s[at + 1] = rel_p.y;
    s[at + 2] = rel_v.x;
    s[at + 3] = rel_v.y;
    s[at + 4] = nb.r_safe;
    s[at + 5] = wrap_angle(nb.body.heading - me.body.heading);
    s[at + 6] = nb.priority;
  }

  const int lidar_at = 9 + 7 * cfg_.max_neighbors;
  for (int r = 0; r < cfg_.lidar_rays; ++r) {
    const double ang = me.body.heading + 2.0 * M_PI * r / cfg_.lidar_rays;
    const double d = ray_cast(me.body.position, unit_from_angle(ang),
                              scenario_.obstacles, cfg_.lidar_range);
    s[lidar_at + r] = d / cfg_.lidar_range;
  }
  return s;
}

Vec2 World::v_pref_velocity(int i) const {
  const Agent& a = agents_[i];
  const Vec2 to_goal = a.goal - a.body.position;
  const double dist = to_goal.norm();
  if (dist < kGeomEps) return {};
  const double speed = std::min(a.v_pref, dist / scenario_.dt);
  return (speed / dist) * to_goal;
}

OrcaConstraintSet World::constraints_for(int i, Vec2 v_opt) const {
  const Agent& me = agents_[i];
  AssemblyContext ctx;
  ctx.position = me.body.position;
  ctx.v_opt = v_opt;
  ctx.velocity = world_velocity(me.body);
  ctx.r_safe = me.r_safe;
  ctx.priority = me.priority;
  ctx.heading = me.body.heading;
  ctx.max_speed = me.bounds.v_max;
  ctx.tracking_error = tracking_error_bound(me.bounds.v_max, scenario_.dt);
  ctx.forward_only = true;
  ctx.tau = cfg_.tau;
  ctx.tau_obst = cfg_.tau_obst;
  ctx.dt = scenario_.dt;

  std::vector<ObservedAgent> neighbors;
  for (int j = 0; j < num_agents(); ++j) {
    if (j == i || !agents_[j].active()) continue;
    const double d = (agents_[j].body.position - me.body.position).norm();
    if (d > cfg_.neighbor_range) continue;
    ObservedAgent ob;
    ob.position = agents_[j].body.position;
    ob.velocity = world_velocity(agents_[j].body);
    ob.r_safe = agents_[j].r_safe;
    ob.heading = agents_[j].body.heading;
    ob.priority = agents_[j].priority;
    neighbors.push_back(ob);
  }
  return assemble_constraints(ctx, neighbors, scenario_.obstacles);
}

std::vector<AgentTickResult> World::step(
    const std::vector<Command>& policy_cmds) {
  const int n = num_agents();
  std::vector<AgentTickResult> results(n);

  // Decide from the committed snapshot.
  std::vector<Command> exec(n);
  std::vector<FusionCase> cases(n, FusionCase::kNone);
  std::vector<Vec2> v_final(n);
  for (int i = 0; i < n; ++i) {
    if (!agents_[i].active()) continue;
    const Agent& a = agents_[i];
    switch (cfg_.mode) {
      case ControlMode::kPureOrca: {
        const Vec2 v_opt = v_pref_velocity(i);
        const FusionDecision d = fuse(constraints_for(i, v_opt), v_opt);
        cases[i] = d.fusion_case;
        v_final[i] = d.v_final;
        exec[i] = track_holonomic(a.body, d.v_final, a.bounds);
        break;
      }
      case ControlMode::kPureDrl: {
        exec[i] = policy_cmds.at(i);
        v_final[i] = exec[i].v *
                     unit_from_angle(a.body.heading + exec[i].w * scenario_.dt);
        break;
      }
      case ControlMode::kOrcaDrl: {
        const Command rl = policy_cmds.at(i);
        const Vec2 v_rl =
            rl.v * unit_from_angle(a.body.heading + rl.w * scenario_.dt);
        const FusionDecision d = fuse(constraints_for(i, v_rl), v_rl);
        cases[i] = d.fusion_case;
        v_final[i] = d.v_final;
        exec[i] = (d.fusion_case == FusionCase::kCase1)
                      ? rl
                      : track_holonomic(a.body, d.v_final, a.bounds);
        break;
      }
    }
  }

  // Integrate everyone simultaneously.
  std::vector<Vec2> new_vel(n);
  for (int i = 0; i < n; ++i) {
    if (!agents_[i].active()) continue;
    const Vec2 before = agents_[i].body.position;
    agents_[i].body = integrate(agents_[i].body, exec[i], scenario_.dt);
    new_vel[i] = (1.0 / scenario_.dt) * (agents_[i].body.position - before);
  }
  ++tick_;

  // Rewards, collisions, terminal classification.
  for (int i = 0; i < n; ++i) {
    Agent& a = agents_[i];
    AgentTickResult& res = results[i];
    if (!a.active()) {
      res.outcome = a.outcome;
      continue;
    }
    a.trajectory.push_back(a.body.position);

    RewardContext ctx;
    const std::size_t len = a.trajectory.size();
    ctx.p_prev = len >= 2 ? a.trajectory[len - 2] : a.start;
    ctx.p_now = a.body.position;
    ctx.velocity = new_vel[i];
    ctx.goal = a.goal;
    ctx.r_safe = a.r_safe;
    ctx.self_pose = {a.body.position, a.body.heading};
    static const NormPolygon kRegion = default_norm_polygon();
    ctx.norm_region = &kRegion;
    ctx.obstacles = &scenario_.obstacles;
    for (int j = 0; j < n; ++j) {
      if (j == i || !agents_[j].active()) continue;
      ctx.other_positions.push_back(agents_[j].body.position);
      ctx.other_r_safe.push_back(agents_[j].r_safe);
      ctx.other_poses.push_back({agents_[j].body.position,
                                 agents_[j].body.heading});
      ctx.other_regions.push_back(&kRegion);
    }
    res.reward = reward_step(ctx, cfg_.rewards);
    res.fusion_case = cases[i];
    res.executed = exec[i];
    res.v_final = v_final[i];
    a.reward_ex_sum += res.reward.total_ex;

    if (res.reward.collided_static) {
      a.outcome = Outcome::kColObst;
    } else if (res.reward.collided_dynamic) {
      a.outcome = Outcome::kColRobot;
    } else if (res.reward.reached_goal) {
      a.outcome = Outcome::kSuccess;
    } else {
      a.rot_window.push_back(a.body.position);
      a.rot_w.push_back(std::abs(exec[i].w));
      if (int(a.rot_window.size()) > cfg_.rot_window) {
        a.rot_window.pop_front();
        a.rot_w.pop_front();
      }
      if (int(a.rot_window.size()) == cfg_.rot_window) {
        const double disp = (a.rot_window.back() - a.rot_window.front()).norm();
        const double min_w = *std::min_element(a.rot_w.begin(), a.rot_w.end());
        if (disp < cfg_.rot_displacement && min_w > cfg_.rot_w_threshold) {
          a.outcome = Outcome::kRotateInPlace;
        }
      }
      if (a.outcome == Outcome::kRunning && tick_ >= scenario_.max_ticks) {
        a.outcome = Outcome::kTimeout;
      }
    }
    if (a.outcome != Outcome::kRunning) a.terminal_tick = tick_;
    res.outcome = a.outcome;
  }
  return results;
}

bool EpisodeResult::all_success() const {
  for (Outcome o : outcomes) {
    if (o != Outcome::kSuccess) return false;
  }
  return !outcomes.empty();
}

int EpisodeResult::count(Outcome o) const {
  int n = 0;
  for (Outcome x : outcomes) n += (x == o);
  return n;
}

std::string EpisodeResult::to_csv() const {
  std::ostringstream os;
  os << "tick,agent,px,py,psi,v,w,case,r_ex,r_c,outcome\n";
  char buf[256];
  for (const EpisodeRow& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%d,%.6f,%.6f,%s\n", r.tick,
                  r.agent, r.px, r.py, r.psi, r.v, r.w, r.fusion_case, r.r_ex,
                  r.r_c, r.outcome.c_str());
    os << buf;
  }
  return os.str();
}

EpisodeResult run_episode(const Scenario& sc, const WorldConfig& cfg,
                          std::uint64_t seed, PolicyDriver* policy) {
  if (cfg.mode != ControlMode::kPureOrca && policy == nullptr) {
    throw std::invalid_argument("learned mode requires a policy");
  }
  World world(sc, cfg, Rng::derive(seed, 0));
  Rng act_rng(Rng::derive(seed, 1));

  EpisodeResult ep;
  ep.dt = sc.dt;
  const int n = world.num_agents();
  std::vector<Eigen::VectorXd> states(n);

  while (!world.done()) {
    std::vector<Command> cmds(n);
    std::vector<bool> was_active(n);
    for (int i = 0; i < n; ++i) {
      was_active[i] = world.agent(i).active();
      if (!was_active[i]) continue;
      if (policy != nullptr) {
        states[i] = world.observe(i);
        cmds[i] = policy->act(states[i], i, act_rng);
      }
    }
    const auto results = world.step(cmds);
    for (int i = 0; i < n; ++i) {
      if (!was_active[i]) continue;
      const Agent& a = world.agent(i);
      EpisodeRow row;
      row.tick = world.tick();
      row.agent = i;
      row.px = a.body.position.x;
      row.py = a.body.position.y;
      row.psi = a.body.heading;
      row.v = results[i].executed.v;
      row.w = results[i].executed.w;
      row.fusion_case = int(results[i].fusion_case);
      row.r_ex = results[i].reward.total_ex;
      row.r_c = (policy != nullptr)
                    ? policy->curiosity(states[i], results[i].executed,
                                        world.observe(i))
                    : 0.0;
      row.outcome = outcome_name(results[i].outcome);
      ep.rows.push_back(row);
    }
  }

  ep.ticks = world.tick();
  for (int i = 0; i < n; ++i) {
    const Agent& a = world.agent(i);
    ep.outcomes.push_back(a.outcome);
    ep.terminal_ticks.push_back(a.terminal_tick);
    ep.trajectories.push_back(a.trajectory);
    ep.reward_ex_sums.push_back(a.reward_ex_sum);
  }
  return ep;
}

std::string validate_episode(const Scenario& sc, const EpisodeResult& ep) {
  std::ostringstream why;
  // Group rows by tick.
  for (size_t k = 0; k < ep.rows.size(); ++k) {
    const EpisodeRow& r = ep.rows[k];
    const SpawnSpec& sp = sc.spawns.at(size_t(r.agent));
    if (r.v > sp.bounds.v_max + 1e-9 || r.v < 0.0) {
      why << "speed bound violated at tick " << r.tick << " agent " << r.agent;
      return why.str();
    }
    if (std::abs(r.w) > sp.bounds.w_max + 1e-9) {
      why << "turn-rate bound violated at tick " << r.tick;
      return why.str();
    }
    const Vec2 p{r.px, r.py};
    if (r.outcome != "COL_OBST") {
      for (const Polygon& obst : sc.obstacles) {
        if (point_polygon_distance(p, obst) <= sp.r_safe - 1e-9) {
          why << "unreported obstacle overlap at tick " << r.tick << " agent "
              << r.agent;
          return why.str();
        }
      }
    }
    for (size_t m = k + 1;
         m < ep.rows.size() && ep.rows[m].tick == r.tick; ++m) {
      const EpisodeRow& o = ep.rows[m];
      if (r.outcome == "COL_ROBOT" && o.outcome == "COL_ROBOT") continue;
      const double min_d = sp.r_safe + sc.spawns.at(size_t(o.agent)).r_safe;
      if ((p - Vec2{o.px, o.py}).norm() <= min_d - 1e-9) {
        why << "unreported robot overlap at tick " << r.tick;
        return why.str();
      }
    }
  }
  return {};
}

}  // namespace orcadrl
