#include "orcadrl/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace orcadrl {

namespace {

using nlohmann::json;

/// U-shaped pocket opening toward -y (three walls: left, right, top).
/// `center` is the middle of the mouth, `width` the outer width.
Polygon make_pocket(Vec2 center, double width, double depth, double wall) {
  const double hw = width / 2.0;
  Polygon p;
  p.vertices = {
      {center.x - hw, center.y},
      {center.x - hw + wall, center.y},
      {center.x - hw + wall, center.y + depth - wall},
      {center.x + hw - wall, center.y + depth - wall},
      {center.x + hw - wall, center.y},
      {center.x + hw, center.y},
      {center.x + hw, center.y + depth},
      {center.x - hw, center.y + depth},
  };
  p.make_ccw();
  return p;
}

/// Corridor wall with a rectangular bump protruding into the corridor:
/// non-convex, used to reproduce wall niches in the head-on corridor.
Polygon make_bumped_wall(double x0, double x1, double y0, double y1,
                         double bump_x0, double bump_x1, double bump_y) {
  // Wall occupies [y0, y1]; the bump extends from y0 toward bump_y (inward).
  Polygon p;
  p.vertices = {
      {x0, y0},      {bump_x0, y0}, {bump_x0, bump_y}, {bump_x1, bump_y},
      {bump_x1, y0}, {x1, y0},      {x1, y1},          {x0, y1},
  };
  p.make_ccw();
  return p;
}

json vec_to_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

Scenario build_scenario(int id) {
  Scenario sc;
  switch (id) {
    case 1: {
      // Head-on corridor, 2 m x 8 m, walls carrying inward bumps so the
      // static geometry is non-convex. Two agents swap ends; spawn areas are
      // 0.5 x 0.56 m rectangles at the corridor ends.
      sc.name = "scenario1_corridor_headon";
      sc.max_ticks = 400;
      sc.world_min = {-5.0, -2.0};
      sc.world_max = {5.0, 2.0};
      sc.obstacles.push_back(
          make_bumped_wall(-4.0, 4.0, 1.0, 1.3, -1.2, -0.6, 0.8));
      sc.obstacle_convex.push_back(false);
      sc.obstacles.push_back(
          make_bumped_wall(-4.0, 4.0, -1.0, -1.3, 0.6, 1.2, -0.8));
      sc.obstacle_convex.push_back(false);
      SpawnSpec a;
      a.start = {-3.0, 0.0};
      a.start_extent = {0.25, 0.28};
      a.goal = {3.0, 0.0};
      a.goal_extent = {0.0, 0.0};
      a.heading = 0.0;
      SpawnSpec b = a;
      b.start = {3.0, 0.0};
      b.goal = {-3.0, 0.0};
      b.heading = M_PI;
      sc.spawns = {a, b};
      break;
    }
    case 2: {
      // Obstacle-free overtaking corridor: the lead agent is speed-capped at
      // 0.12 m/s (60% of the follower) and must be overtaken.
      sc.name = "scenario2_corridor_overtake";
      sc.max_ticks = 400;
      sc.world_min = {-5.0, -2.0};
      sc.world_max = {5.0, 2.0};
      SpawnSpec fast;
      fast.start = {-3.5, 0.0};
      fast.start_extent = {0.1, 0.1};
      fast.goal = {3.5, 0.0};
      fast.heading = 0.0;
      SpawnSpec slow = fast;
      slow.start = {-2.5, 0.0};
      slow.goal = {3.0, 0.0};
      slow.v_pref = 0.12;
      slow.bounds.v_max = 0.12;
      sc.spawns = {fast, slow};
      break;
    }
    case 3: {
      // Crossroad: two 2 m corridors crossing, arms 6 m long, four convex
      // corner blocks. Eight agents, two per approach direction, each
      // crossing straight to the opposite arm.
      sc.name = "scenario3_crossroad";
      sc.max_ticks = 500;
      sc.world_min = {-7.5, -7.5};
      sc.world_max = {7.5, 7.5};
      const double a = 1.0, b = 7.0;
      sc.obstacles = {
          make_rect({a, a}, {b, b}),
          make_rect({-b, a}, {-a, b}),
          make_rect({-b, -b}, {-a, -a}),
          make_rect({a, -b}, {b, -a}),
      };
      sc.obstacle_convex = {true, true, true, true};
      const double s = 5.5, off = 0.45;
      auto spawn = [](Vec2 start, Vec2 goal, double heading) {
        SpawnSpec sp;
        sp.start = start;
        sp.start_extent = {0.1, 0.1};
        sp.goal = goal;
        sp.heading = heading;
        return sp;
      };
      sc.spawns = {
          spawn({-s, -off}, {s, -off}, 0.0),
          spawn({-s, off}, {s, off}, 0.0),
          spawn({s, -off}, {-s, -off}, M_PI),
          spawn({s, off}, {-s, off}, M_PI),
          spawn({-off, -s}, {-off, s}, M_PI / 2),
          spawn({off, -s}, {off, s}, M_PI / 2),
          spawn({-off, s}, {-off, -s}, -M_PI / 2),
          spawn({off, s}, {off, -s}, -M_PI / 2),
      };
      break;
    }
    case 4: {
      // Obstacle field: eight lanes, each blocked by either a U-pocket
      // (non-convex, opening toward the agent: a local trap) or a convex
      // box. Agents drive straight lanes south to north.
      sc.name = "scenario4_nonconvex_field";
      sc.max_ticks = 400;
      sc.world_min = {-6.5, -4.5};
      sc.world_max = {6.5, 4.5};
      const double lane = 1.5;
      for (int k = 0; k < 8; ++k) {
        const double x = -5.25 + lane * k;
        const bool convex = (k == 3 || k == 6);
        if (convex) {
          sc.obstacles.push_back(make_rect({x - 0.5, -0.2}, {x + 0.3, 0.2}));
        } else {
          sc.obstacles.push_back(make_pocket({x, -0.3}, 0.9, 0.7, 0.15));
        }
        sc.obstacle_convex.push_back(convex);
        SpawnSpec sp;
        sp.start = {x, -3.0};
        sp.start_extent = {0.15, 0.15};
        // Convex lanes aim past the box corner: a goal dead behind a flat
        // face has no progress direction under reciprocal avoidance, while a
        // laterally offset goal lets the agent slide along the face and
        // round the corner. Pocket lanes aim straight in, reproducing the
        // local-minimum trap.
        sp.goal = {convex ? x + 0.8 : x, 3.0};
        sp.heading = M_PI / 2;
        sc.spawns.push_back(sp);
      }
      break;
    }
    default:
      throw std::invalid_argument("unknown scenario id");
  }
  return sc;
}

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["dt"] = sc.dt;
  j["max_ticks"] = sc.max_ticks;
  j["world_min"] = vec_to_json(sc.world_min);
  j["world_max"] = vec_to_json(sc.world_max);
  j["obstacles"] = json::array();
  for (size_t i = 0; i < sc.obstacles.size(); ++i) {
    json o;
    o["convex"] = sc.obstacle_convex.size() > i ? bool(sc.obstacle_convex[i])
                                                : true;
    o["vertices"] = json::array();
    for (const Vec2& v : sc.obstacles[i].vertices)
      o["vertices"].push_back(vec_to_json(v));
    j["obstacles"].push_back(o);
  }
  j["agents"] = json::array();
  for (const SpawnSpec& sp : sc.spawns) {
    json a;
    a["start"] = vec_to_json(sp.start);
    a["start_extent"] = vec_to_json(sp.start_extent);
    a["goal"] = vec_to_json(sp.goal);
    a["goal_extent"] = vec_to_json(sp.goal_extent);
    a["heading"] = sp.heading;
    a["v_pref"] = sp.v_pref;
    a["v_min"] = sp.bounds.v_min;
    a["v_max"] = sp.bounds.v_max;
    a["w_max"] = sp.bounds.w_max;
    a["r_safe"] = sp.r_safe;
    a["priority"] = sp.priority;
    j["agents"].push_back(a);
  }
  return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
  const json j = json::parse(text);
  Scenario sc;
  sc.name = j.at("name").get<std::string>();
  sc.dt = j.value("dt", 0.2);
  sc.max_ticks = j.value("max_ticks", 400);
  if (j.contains("world_min")) sc.world_min = vec_from_json(j["world_min"]);
  if (j.contains("world_max")) sc.world_max = vec_from_json(j["world_max"]);
  for (const json& o : j.value("obstacles", json::array())) {
    Polygon p;
    for (const json& v : o.at("vertices")) p.vertices.push_back(vec_from_json(v));
    p.make_ccw();
    sc.obstacles.push_back(p);
    sc.obstacle_convex.push_back(o.value("convex", true));
  }
  for (const json& a : j.at("agents")) {
    SpawnSpec sp;
    sp.start = vec_from_json(a.at("start"));
    if (a.contains("start_extent"))
      sp.start_extent = vec_from_json(a["start_extent"]);
    sp.goal = vec_from_json(a.at("goal"));
    if (a.contains("goal_extent")) sp.goal_extent = vec_from_json(a["goal_extent"]);
    sp.heading = a.value("heading", 0.0);
    sp.v_pref = a.value("v_pref", 0.20);
    sp.bounds.v_min = a.value("v_min", 0.01);
    sp.bounds.v_max = a.value("v_max", 0.20);
    sp.bounds.w_max = a.value("w_max", 2.5);
    sp.bounds.w_min = -sp.bounds.w_max;
    sp.r_safe = a.value("r_safe", 0.105);
    sp.priority = a.value("priority", 1.0);
    sc.spawns.push_back(sp);
  }
  if (sc.spawns.empty()) throw std::invalid_argument("scenario has no agents");
  return sc;
}

}  // namespace orcadrl
