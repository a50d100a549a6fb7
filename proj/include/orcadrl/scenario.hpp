#pragma once

#include <string>
#include <vector>

#include "orcadrl/geometry.hpp"
#include "orcadrl/kinematics.hpp"

namespace orcadrl {

/// One agent's spawn specification. Extents give rectangle-uniform
/// randomization half-widths around the centers; zero extents pin the value.
struct SpawnSpec {
  Vec2 start;
  Vec2 start_extent;
  Vec2 goal;
  Vec2 goal_extent;
  double heading = 0.0;
  double v_pref = 0.20;
  ActionBounds bounds;
  double r_safe = 0.105;
  double priority = 1.0;
};

struct Scenario {
  std::string name;
  std::vector<Polygon> obstacles;
  std::vector<bool> obstacle_convex;  ///< tag per obstacle
  std::vector<SpawnSpec> spawns;
  double dt = 0.2;
  int max_ticks = 400;
  Vec2 world_min{-6.0, -6.0};
  Vec2 world_max{6.0, 6.0};
};

/// The four benchmark scenes:
///   1 corridor head-on pass with wall pockets, randomized central spawn areas
///   2 obstacle-free overtaking corridor (second agent capped at 0.12 m/s)
///   3 crossroad, 8 agents, 2 per approach arm
///   4 obstacle field with 6 non-convex pockets and 2 convex boxes
Scenario build_scenario(int id);

Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& sc);

}  // namespace orcadrl
