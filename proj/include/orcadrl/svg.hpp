#pragma once

#include <string>

#include "orcadrl/metrics.hpp"
#include "orcadrl/trainer.hpp"

namespace orcadrl {

/// Episode picture: obstacles, start boxes, goal stars, and per-agent
/// colored trajectories in world coordinates.
std::string trajectory_svg(const Scenario& sc, const EpisodeResult& ep);

/// Two-panel training picture: external reward and curiosity per update.
std::string curves_svg(const std::vector<CurvePoint>& curve);

}  // namespace orcadrl
