#pragma once

#include <string>
#include <vector>

#include "orcadrl/world.hpp"

namespace orcadrl {

/// Social-rule bookkeeping for one episode: pass-side and overtake-side
/// classifications over every interacting agent pair.
struct SocialStats {
  int pass_right = 0;
  int pass_left = 0;
  int overtake_left = 0;
  int overtake_right = 0;
  /// True when no classified interaction broke a rule (pass right,
  /// overtake left). Unclassified encounters do not count against it.
  bool compliant = true;
};

SocialStats episode_social_stats(const EpisodeResult& ep);

struct MetricsReport {
  int num_robots = 0;
  std::string scenario;
  std::string method;
  int episodes = 0;
  double success_rate = 0.0;       ///< % of robot-episodes ending SUCCESS
  double social_rate = 0.0;        ///< % of all-success episodes compliant
  double col_robots = 0.0;         ///< % of robot-episodes ending COL_ROBOT
  double col_obstacles = 0.0;
  double timeout = 0.0;
  double rotate_in_place = 0.0;
  double avg_time = 0.0;           ///< mean seconds to goal over successes
  bool avg_time_fail = false;      ///< success below 60%: time reported "fail"
  int pass_right_total = 0;
  int pass_left_total = 0;

  std::string to_csv() const;
  std::string to_text() const;
};

MetricsReport compute_metrics(const std::vector<EpisodeResult>& episodes,
                              const std::string& scenario_name,
                              const std::string& method, int num_robots);

struct EvalResult {
  MetricsReport report;
  std::vector<EpisodeResult> episodes;
};

/// Runs `episodes` seeded episodes (episode e uses seed derive(seed, e)) and
/// aggregates. `workers` > 1 distributes episodes across threads; results
/// are merged in episode order, so the report does not depend on scheduling.
EvalResult evaluate(const Scenario& sc, const WorldConfig& cfg, int episodes,
                    std::uint64_t seed, PolicyDriver* policy, int workers = 1);

}  // namespace orcadrl
