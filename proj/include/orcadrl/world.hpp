#pragma once

#include <Eigen/Dense>
#include <deque>
#include <string>
#include <vector>

#include "orcadrl/fusion.hpp"
#include "orcadrl/rewards.hpp"
#include "orcadrl/rng.hpp"
#include "orcadrl/scenario.hpp"

namespace orcadrl {

enum class ControlMode { kOrcaDrl, kPureDrl, kPureOrca };

const char* mode_name(ControlMode m);
/// Parses "orca-drl" / "pure-drl" / "pure-orca"; throws on anything else.
ControlMode mode_from_name(const std::string& name);

enum class Outcome {
  kRunning,
  kSuccess,
  kColRobot,
  kColObst,
  kTimeout,
  kRotateInPlace,
};

const char* outcome_name(Outcome o);

struct WorldConfig {
  ControlMode mode = ControlMode::kPureOrca;
  RewardConfig rewards;
  double neighbor_range = 2.0;
  int max_neighbors = 3;
  int lidar_rays = 8;
  double lidar_range = 3.0;
  double tau = 5.0;       ///< agent-agent collision horizon (s)
  double tau_obst = 2.5;  ///< agent-obstacle horizon (s)
  // Rotate-in-place detector: displacement below rot_displacement over
  // rot_window ticks while |w| stays above rot_w_threshold.
  int rot_window = 50;
  double rot_displacement = 0.02;
  double rot_w_threshold = 0.5;
};

struct Agent {
  DiffDriveState body;
  Vec2 start;
  Vec2 goal;
  double v_pref = 0.20;
  ActionBounds bounds;
  double r_safe = 0.105;
  double priority = 1.0;
  Outcome outcome = Outcome::kRunning;
  int terminal_tick = -1;
  double reward_ex_sum = 0.0;
  std::vector<Vec2> trajectory;  ///< committed positions, index = tick
  std::deque<Vec2> rot_window;   ///< recent positions for the spin detector
  std::deque<double> rot_w;

  bool active() const { return outcome == Outcome::kRunning; }
};

struct AgentTickResult {
  RewardBreakdown reward;
  FusionCase fusion_case = FusionCase::kNone;
  Command executed;       ///< (v, w) actually driven this tick
  Vec2 v_final;           ///< holonomic velocity handed to the tracker
  Outcome outcome = Outcome::kRunning;
};

/// Synchronous-tick world. All agents sense the committed state of the
/// previous tick, decide, then integrate simultaneously. Terminal agents
/// (arrived or failed) are removed from sensing and collision checks.
class World {
 public:
  World(const Scenario& sc, const WorldConfig& cfg, std::uint64_t seed);

  int num_agents() const { return int(agents_.size()); }
  int state_dim() const;
  int tick() const { return tick_; }
  bool done() const;
  const Agent& agent(int i) const { return agents_[i]; }
  const Scenario& scenario() const { return scenario_; }
  const WorldConfig& config() const { return cfg_; }

  /// State vector for agent i from the committed snapshot:
  /// [ego(9) | max_neighbors x neighbor(7) | lidar(lidar_rays)].
  /// Ego block: goal offset in the body frame (2), velocity in the body
  /// frame (2), v_pref, heading, r_safe, priority, distance to goal.
  /// Neighbor block (nearest first, zero-padded): relative position (2) and
  /// velocity (2) in the body frame, r_safe, relative heading, priority.
  Eigen::VectorXd observe(int i) const;

  /// Preferred holonomic velocity: v_pref toward the goal, slowed on final
  /// approach so the tracker can stop inside the arrival radius.
  Vec2 v_pref_velocity(int i) const;

  /// Advances one tick. `policy_cmds` is indexed by agent and ignored in
  /// PURE_ORCA mode; in the other modes it is the learned action.
  std::vector<AgentTickResult> step(const std::vector<Command>& policy_cmds);

 private:
  OrcaConstraintSet constraints_for(int i, Vec2 v_opt) const;

  Scenario scenario_;
  WorldConfig cfg_;
  std::vector<Agent> agents_;
  int tick_ = 0;
};

struct EpisodeRow {
  int tick = 0;
  int agent = 0;
  double px = 0, py = 0, psi = 0, v = 0, w = 0;
  int fusion_case = 0;
  double r_ex = 0, r_c = 0;
  std::string outcome;
};

struct EpisodeResult {
  std::vector<EpisodeRow> rows;
  std::vector<Outcome> outcomes;
  std::vector<int> terminal_ticks;
  std::vector<std::vector<Vec2>> trajectories;
  std::vector<double> reward_ex_sums;
  int ticks = 0;
  double dt = 0.2;

  bool all_success() const;
  int count(Outcome o) const;
  /// CSV with header tick,agent,px,py,psi,v,w,case,r_ex,r_c,outcome.
  std::string to_csv() const;
};

/// Per-agent action source for the learned modes. `curiosity` may return an
/// intrinsic bonus for the transition (logged in the r_c column).
class PolicyDriver {
 public:
  virtual ~PolicyDriver() = default;
  virtual Command act(const Eigen::VectorXd& state, int agent, Rng& rng) = 0;
  virtual double curiosity(const Eigen::VectorXd& state,
                           const Command& action,
                           const Eigen::VectorXd& next_state) {
    (void)state, (void)action, (void)next_state;
    return 0.0;
  }
};

/// Runs one full episode. `policy` may be null in PURE_ORCA mode.
EpisodeResult run_episode(const Scenario& sc, const WorldConfig& cfg,
                          std::uint64_t seed, PolicyDriver* policy);

/// Post-hoc validity check over an episode: speed caps respected and no
/// tick with an inter-agent or obstacle overlap before the recorded
/// collision outcome. Returns an empty string when valid, else a reason.
std::string validate_episode(const Scenario& sc, const EpisodeResult& ep);

}  // namespace orcadrl
