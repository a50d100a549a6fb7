#pragma once

#include <string>
#include <vector>

#include "orcadrl/neural.hpp"
#include "orcadrl/world.hpp"

namespace orcadrl {

/// All learned components plus the fixed feature encoder. Architecture is
/// fixed (policy/value: 2x128, social nets: 2x64) so a checkpoint only needs
/// the dimensions and flat parameter vectors.
struct PolicyBundle {
  int state_dim = 0;
  int feature_dim = 32;
  double delta = 0.01;              ///< curiosity strength factor
  std::uint64_t encoder_seed = 0;   ///< the feature projection is seed-derived

  GaussianPolicy policy;  ///< state -> pre-squash action mean (2x128)
  Mlp value;              ///< state -> scalar value (2x128)
  Mlp inverse_net;        ///< [feat(s), feat(s')] -> predicted action (2x64)
  Mlp forward_net;        ///< [feat(s), action]   -> predicted feat(s') (2x64)
  FeatureProjector encoder;
  ActionSquash squash;

  PolicyBundle() = default;
  PolicyBundle(int state_dim, std::uint64_t seed, double delta = 0.01);

  /// Intrinsic reward for one transition; the action enters the social nets
  /// in pre-squash coordinates.
  double curiosity(const Eigen::VectorXd& state, const Eigen::Vector2d& z,
                   const Eigen::VectorXd& next_state) const;
};

/// PolicyDriver over a bundle; stochastic for rollouts, mean for evaluation.
class BundleDriver : public PolicyDriver {
 public:
  BundleDriver(const PolicyBundle* bundle, bool stochastic)
      : bundle_(bundle), stochastic_(stochastic) {}
  Command act(const Eigen::VectorXd& state, int agent, Rng& rng) override;
  double curiosity(const Eigen::VectorXd& state, const Command& action,
                   const Eigen::VectorXd& next_state) override;

 private:
  const PolicyBundle* bundle_;
  bool stochastic_;
};

struct TrainConfig {
  int variant = 2;       ///< 1: raw policy actions, 2: fusion-filtered rollouts
  int episodes = 2000;   ///< total episode budget
  int horizon = 512;     ///< transitions pooled per update (at least)
  int epochs = 4;
  int minibatch = 256;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip = 0.2;
  double lr = 3e-4;
  double alpha = 1.0;    ///< weight of the clipped surrogate
  double beta = 0.2;     ///< inverse/forward loss split
  double delta = 0.01;   ///< curiosity strength (0 disables the bonus)
  double max_grad_norm = 0.5;  ///< global gradient-norm clip per update
  double init_log_std = -0.5;
  double log_std_min = -4.0;
  double log_std_max = 1.0;
  std::uint64_t seed = 1;
};

struct CurvePoint {
  int update = 0;
  int episodes_done = 0;
  double mean_ex_reward = 0.0;   ///< per-agent-episode external reward
  double mean_curiosity = 0.0;   ///< per-transition intrinsic reward
  double success_rate = 0.0;     ///< agent success fraction in the window
};

struct TrainResult {
  PolicyBundle bundle;
  std::vector<CurvePoint> curve;
  bool diverged = false;
  /// CSV: update,episodes,mean_ex_reward,mean_curiosity,success_rate
  std::string curve_csv() const;
};

/// Centralized training over all agents' pooled experience with shared
/// networks. Deterministic for a fixed config. On a non-finite loss the last
/// finite parameters are kept and `diverged` is set.
TrainResult train(const Scenario& sc, const WorldConfig& cfg,
                  const TrainConfig& tc);

}  // namespace orcadrl
