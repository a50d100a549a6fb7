#pragma once

#include <Eigen/Dense>
#include <vector>

#include "orcadrl/kinematics.hpp"
#include "orcadrl/rng.hpp"

namespace orcadrl {

enum class Activation { kRelu, kTanh };

/// Fully connected network with manual forward/backward passes. Columns of
/// the input matrix are samples. Parameter and gradient vectors use a fixed
/// flattening order (layer by layer, weights column-major, then bias) so
/// finite-difference checks and optimizers can treat the net as one vector.
class Mlp {
 public:
  Mlp() = default;
  Mlp(int in, const std::vector<int>& hidden, int out, Activation act,
      Rng& rng);

  struct Cache {
    std::vector<Eigen::MatrixXd> post;  ///< post[0] = input, post[k] = layer k output
    std::vector<Eigen::MatrixXd> pre;   ///< pre-activation per hidden layer
  };

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache& cache) const;

  /// Accumulates parameter gradients for dL/dy (same shape as the output)
  /// and returns dL/dx.
  Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& dy);

  void zero_grad();
  int param_count() const;
  Eigen::VectorXd params() const;
  void set_params(const Eigen::VectorXd& p);
  Eigen::VectorXd grads() const;

  int in_dim() const { return layers_.empty() ? 0 : int(layers_[0].W.cols()); }
  int out_dim() const { return layers_.empty() ? 0 : int(layers_.back().W.rows()); }

 private:
  struct Layer {
    Eigen::MatrixXd W, gW;
    Eigen::VectorXd b, gb;
  };
  std::vector<Layer> layers_;
  Activation act_ = Activation::kRelu;
};

/// Adam over a flat parameter vector.
class Adam {
 public:
  explicit Adam(int n, double lr = 3e-4, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8);
  /// In-place update of `params` from `grads`.
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grads);
  double lr() const { return lr_; }

 private:
  Eigen::VectorXd m_, v_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

/// Elementwise tanh squash followed by an affine map onto the action box
/// [v_min, v_max] x [w_min, w_max].
struct ActionSquash {
  ActionBounds bounds;
  Command apply(const Eigen::Vector2d& z) const;
  /// Inverse map (atanh); inputs are clamped strictly inside the box.
  Eigen::Vector2d invert(const Command& a) const;
};

/// Diagonal-Gaussian policy over the pre-squash variable z in R^2. The mean
/// comes from an MLP; log standard deviations are state-independent learned
/// parameters. Log-probabilities are reported in z-space: the tanh-affine
/// squash is a fixed bijection, so its Jacobian cancels from PPO ratios.
class GaussianPolicy {
 public:
  GaussianPolicy() = default;
  GaussianPolicy(int state_dim, const std::vector<int>& hidden, Rng& rng,
                 double init_log_std = -0.5);

  Eigen::Vector2d mean(const Eigen::VectorXd& state) const;
  Eigen::Vector2d sample_z(const Eigen::VectorXd& state, Rng& rng) const;
  double log_prob(const Eigen::VectorXd& state, const Eigen::Vector2d& z) const;

  /// Accumulates d(coeff * log pi(z|s)) / d params for a batch (columns).
  void accumulate_logprob_grad(const Eigen::MatrixXd& states,
                               const Eigen::MatrixXd& zs,
                               const Eigen::VectorXd& coeffs);

  void zero_grad();
  int param_count() const;
  Eigen::VectorXd params() const;
  void set_params(const Eigen::VectorXd& p);
  Eigen::VectorXd grads() const;

  const Eigen::Vector2d& log_std() const { return log_std_; }
  const Mlp& mean_net() const { return mean_net_; }

 private:
  Mlp mean_net_;
  Eigen::Vector2d log_std_ = Eigen::Vector2d::Zero();
  Eigen::Vector2d g_log_std_ = Eigen::Vector2d::Zero();
};

/// Fixed random linear projection of the state onto the feature space the
/// social nets regress against. Never trained; derived from the seed only.
class FeatureProjector {
 public:
  FeatureProjector() = default;
  FeatureProjector(int state_dim, int feature_dim, std::uint64_t seed);
  Eigen::VectorXd project(const Eigen::VectorXd& state) const;
  int feature_dim() const { return int(P_.rows()); }

 private:
  Eigen::MatrixXd P_;
};

/// Intrinsic reward (delta/2) * ||lambda_hat - lambda||^2.
double curiosity_reward(const Eigen::VectorXd& lambda_hat,
                        const Eigen::VectorXd& lambda, double delta);

/// 0.5 * mean squared error over a batch (columns), with gradient pushed into
/// the net. Returns the loss.
double mse_loss_and_grad(Mlp& net, const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& target, double scale = 1.0);

/// Mean clipped surrogate over a batch:
///   mean_i min(r_i A_i, clamp(r_i, 1-clip, 1+clip) A_i),
/// with r_i = exp(log pi(z_i|s_i) - old_log_prob_i). Accumulates dL/dparams
/// into the policy (ascent direction is +grad) and returns the loss.
double ppo_clip_loss_and_grad(GaussianPolicy& policy,
                              const Eigen::MatrixXd& states,
                              const Eigen::MatrixXd& zs,
                              const Eigen::VectorXd& old_log_probs,
                              const Eigen::VectorXd& advantages, double clip);

}  // namespace orcadrl
