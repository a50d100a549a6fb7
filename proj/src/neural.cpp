#include "orcadrl/neural.hpp"

#include <algorithm>
#include <cmath>

namespace orcadrl {

namespace {

Eigen::MatrixXd apply_act(const Eigen::MatrixXd& x, Activation act) {
  if (act == Activation::kRelu) return x.cwiseMax(0.0);
  return x.array().tanh().matrix();
}

Eigen::MatrixXd act_grad(const Eigen::MatrixXd& pre, Activation act) {
  if (act == Activation::kRelu) {
    return (pre.array() > 0.0).cast<double>().matrix();
  }
  return (1.0 - pre.array().tanh().square()).matrix();
}

}  // namespace

Mlp::Mlp(int in, const std::vector<int>& hidden, int out, Activation act,
         Rng& rng)
    : act_(act) {
  std::vector<int> dims;
  dims.push_back(in);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  layers_.resize(dims.size() - 1);
  for (size_t k = 0; k < layers_.size(); ++k) {
    Layer& l = layers_[k];
    const int rows = dims[k + 1];
    const int cols = dims[k];
    l.W.resize(rows, cols);
    const double scale = std::sqrt(2.0 / cols);  // He initialization
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) l.W(i, j) = scale * rng.normal();
    l.b = Eigen::VectorXd::Zero(rows);
    l.gW = Eigen::MatrixXd::Zero(rows, cols);
    l.gb = Eigen::VectorXd::Zero(rows);
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd h = x;
  for (size_t k = 0; k < layers_.size(); ++k) {
    Eigen::MatrixXd pre = (layers_[k].W * h).colwise() + layers_[k].b;
    h = (k + 1 < layers_.size()) ? apply_act(pre, act_) : pre;
  }
  return h;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Cache& cache) const {
  cache.post.clear();
  cache.pre.clear();
  cache.post.push_back(x);
  Eigen::MatrixXd h = x;
  for (size_t k = 0; k < layers_.size(); ++k) {
    Eigen::MatrixXd pre = (layers_[k].W * h).colwise() + layers_[k].b;
    if (k + 1 < layers_.size()) {
      cache.pre.push_back(pre);
      h = apply_act(pre, act_);
    } else {
      h = pre;  // linear output layer
    }
    cache.post.push_back(h);
  }
  return h;
}

Eigen::MatrixXd Mlp::backward(const Cache& cache, const Eigen::MatrixXd& dy) {
  Eigen::MatrixXd delta = dy;
  for (int k = int(layers_.size()) - 1; k >= 0; --k) {
    Layer& l = layers_[k];
    if (size_t(k) + 1 < layers_.size()) {
      delta = delta.cwiseProduct(act_grad(cache.pre[k], act_));
    }
    l.gW += delta * cache.post[k].transpose();
    l.gb += delta.rowwise().sum();
    delta = (l.W.transpose() * delta).eval();
  }
  return delta;
}

void Mlp::zero_grad() {
  for (Layer& l : layers_) {
    l.gW.setZero();
    l.gb.setZero();
  }
}

int Mlp::param_count() const {
  int n = 0;
  for (const Layer& l : layers_) n += int(l.W.size() + l.b.size());
  return n;
}

Eigen::VectorXd Mlp::params() const {
  Eigen::VectorXd p(param_count());
  int at = 0;
  for (const Layer& l : layers_) {
    p.segment(at, l.W.size()) = Eigen::Map<const Eigen::VectorXd>(l.W.data(), l.W.size());
    at += int(l.W.size());
    p.segment(at, l.b.size()) = l.b;
    at += int(l.b.size());
  }
  return p;
}

void Mlp::set_params(const Eigen::VectorXd& p) {
  int at = 0;
  for (Layer& l : layers_) {
    Eigen::Map<Eigen::VectorXd>(l.W.data(), l.W.size()) =
        p.segment(at, l.W.size());
    at += int(l.W.size());
    l.b = p.segment(at, l.b.size());
    at += int(l.b.size());
  }
}

Eigen::VectorXd Mlp::grads() const {
  Eigen::VectorXd g(param_count());
  int at = 0;
  for (const Layer& l : layers_) {
    g.segment(at, l.gW.size()) = Eigen::Map<const Eigen::VectorXd>(l.gW.data(), l.gW.size());
    at += int(l.gW.size());
    g.segment(at, l.gb.size()) = l.gb;
    at += int(l.gb.size());
  }
  return g;
}

Adam::Adam(int n, double lr, double beta1, double beta2, double eps)
    : m_(Eigen::VectorXd::Zero(n)),
      v_(Eigen::VectorXd::Zero(n)),
      lr_(lr),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps) {}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grads) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grads;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grads.cwiseProduct(grads);
  const double bc1 = 1.0 - std::pow(beta1_, double(t_));
  const double bc2 = 1.0 - std::pow(beta2_, double(t_));
  params -= (lr_ / bc1) *
            (m_.array() / ((v_.array() / bc2).sqrt() + eps_)).matrix();
}

Command ActionSquash::apply(const Eigen::Vector2d& z) const {
  const double tv = std::tanh(z[0]);
  const double tw = std::tanh(z[1]);
  Command c;
  c.v = bounds.v_min + 0.5 * (tv + 1.0) * (bounds.v_max - bounds.v_min);
  c.w = bounds.w_min + 0.5 * (tw + 1.0) * (bounds.w_max - bounds.w_min);
  return c;
}

Eigen::Vector2d ActionSquash::invert(const Command& a) const {
  auto inv = [](double x, double lo, double hi) {
    double t = 2.0 * (x - lo) / (hi - lo) - 1.0;
    t = std::clamp(t, -1.0 + 1e-9, 1.0 - 1e-9);
    return std::atanh(t);
  };
  return {inv(a.v, bounds.v_min, bounds.v_max),
          inv(a.w, bounds.w_min, bounds.w_max)};
}

GaussianPolicy::GaussianPolicy(int state_dim, const std::vector<int>& hidden,
                               Rng& rng, double init_log_std)
    : mean_net_(state_dim, hidden, 2, Activation::kRelu, rng),
      log_std_(Eigen::Vector2d::Constant(init_log_std)) {}

Eigen::Vector2d GaussianPolicy::mean(const Eigen::VectorXd& state) const {
  return mean_net_.forward(state);
}

Eigen::Vector2d GaussianPolicy::sample_z(const Eigen::VectorXd& state,
                                         Rng& rng) const {
  const Eigen::Vector2d mu = mean(state);
  return {mu[0] + std::exp(log_std_[0]) * rng.normal(),
          mu[1] + std::exp(log_std_[1]) * rng.normal()};
}

double GaussianPolicy::log_prob(const Eigen::VectorXd& state,
                                const Eigen::Vector2d& z) const {
  const Eigen::Vector2d mu = mean(state);
  double lp = -std::log(2.0 * M_PI);
  for (int k = 0; k < 2; ++k) {
    const double s = std::exp(log_std_[k]);
    const double d = (z[k] - mu[k]) / s;
    lp += -0.5 * d * d - log_std_[k];
  }
  return lp;
}

void GaussianPolicy::accumulate_logprob_grad(const Eigen::MatrixXd& states,
                                             const Eigen::MatrixXd& zs,
                                             const Eigen::VectorXd& coeffs) {
  Mlp::Cache cache;
  const Eigen::MatrixXd mu = mean_net_.forward(states, cache);
  const long n = states.cols();
  Eigen::MatrixXd dmu(2, n);
  for (long c = 0; c < n; ++c) {
    for (int k = 0; k < 2; ++k) {
      const double s2 = std::exp(2.0 * log_std_[k]);
      const double diff = zs(k, c) - mu(k, c);
      // d log N / d mu = diff / sigma^2
      dmu(k, c) = coeffs[c] * diff / s2;
      // d log N / d log_std = diff^2 / sigma^2 - 1
      g_log_std_[k] += coeffs[c] * (diff * diff / s2 - 1.0);
    }
  }
  mean_net_.backward(cache, dmu);
}

void GaussianPolicy::zero_grad() {
  mean_net_.zero_grad();
  g_log_std_.setZero();
}

int GaussianPolicy::param_count() const { return mean_net_.param_count() + 2; }

Eigen::VectorXd GaussianPolicy::params() const {
  Eigen::VectorXd p(param_count());
  p.head(mean_net_.param_count()) = mean_net_.params();
  p.tail(2) = log_std_;
  return p;
}

void GaussianPolicy::set_params(const Eigen::VectorXd& p) {
  mean_net_.set_params(p.head(mean_net_.param_count()));
  log_std_ = p.tail(2);
}

Eigen::VectorXd GaussianPolicy::grads() const {
  Eigen::VectorXd g(param_count());
  g.head(mean_net_.param_count()) = mean_net_.grads();
  g.tail(2) = g_log_std_;
  return g;
}

FeatureProjector::FeatureProjector(int state_dim, int feature_dim,
                                   std::uint64_t seed) {
  Rng rng(seed);
  P_.resize(feature_dim, state_dim);
  const double scale = 1.0 / std::sqrt(double(state_dim));
  for (int i = 0; i < feature_dim; ++i)
    for (int j = 0; j < state_dim; ++j) P_(i, j) = scale * rng.normal();
}

Eigen::VectorXd FeatureProjector::project(const Eigen::VectorXd& state) const {
  return P_ * state;
}

double curiosity_reward(const Eigen::VectorXd& lambda_hat,
                        const Eigen::VectorXd& lambda, double delta) {
  return 0.5 * delta * (lambda_hat - lambda).squaredNorm();
}

double mse_loss_and_grad(Mlp& net, const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& target, double scale) {
  Mlp::Cache cache;
  const Eigen::MatrixXd y = net.forward(x, cache);
  const Eigen::MatrixXd diff = y - target;
  const double n = double(x.cols());
  net.backward(cache, (scale / n) * diff);
  return scale * 0.5 * diff.squaredNorm() / n;
}

double ppo_clip_loss_and_grad(GaussianPolicy& policy,
                              const Eigen::MatrixXd& states,
                              const Eigen::MatrixXd& zs,
                              const Eigen::VectorXd& old_log_probs,
                              const Eigen::VectorXd& advantages, double clip) {
  const int n = int(states.cols());
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(n);
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double logp = policy.log_prob(states.col(i), zs.col(i));
    const double r = std::exp(logp - old_log_probs[i]);
    const double a = advantages[i];
    const double unclipped = r * a;
    const double clipped = std::clamp(r, 1.0 - clip, 1.0 + clip) * a;
    loss += std::min(unclipped, clipped);
    // d(r a)/dparams = r a dlogpi/dparams; zero when the clipped branch is
    // active (the surrogate is flat in r there).
    if (unclipped <= clipped) coeffs[i] = unclipped / double(n);
  }
  policy.accumulate_logprob_grad(states, zs, coeffs);
  return loss / double(n);
}

}  // namespace orcadrl
