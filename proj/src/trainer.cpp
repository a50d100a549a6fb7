#include "orcadrl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace orcadrl {

PolicyBundle::PolicyBundle(int state_dim_, std::uint64_t seed, double delta_)
    : state_dim(state_dim_), delta(delta_), encoder_seed(Rng::derive(seed, 4)) {
  Rng rng(Rng::derive(seed, 0));
  policy = GaussianPolicy(state_dim, {128, 128}, rng);
  Rng rng_v(Rng::derive(seed, 1));
  value = Mlp(state_dim, {128, 128}, 1, Activation::kRelu, rng_v);
  Rng rng_a(Rng::derive(seed, 2));
  inverse_net =
      Mlp(2 * feature_dim, {64, 64}, 2, Activation::kRelu, rng_a);
  Rng rng_s(Rng::derive(seed, 3));
  forward_net =
      Mlp(feature_dim + 2, {64, 64}, feature_dim, Activation::kRelu, rng_s);
  encoder = FeatureProjector(state_dim, feature_dim, encoder_seed);
}

double PolicyBundle::curiosity(const Eigen::VectorXd& state,
                               const Eigen::Vector2d& z,
                               const Eigen::VectorXd& next_state) const {
  if (delta == 0.0) return 0.0;
  Eigen::VectorXd in(feature_dim + 2);
  in.head(feature_dim) = encoder.project(state);
  in.tail(2) = z;
  const Eigen::VectorXd lambda_hat = forward_net.forward(in);
  return curiosity_reward(lambda_hat, encoder.project(next_state), delta);
}

Command BundleDriver::act(const Eigen::VectorXd& state, int /*agent*/,
                          Rng& rng) {
  const Eigen::Vector2d z = stochastic_ ? bundle_->policy.sample_z(state, rng)
                                        : bundle_->policy.mean(state);
  return bundle_->squash.apply(z);
}

double BundleDriver::curiosity(const Eigen::VectorXd& state,
                               const Command& action,
                               const Eigen::VectorXd& next_state) {
  return bundle_->curiosity(state, bundle_->squash.invert(action), next_state);
}

std::string TrainResult::curve_csv() const {
  std::string out = "update,episodes,mean_ex_reward,mean_curiosity,success_rate\n";
  char buf[160];
  for (const CurvePoint& p : curve) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f,%.6f\n", p.update,
                  p.episodes_done, p.mean_ex_reward, p.mean_curiosity,
                  p.success_rate);
    out += buf;
  }
  return out;
}

namespace {

struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd next_state;
  Eigen::Vector2d z;        ///< executed action, pre-squash coordinates
  double log_prob = 0.0;
  double reward = 0.0;      ///< external + intrinsic
  double curiosity = 0.0;
  bool done = false;        ///< last transition of this agent's stream
};

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

TrainResult train(const Scenario& sc, const WorldConfig& cfg,
                  const TrainConfig& tc) {
  TrainResult result;
  WorldConfig wcfg = cfg;
  wcfg.mode = (tc.variant == 1) ? ControlMode::kPureDrl : ControlMode::kOrcaDrl;

  {
    const World probe(sc, wcfg, Rng::derive(tc.seed, 0));
    result.bundle = PolicyBundle(probe.state_dim(), tc.seed, tc.delta);
  }
  PolicyBundle& b = result.bundle;

  Adam opt_policy(b.policy.param_count(), tc.lr);
  Adam opt_value(b.value.param_count(), tc.lr);
  Adam opt_inverse(b.inverse_net.param_count(), tc.lr);
  Adam opt_forward(b.forward_net.param_count(), tc.lr);

  Rng act_rng(Rng::derive(tc.seed, 100));
  Rng shuffle_rng(Rng::derive(tc.seed, 101));

  int episodes_done = 0;
  int update = 0;

  while (episodes_done < tc.episodes && !result.diverged) {
    // ---- Collect a batch of at least `horizon` transitions. ----
    std::vector<Transition> batch;
    double window_ex = 0.0;
    int window_agents = 0;
    int window_success = 0;
    while (int(batch.size()) < tc.horizon && episodes_done < tc.episodes) {
      World w(sc, wcfg, Rng::derive(tc.seed, 1000003ull + episodes_done));
      const int n = w.num_agents();
      // Transitions are buffered per agent and appended stream-by-stream at
      // episode end, so each agent's chain is contiguous in the batch and
      // the GAE recursion can walk it with `done` flags alone.
      std::vector<std::vector<Transition>> per_agent(n);
      std::vector<double> ep_ex(n, 0.0);
      while (!w.done()) {
        std::vector<Command> cmds(n);
        std::vector<Eigen::VectorXd> states(n);
        std::vector<Eigen::Vector2d> zs(n);
        std::vector<bool> was_active(n, false);
        for (int i = 0; i < n; ++i) {
          if (!w.agent(i).active()) continue;
          was_active[i] = true;
          states[i] = w.observe(i);
          zs[i] = b.policy.sample_z(states[i], act_rng);
          cmds[i] = b.squash.apply(zs[i]);
        }
        const std::vector<AgentTickResult> res = w.step(cmds);
        for (int i = 0; i < n; ++i) {
          if (!was_active[i]) continue;
          Transition tr;
          tr.state = states[i];
          tr.next_state = w.observe(i);
          // Under fusion the executed command can differ from the sample;
          // the stored action is what actually drove the robot.
          tr.z = (tc.variant == 1) ? zs[i]
                                   : b.squash.invert(res[i].executed);
          tr.log_prob = b.policy.log_prob(tr.state, tr.z);
          tr.curiosity = b.curiosity(tr.state, tr.z, tr.next_state);
          tr.reward = res[i].reward.total_ex + tr.curiosity;
          tr.done = !w.agent(i).active();
          ep_ex[i] += res[i].reward.total_ex;
          per_agent[i].push_back(std::move(tr));
        }
      }
      for (int i = 0; i < n; ++i) {
        if (!per_agent[i].empty()) per_agent[i].back().done = true;
        for (Transition& tr : per_agent[i]) batch.push_back(std::move(tr));
        window_ex += ep_ex[i];
        window_agents++;
        if (w.agent(i).outcome == Outcome::kSuccess) window_success++;
      }
      episodes_done++;
    }
    const int m = int(batch.size());
    if (m == 0) break;

    // ---- GAE. Streams are contiguous in the batch and closed by `done`,
    // so the one-step deltas chain with a single reverse scan. ----
    Eigen::VectorXd values(m), advantages(m), returns(m), old_logp(m);
    for (int i = 0; i < m; ++i) {
      values[i] = b.value.forward(batch[i].state)(0, 0);
      old_logp[i] = batch[i].log_prob;
      const double v_next =
          batch[i].done ? 0.0 : b.value.forward(batch[i].next_state)(0, 0);
      advantages[i] = batch[i].reward + tc.gamma * v_next - values[i];
    }
    for (int i = m - 1; i >= 0; --i) {
      if (!batch[i].done && i + 1 < m) {
        advantages[i] += tc.gamma * tc.gae_lambda * advantages[i + 1];
      }
      returns[i] = advantages[i] + values[i];
    }

    // Advantage normalization stabilizes the surrogate at small batches.
    const double adv_mean = advantages.mean();
    const double adv_std = std::sqrt(
        (advantages.array() - adv_mean).square().sum() / std::max(1, m - 1));
    if (adv_std > 1e-8) {
      advantages = (advantages.array() - adv_mean) / adv_std;
    }

    // ---- PPO epochs over shuffled minibatches. ----
    const Eigen::VectorXd save_policy = b.policy.params();
    const Eigen::VectorXd save_value = b.value.params();
    const Eigen::VectorXd save_inverse = b.inverse_net.params();
    const Eigen::VectorXd save_forward = b.forward_net.params();

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    bool finite = true;
    for (int ep = 0; ep < tc.epochs && finite; ++ep) {
      for (int i = m - 1; i > 0; --i) {
        std::swap(order[i], order[shuffle_rng.uniform_int(0, i)]);
      }
      for (int start = 0; start < m && finite; start += tc.minibatch) {
        const int count = std::min(tc.minibatch, m - start);
        Eigen::MatrixXd s(b.state_dim, count), z(2, count);
        Eigen::MatrixXd feat_pair(2 * b.feature_dim, count);
        Eigen::MatrixXd feat_act(b.feature_dim + 2, count);
        Eigen::MatrixXd feat_next(b.feature_dim, count);
        Eigen::MatrixXd ret(1, count);
        Eigen::VectorXd lp(count), adv(count);
        for (int k = 0; k < count; ++k) {
          const Transition& tr = batch[order[start + k]];
          s.col(k) = tr.state;
          z.col(k) = tr.z;
          lp[k] = old_logp[order[start + k]];
          adv[k] = advantages[order[start + k]];
          ret(0, k) = returns[order[start + k]];
          const Eigen::VectorXd f = b.encoder.project(tr.state);
          const Eigen::VectorXd fn = b.encoder.project(tr.next_state);
          feat_pair.col(k).head(b.feature_dim) = f;
          feat_pair.col(k).tail(b.feature_dim) = fn;
          feat_act.col(k).head(b.feature_dim) = f;
          feat_act.col(k).tail(2) = tr.z;
          feat_next.col(k) = fn;
        }

        // Joint objective: minimize -alpha L_clip + (1-beta) L_A + beta L_S.
        b.policy.zero_grad();
        ppo_clip_loss_and_grad(b.policy, s, z, lp, adv, tc.clip);
        // Global norm clip. The clipped surrogate is unbounded for negative
        // advantages once the exploration scale shrinks (probability ratios
        // grow like exp(1/sigma^2)); a single such minibatch can destroy a
        // converged policy.
        const auto clip_norm = [&](Eigen::VectorXd g) {
          const double n = g.norm();
          if (n > tc.max_grad_norm) g *= tc.max_grad_norm / n;
          return g;
        };
        Eigen::VectorXd g_policy =
            clip_norm(-tc.alpha * b.policy.grads());

        b.inverse_net.zero_grad();
        mse_loss_and_grad(b.inverse_net, feat_pair, z, 1.0 - tc.beta);
        b.forward_net.zero_grad();
        mse_loss_and_grad(b.forward_net, feat_act, feat_next, tc.beta);

        b.value.zero_grad();
        mse_loss_and_grad(b.value, s, ret);

        if (!all_finite(g_policy) || !all_finite(b.value.grads()) ||
            !all_finite(b.inverse_net.grads()) ||
            !all_finite(b.forward_net.grads())) {
          finite = false;
          break;
        }

        Eigen::VectorXd p = b.policy.params();
        opt_policy.step(p, g_policy);
        // Keep the exploration scale in a sane band.
        p[p.size() - 2] = std::clamp(p[p.size() - 2], tc.log_std_min,
                                     tc.log_std_max);
        p[p.size() - 1] = std::clamp(p[p.size() - 1], tc.log_std_min,
                                     tc.log_std_max);
        b.policy.set_params(p);

        p = b.value.params();
        opt_value.step(p, clip_norm(b.value.grads()));
        b.value.set_params(p);
        p = b.inverse_net.params();
        opt_inverse.step(p, clip_norm(b.inverse_net.grads()));
        b.inverse_net.set_params(p);
        p = b.forward_net.params();
        opt_forward.step(p, clip_norm(b.forward_net.grads()));
        b.forward_net.set_params(p);

        if (!all_finite(b.policy.params()) || !all_finite(b.value.params())) {
          finite = false;
        }
      }
    }
    if (!finite) {
      b.policy.set_params(save_policy);
      b.value.set_params(save_value);
      b.inverse_net.set_params(save_inverse);
      b.forward_net.set_params(save_forward);
      result.diverged = true;
    }

    update++;
    CurvePoint pt;
    pt.update = update;
    pt.episodes_done = episodes_done;
    pt.mean_ex_reward = window_agents > 0 ? window_ex / window_agents : 0.0;
    double c_sum = 0.0;
    for (const Transition& tr : batch) c_sum += tr.curiosity;
    pt.mean_curiosity = c_sum / m;
    pt.success_rate =
        window_agents > 0 ? double(window_success) / window_agents : 0.0;
    result.curve.push_back(pt);
  }
  return result;
}

}  // namespace orcadrl
