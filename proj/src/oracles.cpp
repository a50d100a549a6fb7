#include "orcadrl/oracles.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "orcadrl/neural.hpp"
#include "orcadrl/rng.hpp"

namespace orcadrl::oracles {

GridLpResult lp2_grid_search(const OrcaConstraintSet& c, Vec2 v_pref,
                             int grid) {
  GridLpResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const double r = c.max_speed;
  const double step = 2.0 * r / (grid - 1);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Vec2 v{-r + i * step, -r + j * step};
      if (v.norm() > r) continue;
      bool ok = true;
      for (const HalfPlane& h : c.agent_planes) {
        if (point_to_halfplane_distance(v, h) < 0.0) {
          ok = false;
          break;
        }
      }
      if (ok) {
        for (const HalfPlane& h : c.fixed_planes) {
          if (point_to_halfplane_distance(v, h) < 0.0) {
            ok = false;
            break;
          }
        }
      }
      if (!ok) continue;
      const double obj = (v - v_pref).norm();
      if (obj < best.objective) {
        best.feasible = true;
        best.v = v;
        best.objective = obj;
      }
    }
  }
  return best;
}

double lp3_grid_minimax(const OrcaConstraintSet& c, int grid) {
  double best = std::numeric_limits<double>::infinity();
  const double r = c.max_speed;
  const double step = 2.0 * r / (grid - 1);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Vec2 v{-r + i * step, -r + j * step};
      if (v.norm() > r) continue;
      bool ok = true;
      for (const HalfPlane& h : c.fixed_planes) {
        if (point_to_halfplane_distance(v, h) < 0.0) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      best = std::min(best, max_agent_violation(c, v));
    }
  }
  return best;
}

double vo_first_contact_time(Vec2 rel_p, double r, Vec2 v) {
  // ||t*v - rel_p|| = r  =>  t^2 |v|^2 - 2 t (v . rel_p) + |rel_p|^2 - r^2 = 0
  const double a = v.norm_sq();
  if (a < 1e-18) return std::numeric_limits<double>::infinity();
  const double b = -2.0 * dot(v, rel_p);
  const double cc = rel_p.norm_sq() - r * r;
  const double disc = b * b - 4.0 * a * cc;
  if (disc <= 0.0) return std::numeric_limits<double>::infinity();
  const double t = (-b - std::sqrt(disc)) / (2.0 * a);
  return t > 0.0 ? t : std::numeric_limits<double>::infinity();
}

namespace {

OrcaConstraintSet random_constraints(Rng& rng, double max_speed) {
  OrcaConstraintSet c;
  c.max_speed = max_speed;
  const int n = rng.uniform_int(0, 8);
  for (int k = 0; k < n; ++k) {
    HalfPlane h;
    h.normal = unit_from_angle(rng.uniform(0.0, 2.0 * M_PI));
    h.point = Vec2{rng.uniform(-max_speed, max_speed),
                   rng.uniform(-max_speed, max_speed)} *
              0.8;
    c.agent_planes.push_back(h);
  }
  return c;
}

// Exact optimum of the constrained projection by candidate enumeration:
// the minimizer of ||v - v_pref|| over (disc ∩ half-planes) is v_pref
// itself, the projection onto a single boundary, or a pairwise boundary
// intersection (plane/plane, plane/disc, or the radial disc point). Shares
// no code with the incremental solver it certifies.
double exact_projection_objective(const OrcaConstraintSet& c, Vec2 v_pref) {
  std::vector<HalfPlane> planes = c.fixed_planes;
  planes.insert(planes.end(), c.agent_planes.begin(), c.agent_planes.end());
  const double r = c.max_speed;
  const double eps = 1e-9;
  auto feasible = [&](Vec2 v) {
    if (v.norm() > r + eps) return false;
    for (const HalfPlane& h : planes) {
      if (dot(v - h.point, h.normal) < -eps) return false;
    }
    return true;
  };
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](Vec2 v) {
    if (feasible(v)) best = std::min(best, (v - v_pref).norm());
  };

  consider(v_pref);
  if (v_pref.norm() > eps) consider(v_pref * (r / v_pref.norm()));
  for (std::size_t i = 0; i < planes.size(); ++i) {
    const HalfPlane& a = planes[i];
    const Vec2 da{-a.normal.y, a.normal.x};  // boundary line direction
    // Projection of v_pref onto the boundary line of plane i.
    consider(v_pref + a.normal * dot(a.point - v_pref, a.normal));
    // Boundary line ∩ disc: |a.point + t*da| = r.
    const double b = 2.0 * dot(a.point, da);
    const double cc = a.point.norm_sq() - r * r;
    const double disc = b * b - 4.0 * cc;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      consider(a.point + da * ((-b - s) / 2.0));
      consider(a.point + da * ((-b + s) / 2.0));
    }
    // Boundary line ∩ boundary line.
    for (std::size_t j = i + 1; j < planes.size(); ++j) {
      const HalfPlane& bpl = planes[j];
      const Vec2 db{-bpl.normal.y, bpl.normal.x};
      const double den = det(da, db);
      if (std::abs(den) < 1e-12) continue;
      const double t = det(bpl.point - a.point, db) / den;
      consider(a.point + da * t);
    }
  }
  return best;
}

}  // namespace

SuiteReport run_lp_suite(int instances, std::uint64_t seed, int grid) {
  SuiteReport rep;
  Rng rng(seed);
  const double max_speed = 0.2;
  const double res = 2.0 * max_speed / (grid - 1);
  const double tol = 2.0 * res;
  for (int it = 0; it < instances; ++it) {
    const OrcaConstraintSet c = random_constraints(rng, max_speed);
    const Vec2 v_pref{rng.uniform(-max_speed, max_speed),
                      rng.uniform(-max_speed, max_speed)};
    rep.instances++;

    const auto got = lp2(c, v_pref);
    const GridLpResult oracle = lp2_grid_search(c, v_pref, grid);
    if (got) {
      if (feasibility_margin(c, *got) < -1e-9) {
        rep.failures++;
        continue;
      }
      if (oracle.feasible) {
        // The grid point is feasible, so it is a proof: the LP result may
        // not be worse than it beyond the tolerance.
        double dev = (*got - v_pref).norm() - oracle.objective;
        if (dev < -tol) {
          // The LP beat the grid. That is legitimate when every grid point
          // near the optimum is infeasible (a thin feasible sliver), so
          // adjudicate against the exact enumeration of boundary candidates
          // instead of the discretized certificate.
          dev = std::abs((*got - v_pref).norm() -
                         exact_projection_objective(c, v_pref));
        }
        rep.worst_deviation = std::max(rep.worst_deviation, dev);
        if (dev > tol) rep.failures++;
      }
      // oracle infeasible + lp2 feasible: region thinner than the grid.
    } else {
      // lp2 infeasible: the grid must not find a robustly feasible point.
      if (oracle.feasible) {
        OrcaConstraintSet tight = c;
        for (HalfPlane& h : tight.agent_planes) h.point += tol * h.normal;
        if (lp2_grid_search(tight, v_pref, grid).feasible) rep.failures++;
      }
      // Also check lp3 on infeasible instances.
      const Vec2 v3 = lp3(c, v_pref);
      const double minimax = max_agent_violation(c, v3);
      const double oracle_minimax = lp3_grid_minimax(c, grid);
      const double dev = minimax - oracle_minimax;  // oracle is an upper bound
      rep.worst_deviation = std::max(rep.worst_deviation, std::abs(dev));
      if (dev > tol || v3.norm() > max_speed + 1e-9) rep.failures++;
    }
  }
  std::ostringstream os;
  os << "lp suite: " << rep.instances << " instances, " << rep.failures
     << " failures, worst deviation " << rep.worst_deviation;
  rep.detail = os.str();
  return rep;
}

SuiteReport run_vo_suite(int instances, std::uint64_t seed) {
  SuiteReport rep;
  Rng rng(seed);
  for (int it = 0; it < instances; ++it) {
    VOQuery q;
    q.combined_radius = rng.uniform(0.05, 0.5);
    const double dist = q.combined_radius + rng.uniform(0.05, 2.0);
    q.rel_position = unit_from_angle(rng.uniform(0, 2 * M_PI)) * dist;
    q.tau = rng.uniform(0.5, 8.0);
    const Vec2 v{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    rep.instances++;
    const double t = vo_first_contact_time(q.rel_position, q.combined_radius, v);
    const bool expected = t <= q.tau;
    if (vo_contains(q, v) != expected) {
      // Tolerate grazing contacts within numerical noise of the horizon.
      if (std::abs(t - q.tau) > 1e-9) rep.failures++;
    }
  }
  std::ostringstream os;
  os << "vo suite: " << rep.instances << " instances, " << rep.failures
     << " failures";
  rep.detail = os.str();
  return rep;
}

SuiteReport run_grad_suite(int networks, std::uint64_t seed) {
  SuiteReport rep;
  Rng rng(seed);
  const double eps = 1e-5;

  auto check = [&](auto&& loss, Eigen::VectorXd params,
                   const Eigen::VectorXd& analytic,
                   auto&& set_params) {
    Eigen::VectorXd numeric(params.size());
    for (int i = 0; i < params.size(); ++i) {
      const double save = params[i];
      params[i] = save + eps;
      set_params(params);
      const double up = loss();
      params[i] = save - eps;
      set_params(params);
      const double down = loss();
      params[i] = save;
      numeric[i] = (up - down) / (2.0 * eps);
    }
    set_params(params);
    const double denom =
        std::max({analytic.norm(), numeric.norm(), 1e-12});
    const double rel = (analytic - numeric).norm() / denom;
    rep.worst_deviation = std::max(rep.worst_deviation, rel);
    rep.instances++;
    if (rel > 1e-4) rep.failures++;
  };

  // Central differences are only valid away from ReLU kinks: resample inputs
  // until every hidden pre-activation clears a guard band much wider than the
  // probe step.
  auto kink_free = [](const Mlp& net, const Eigen::MatrixXd& x) {
    Mlp::Cache cache;
    net.forward(x, cache);
    for (const Eigen::MatrixXd& pre : cache.pre) {
      if (pre.cwiseAbs().minCoeff() < 1e-3) return false;
    }
    return true;
  };

  for (int it = 0; it < networks; ++it) {
    const int in = rng.uniform_int(3, 10);
    const int out = rng.uniform_int(1, 4);
    const std::vector<int> hidden = {rng.uniform_int(4, 16),
                                     rng.uniform_int(4, 16)};
    const Activation act =
        (it % 2 == 0) ? Activation::kRelu : Activation::kTanh;
    Mlp net(in, hidden, out, act, rng);
    const int batch = rng.uniform_int(1, 8);
    Eigen::MatrixXd x(in, batch), t(out, batch);
    do {
      for (int c = 0; c < batch; ++c)
        for (int r = 0; r < in; ++r) x(r, c) = rng.normal();
    } while (act == Activation::kRelu && !kink_free(net, x));
    for (int c = 0; c < batch; ++c)
      for (int r = 0; r < out; ++r) t(r, c) = rng.normal();
    net.zero_grad();
    mse_loss_and_grad(net, x, t);
    const Eigen::VectorXd analytic = net.grads();
    check([&] { return 0.5 * (net.forward(x) - t).squaredNorm() / batch; },
          net.params(), analytic,
          [&](const Eigen::VectorXd& p) { net.set_params(p); });
  }

  // Policy log-probability path (mean net + log_std): every other instance.
  for (int it = 0; it < networks / 4; ++it) {
    const int in = rng.uniform_int(3, 8);
    GaussianPolicy pol(in, {rng.uniform_int(4, 8)}, rng);
    const int batch = rng.uniform_int(1, 6);
    Eigen::MatrixXd s(in, batch), z(2, batch);
    Eigen::VectorXd coeffs(batch);
    do {
      for (int c = 0; c < batch; ++c)
        for (int r = 0; r < in; ++r) s(r, c) = rng.normal();
    } while (!kink_free(pol.mean_net(), s));
    for (int c = 0; c < batch; ++c) {
      z(0, c) = rng.normal();
      z(1, c) = rng.normal();
      coeffs[c] = rng.uniform(-1.0, 1.0);
    }
    pol.zero_grad();
    pol.accumulate_logprob_grad(s, z, coeffs);
    const Eigen::VectorXd analytic = pol.grads();
    auto loss = [&] {
      double sum = 0.0;
      for (int c = 0; c < batch; ++c)
        sum += coeffs[c] * pol.log_prob(s.col(c), z.col(c));
      return sum;
    };
    check(loss, pol.params(), analytic,
          [&](const Eigen::VectorXd& p) { pol.set_params(p); });
  }

  // Clipped-surrogate path: the surrogate has kinks where the ratio crosses
  // 1 +/- clip, so ratios are resampled away from the clip boundaries.
  for (int it = 0; it < networks / 4; ++it) {
    const int in = rng.uniform_int(3, 8);
    GaussianPolicy pol(in, {rng.uniform_int(4, 8)}, rng);
    const int batch = rng.uniform_int(1, 6);
    const double clip = 0.2;
    Eigen::MatrixXd s(in, batch), z(2, batch);
    Eigen::VectorXd old_logp(batch), adv(batch);
    do {
      for (int c = 0; c < batch; ++c)
        for (int r = 0; r < in; ++r) s(r, c) = rng.normal();
    } while (!kink_free(pol.mean_net(), s));
    for (int c = 0; c < batch; ++c) {
      z(0, c) = rng.normal();
      z(1, c) = rng.normal();
      adv[c] = rng.uniform(-2.0, 2.0);
      double ratio;
      do {
        ratio = std::exp(rng.uniform(-0.5, 0.5));
      } while (std::abs(ratio - (1.0 - clip)) < 1e-2 ||
               std::abs(ratio - (1.0 + clip)) < 1e-2);
      old_logp[c] = pol.log_prob(s.col(c), z.col(c)) - std::log(ratio);
    }
    pol.zero_grad();
    ppo_clip_loss_and_grad(pol, s, z, old_logp, adv, clip);
    const Eigen::VectorXd analytic = pol.grads();
    auto loss = [&] {
      double sum = 0.0;
      for (int c = 0; c < batch; ++c) {
        const double r = std::exp(pol.log_prob(s.col(c), z.col(c)) - old_logp[c]);
        sum += std::min(r * adv[c],
                        std::clamp(r, 1.0 - clip, 1.0 + clip) * adv[c]);
      }
      return sum / batch;
    };
    check(loss, pol.params(), analytic,
          [&](const Eigen::VectorXd& p) { pol.set_params(p); });
  }

  std::ostringstream os;
  os << "grad suite: " << rep.instances << " instances, " << rep.failures
     << " failures, worst rel err " << rep.worst_deviation;
  rep.detail = os.str();
  return rep;
}

}  // namespace orcadrl::oracles
