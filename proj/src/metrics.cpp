#include "orcadrl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "orcadrl/norms.hpp"

namespace orcadrl {

namespace {

double min_pair_distance(const std::vector<Vec2>& a,
                         const std::vector<Vec2>& b) {
  const size_t n = std::min(a.size(), b.size());
  double best = 1e18;
  for (size_t t = 0; t < n; ++t) best = std::min(best, (a[t] - b[t]).norm());
  return best;
}

Vec2 net_displacement(const std::vector<Vec2>& t) {
  return t.empty() ? Vec2{} : t.back() - t.front();
}

}  // namespace

SocialStats episode_social_stats(const EpisodeResult& ep) {
  SocialStats st;
  const auto& trajs = ep.trajectories;
  for (size_t i = 0; i < trajs.size(); ++i) {
    for (size_t j = i + 1; j < trajs.size(); ++j) {
      if (min_pair_distance(trajs[i], trajs[j]) > kInteractionThreshold)
        continue;
      const Vec2 di = net_displacement(trajs[i]);
      const Vec2 dj = net_displacement(trajs[j]);
      if (di.norm() < kGeomEps || dj.norm() < kGeomEps) continue;
      const double align = dot(di.normalized(), dj.normalized());
      if (align > 0.5) {
        // Same general direction: overtaking encounter, faster agent first.
        const bool i_fast = di.norm() >= dj.norm();
        const auto& fast = i_fast ? trajs[i] : trajs[j];
        const auto& slow = i_fast ? trajs[j] : trajs[i];
        const PassSide side = classify_overtake_side(fast, slow);
        if (side == PassSide::kLeft) {
          st.overtake_left++;
        } else if (side == PassSide::kRight) {
          st.overtake_right++;
          st.compliant = false;
        }
      } else if (align < -0.5) {
        // Opposing directions: head-on pass; each agent should keep right.
        for (const auto* pair :
             {&trajs[i], &trajs[j]}) {
          const auto& self = *pair;
          const auto& other = (pair == &trajs[i]) ? trajs[j] : trajs[i];
          const PassSide side = classify_pass_side(self, other);
          if (side == PassSide::kRight) {
            st.pass_right++;
          } else if (side == PassSide::kLeft) {
            st.pass_left++;
            st.compliant = false;
          }
        }
      }
      // Orthogonal crossings carry no side rule here.
    }
  }
  return st;
}

MetricsReport compute_metrics(const std::vector<EpisodeResult>& episodes,
                              const std::string& scenario_name,
                              const std::string& method, int num_robots) {
  MetricsReport rep;
  rep.scenario = scenario_name;
  rep.method = method;
  rep.num_robots = num_robots;
  rep.episodes = int(episodes.size());

  long robots = 0, success = 0, col_r = 0, col_o = 0, timeout = 0, rotate = 0;
  long success_episodes = 0, compliant_episodes = 0;
  double time_sum = 0.0;
  long time_count = 0;
  for (const EpisodeResult& ep : episodes) {
    for (size_t i = 0; i < ep.outcomes.size(); ++i) {
      ++robots;
      switch (ep.outcomes[i]) {
        case Outcome::kSuccess:
          ++success;
          time_sum += ep.terminal_ticks[i] * ep.dt;
          ++time_count;
          break;
        case Outcome::kColRobot: ++col_r; break;
        case Outcome::kColObst: ++col_o; break;
        case Outcome::kTimeout: ++timeout; break;
        case Outcome::kRotateInPlace: ++rotate; break;
        case Outcome::kRunning: break;
      }
    }
    const SocialStats st = episode_social_stats(ep);
    rep.pass_right_total += st.pass_right;
    rep.pass_left_total += st.pass_left;
    if (ep.all_success()) {
      ++success_episodes;
      if (st.compliant) ++compliant_episodes;
    }
  }
  if (robots > 0) {
    rep.success_rate = 100.0 * double(success) / double(robots);
    rep.col_robots = 100.0 * double(col_r) / double(robots);
    rep.col_obstacles = 100.0 * double(col_o) / double(robots);
    rep.timeout = 100.0 * double(timeout) / double(robots);
    rep.rotate_in_place = 100.0 * double(rotate) / double(robots);
  }
  rep.social_rate = success_episodes > 0
                        ? 100.0 * double(compliant_episodes) /
                              double(success_episodes)
                        : 0.0;
  rep.avg_time = time_count > 0 ? time_sum / double(time_count) : 0.0;
  rep.avg_time_fail = rep.success_rate < 60.0;
  return rep;
}

namespace {

std::string fmt1(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", x);
  return buf;
}

std::string avg_time_cell(const MetricsReport& r) {
  if (r.avg_time_fail) return "fail";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", r.avg_time);
  return buf;
}

constexpr const char* kColumns =
    "Number of robots,Scenario,Method,Success Rate(%),"
    "Soclial rules success rate(%),Collision With robots(%),"
    "Collision with obstacles(%),Time Out(%),Rotate in place(%),"
    "Average Time(s)";

}  // namespace

std::string MetricsReport::to_csv() const {
  std::ostringstream os;
  os << kColumns << "\n";
  os << num_robots << "," << scenario << "," << method << ","
     << fmt1(success_rate) << "," << fmt1(social_rate) << ","
     << fmt1(col_robots) << "," << fmt1(col_obstacles) << "," << fmt1(timeout)
     << "," << fmt1(rotate_in_place) << "," << avg_time_cell(*this) << "\n";
  return os.str();
}

std::string MetricsReport::to_text() const {
  std::ostringstream os;
  os << "episodes: " << episodes << "\n";
  std::istringstream cols(kColumns);
  std::string col;
  std::vector<std::string> values = {std::to_string(num_robots),
                                     scenario,
                                     method,
                                     fmt1(success_rate),
                                     fmt1(social_rate),
                                     fmt1(col_robots),
                                     fmt1(col_obstacles),
                                     fmt1(timeout),
                                     fmt1(rotate_in_place),
                                     avg_time_cell(*this)};
  size_t k = 0;
  while (std::getline(cols, col, ',')) {
    os << col << ": " << (k < values.size() ? values[k] : "") << "\n";
    ++k;
  }
  return os.str();
}

EvalResult evaluate(const Scenario& sc, const WorldConfig& cfg, int episodes,
                    std::uint64_t seed, PolicyDriver* policy, int workers) {
  EvalResult out;
  out.episodes.resize(size_t(episodes));
  workers = std::max(1, std::min(workers, episodes));
  if (workers == 1) {
    for (int e = 0; e < episodes; ++e) {
      out.episodes[size_t(e)] = run_episode(sc, cfg, Rng::derive(seed, e), policy);
    }
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int e = w; e < episodes; e += workers) {
          out.episodes[size_t(e)] =
              run_episode(sc, cfg, Rng::derive(seed, e), policy);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  out.report = compute_metrics(out.episodes, sc.name, mode_name(cfg.mode),
                               int(sc.spawns.size()));
  return out;
}

}  // namespace orcadrl
