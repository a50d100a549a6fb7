// Acceptance gate: one check per criterion, each printing a single
// "criterion N: PASS|FAIL — detail" line. Run all (no args) or one
// (--criterion N). Exit code 0 iff every executed criterion passed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "orcadrl/checkpoint.hpp"
#include "orcadrl/metrics.hpp"
#include "orcadrl/oracles.hpp"
#include "orcadrl/trainer.hpp"

#ifndef ORCADRL_REPO_DIR
#define ORCADRL_REPO_DIR "."
#endif

namespace {

using namespace orcadrl;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Tolerances, pinned here so the gate is self-describing.
constexpr double kLpToleranceFactor = 2.0;   // x grid resolution
constexpr double kSuccessFloorS3 = 98.0;     // percent
constexpr double kPriorityRatioFloor = 5.0;  // low/high displacement
constexpr double kEqualSplitTolerance = 0.05;
constexpr double kGradTolerance = 1e-4;
constexpr double kBinomialAlpha = 0.05;

// ---------------------------------------------------------------- scenarios

Scenario head_on_scenario(bool jitter, double pr_a, double pr_b) {
  Scenario sc;
  sc.name = "head_on";
  sc.max_ticks = 400;
  sc.world_min = {-2.5, -1.5};
  sc.world_max = {2.5, 1.5};
  SpawnSpec a;
  a.start = {-1.5, 0.0};
  a.goal = {1.5, 0.0};
  a.heading = 0.0;
  a.priority = pr_a;
  SpawnSpec b;
  b.start = {1.5, 0.0};
  b.goal = {-1.5, 0.0};
  b.heading = M_PI;
  b.priority = pr_b;
  if (jitter) {
    a.start_extent = {0.25, 0.28};
    a.goal_extent = {0.0, 0.0};
    b.start_extent = {0.25, 0.28};
  }
  sc.spawns = {a, b};
  return sc;
}

// Four agents, one per crossroad arm (the built-in crossroad has eight).
Scenario crossroad4_scenario() {
  Scenario sc = build_scenario(3);
  sc.name = "crossroad4";
  std::vector<SpawnSpec> kept;
  for (std::size_t i = 0; i < sc.spawns.size(); i += 2) {
    SpawnSpec sp = sc.spawns[i];
    // Center each kept agent on its arm.
    sp.start = {(sp.start.x + sc.spawns[i + 1].start.x) / 2,
                (sp.start.y + sc.spawns[i + 1].start.y) / 2};
    sp.goal = {(sp.goal.x + sc.spawns[i + 1].goal.x) / 2,
               (sp.goal.y + sc.spawns[i + 1].goal.y) / 2};
    sp.start_extent = {0.2, 0.2};
    kept.push_back(sp);
  }
  sc.spawns = kept;
  return sc;
}

// Two short lanes, each blocked by an offset convex box; goals aim past the
// corner. Episode cap keeps training rollouts cheap.
Scenario sparse_lanes_scenario() {
  Scenario sc;
  sc.name = "sparse_lanes";
  sc.max_ticks = 150;
  sc.world_min = {-2.5, -1.6};
  sc.world_max = {2.5, 1.6};
  for (const double x : {-0.75, 0.75}) {
    sc.obstacles.push_back(make_rect({x - 0.5, -0.2}, {x + 0.3, 0.2}));
    sc.obstacle_convex.push_back(true);
    SpawnSpec sp;
    sp.start = {x, -1.2};
    sp.start_extent = {0.15, 0.1};
    sp.goal = {x + 0.8, 1.2};
    sp.heading = M_PI / 2;
    sp.r_safe = 0.15;
    sc.spawns.push_back(sp);
  }
  return sc;
}

std::string repo_path(const char* rel) {
  return std::string(ORCADRL_REPO_DIR) + "/" + rel;
}

// ----------------------------------------------------------------- criteria

Verdict criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const oracles::SuiteReport rep = oracles::run_lp_suite(1000, 20260826, 400);
  const double secs = seconds_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "%d instances vs 400x400 grid (tolerance %.0fx resolution), "
                "%d failures, worst deviation %.3g, %.1f s (limit 60)",
                rep.instances, kLpToleranceFactor, rep.failures,
                rep.worst_deviation, secs);
  return {rep.failures == 0 && secs < 60.0, buf};
}

Verdict criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario sc = head_on_scenario(true, 1.0, 1.0);
  WorldConfig cfg;
  cfg.mode = ControlMode::kPureOrca;
  const int episodes = 10000;
  const int workers = std::max(1u, std::thread::hardware_concurrency());
  const EvalResult res = evaluate(sc, cfg, episodes, 424242, nullptr, workers);
  int collisions = 0;
  for (const EpisodeResult& ep : res.episodes) {
    collisions += ep.count(Outcome::kColRobot);
  }
  const double secs = seconds_since(t0);
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "%d randomized head-on episodes, %d robot collisions, "
                "%.1f s (limit 300)",
                episodes, collisions, secs);
  return {collisions == 0 && secs < 300.0, buf};
}

Verdict criterion3() {
  WorldConfig cfg;
  cfg.mode = ControlMode::kPureOrca;
  const EvalResult res = evaluate(build_scenario(3), cfg, 50, 7, nullptr, 8);
  const MetricsReport& r = res.report;
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "crossroad success %.1f%% (floor %.0f%%), collisions "
                "robots %.1f%% obstacles %.1f%% (must be exactly 0)",
                r.success_rate, kSuccessFloorS3, r.col_robots,
                r.col_obstacles);
  return {r.success_rate >= kSuccessFloorS3 && r.col_robots == 0.0 &&
              r.col_obstacles == 0.0,
          buf};
}

Verdict criterion4() {
  const Scenario sc = build_scenario(4);
  WorldConfig cfg;
  cfg.mode = ControlMode::kPureOrca;
  int pocket_bad = 0, convex_bad = 0, episodes = 10;
  for (int e = 0; e < episodes; ++e) {
    const EpisodeResult ep = run_episode(sc, cfg, 1000 + e, nullptr);
    for (std::size_t i = 0; i < ep.outcomes.size(); ++i) {
      const bool convex_lane = sc.obstacle_convex[i];  // one obstacle per lane
      if (convex_lane && ep.outcomes[i] != Outcome::kSuccess) convex_bad++;
      if (!convex_lane && ep.outcomes[i] != Outcome::kTimeout) pocket_bad++;
    }
  }
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "%d episodes: non-convex lanes must all time out "
                "(%d deviations), convex lanes must all succeed "
                "(%d deviations)",
                episodes, pocket_bad, convex_bad);
  return {pocket_bad == 0 && convex_bad == 0, buf};
}

double avoidance_displacement(const std::vector<Vec2>& traj) {
  // Integrated lateral deviation from the straight start-goal line (y = 0).
  double sum = 0.0;
  for (const Vec2& p : traj) sum += std::abs(p.y);
  return sum;
}

Verdict criterion5() {
  WorldConfig cfg;
  cfg.mode = ControlMode::kPureOrca;
  const EpisodeResult weighted =
      run_episode(head_on_scenario(false, 1.0, 10.0), cfg, 5, nullptr);
  const double low = avoidance_displacement(weighted.trajectories[0]);
  const double high = avoidance_displacement(weighted.trajectories[1]);
  const double ratio = high > 0.0 ? low / high : 1e9;

  const EpisodeResult equal =
      run_episode(head_on_scenario(false, 1.0, 1.0), cfg, 5, nullptr);
  const double d0 = avoidance_displacement(equal.trajectories[0]);
  const double d1 = avoidance_displacement(equal.trajectories[1]);
  const double rel =
      std::abs(d0 - d1) / std::max({d0, d1, 1e-12});
  char buf[224];
  std::snprintf(buf, sizeof(buf),
                "pr=(1,10): low/high displacement %.2f/%.3f = %.1fx "
                "(floor %.0fx); pr=(1,1): %.3f vs %.3f, rel diff %.2g "
                "(tolerance %.2f)",
                low, high, ratio, kPriorityRatioFloor, d0, d1, rel,
                kEqualSplitTolerance);
  return {ratio >= kPriorityRatioFloor && rel <= kEqualSplitTolerance, buf};
}

Verdict criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const oracles::SuiteReport rep = oracles::run_grad_suite(100, 2026);
  const double secs = seconds_since(t0);
  char buf[224];
  std::snprintf(buf, sizeof(buf),
                "clipped surrogate, dynamics and value losses: %d gradient "
                "checks, %d failures, worst rel err %.3g (tolerance %.0e), "
                "%.1f s (limit 60)",
                rep.instances, rep.failures, rep.worst_deviation,
                kGradTolerance, secs);
  return {rep.failures == 0 && secs < 60.0, buf};
}

double final_success(const TrainResult& r) {
  if (r.curve.empty()) return 0.0;
  const int tail = std::max<int>(1, int(r.curve.size()) / 5);
  double sum = 0.0;
  for (int i = int(r.curve.size()) - tail; i < int(r.curve.size()); ++i) {
    sum += r.curve[i].success_rate;
  }
  return sum / tail;
}

Verdict criterion7() {
  const Scenario sc = sparse_lanes_scenario();
  WorldConfig cfg;
  // Sparse rewards: arrival bonus and collision penalties only.
  cfg.rewards.b_mf = 0.0;
  cfg.rewards.c_dir = 0.0;
  cfg.rewards.g_tim = 0.0;
  cfg.rewards.n_norm = 0.0;

  const std::vector<std::uint64_t> seeds = {101, 202, 303};
  std::vector<double> with_c(seeds.size()), without_c(seeds.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    for (const int curious : {1, 0}) {
      pool.emplace_back([&, k, curious] {
        TrainConfig tc;
        tc.variant = 1;
        tc.episodes = 5000;
        tc.seed = seeds[k];
        tc.delta = curious ? 0.01 : 0.0;
        const double s = final_success(train(sc, cfg, tc));
        (curious ? with_c : without_c)[k] = s;
      });
    }
  }
  for (std::thread& t : pool) t.join();

  double mean_with = 0.0, mean_without = 0.0;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    mean_with += with_c[k] / seeds.size();
    mean_without += without_c[k] / seeds.size();
  }
  char buf[256];
  std::snprintf(
      buf, sizeof(buf),
      "sparse 2-agent lanes, 5000 episodes x 3 seeds: final success "
      "with curiosity %.3f (%.2f/%.2f/%.2f) vs without %.3f "
      "(%.2f/%.2f/%.2f); require strict mean ordering",
      mean_with, with_c[0], with_c[1], with_c[2], mean_without, without_c[0],
      without_c[1], without_c[2]);
  return {mean_with > mean_without, buf};
}

Verdict criterion8() {
  PolicyBundle bundle;
  try {
    bundle = load_checkpoint(repo_path("checkpoints/crossroad4.ckpt"));
  } catch (const std::exception& e) {
    return {false, std::string("missing desk-trained checkpoint: ") +
                       e.what()};
  }
  BundleDriver driver(&bundle, false);
  const Scenario sc = crossroad4_scenario();
  WorldConfig cfg;
  cfg.mode = ControlMode::kOrcaDrl;
  const EvalResult fused = evaluate(sc, cfg, 200, 31, &driver, 8);
  cfg.mode = ControlMode::kPureDrl;
  const EvalResult raw = evaluate(sc, cfg, 200, 31, &driver, 8);
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "same checkpoint, 200 episodes, 4-agent crossroad: robot "
                "collisions %.2f%% fused vs %.2f%% raw policy "
                "(require strict reduction)",
                fused.report.col_robots, raw.report.col_robots);
  return {fused.report.col_robots < raw.report.col_robots, buf};
}

// Two-sided binomial test via the normal approximation (n = 200 is far into
// the CLT regime for p = 0.5).
double binomial_two_sided_p(int heads, int n) {
  const double mean = 0.5 * n;
  const double sd = std::sqrt(0.25 * n);
  const double z = std::abs((heads - mean) / sd);
  return std::erfc(z / std::sqrt(2.0));
}

Verdict criterion9() {
  PolicyBundle bundle;
  try {
    bundle = load_checkpoint(repo_path("checkpoints/corridor.ckpt"));
  } catch (const std::exception& e) {
    return {false, std::string("missing desk-trained checkpoint: ") +
                       e.what()};
  }
  BundleDriver driver(&bundle, false);
  const Scenario sc = build_scenario(1);
  WorldConfig cfg;
  cfg.mode = ControlMode::kPureOrca;
  const EvalResult orca = evaluate(sc, cfg, 200, 55, nullptr, 8);
  cfg.mode = ControlMode::kOrcaDrl;
  const EvalResult fused = evaluate(sc, cfg, 200, 55, &driver, 8);

  // Pass-side tally for the unlearned baseline.
  const int right = orca.report.pass_right_total;
  const int decided = right + orca.report.pass_left_total;
  const double p = decided > 0 ? binomial_two_sided_p(right, decided) : 0.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "social-rule success: fused %.1f%% vs baseline %.1f%% "
                "(require strict ordering); baseline pass side %d/%d right, "
                "binomial p %.3f (require > %.2f)",
                fused.report.social_rate, orca.report.social_rate, right,
                decided, p, kBinomialAlpha);
  return {fused.report.social_rate > orca.report.social_rate &&
              p > kBinomialAlpha,
          buf};
}

Verdict criterion10() {
  WorldConfig cfg;
  cfg.mode = ControlMode::kPureOrca;
  const Scenario sc = build_scenario(1);
  const EvalResult a = evaluate(sc, cfg, 10, 99, nullptr, 1);
  const EvalResult b = evaluate(sc, cfg, 10, 99, nullptr, 1);
  bool same = a.report.to_csv() == b.report.to_csv() &&
              a.episodes.size() == b.episodes.size();
  for (std::size_t i = 0; same && i < a.episodes.size(); ++i) {
    same = a.episodes[i].to_csv() == b.episodes[i].to_csv();
  }
  bool same_learned = true;
  std::string learned_note = "baseline mode";
  try {
    const PolicyBundle bundle =
        load_checkpoint(repo_path("checkpoints/corridor.ckpt"));
    BundleDriver d1(&bundle, false), d2(&bundle, false);
    cfg.mode = ControlMode::kOrcaDrl;
    const EvalResult c = evaluate(sc, cfg, 5, 99, &d1, 1);
    const EvalResult d = evaluate(sc, cfg, 5, 99, &d2, 1);
    same_learned = c.report.to_csv() == d.report.to_csv();
    for (std::size_t i = 0; same_learned && i < c.episodes.size(); ++i) {
      same_learned = c.episodes[i].to_csv() == d.episodes[i].to_csv();
    }
    learned_note = "baseline and learned modes";
  } catch (const std::exception&) {
    learned_note = "baseline mode only (no checkpoint found)";
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "repeated seeded runs, workers=1: byte-identical CSVs over "
                "%s: %s",
                learned_note.c_str(),
                same && same_learned ? "yes" : "no");
  return {same && same_learned, buf};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
    }
  }
  Verdict (*checks[])() = {criterion1, criterion2, criterion3, criterion4,
                           criterion5, criterion6, criterion7, criterion8,
                           criterion9, criterion10};
  bool all_pass = true;
  for (int n = 1; n <= 10; ++n) {
    if (only != 0 && n != only) continue;
    const Verdict v = checks[n - 1]();
    std::printf("criterion %d: %s — %s\n", n, v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && v.pass;
  }
  return all_pass ? 0 : 1;
}
