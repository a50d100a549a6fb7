#include <set>

#include "doctest.h"
#include "orcadrl/metrics.hpp"
#include "orcadrl/scenario.hpp"
#include "orcadrl/world.hpp"

using namespace orcadrl;

TEST_CASE("build_scenario basics") {
  SUBCASE("scenario 2 speed caps") {
    const Scenario sc = build_scenario(2);
    REQUIRE(sc.spawns.size() == 2);
    CHECK(sc.spawns[0].bounds.v_max == doctest::Approx(0.20));
    CHECK(sc.spawns[1].bounds.v_max == doctest::Approx(0.12));
    CHECK(sc.obstacles.empty());
  }
  SUBCASE("scenario 3 has eight agents and convex-only obstacles") {
    const Scenario sc = build_scenario(3);
    CHECK(sc.spawns.size() == 8);
    for (bool convex : sc.obstacle_convex) CHECK(convex);
    // Two agents per approach direction.
    std::set<double> headings;
    for (const SpawnSpec& sp : sc.spawns) headings.insert(sp.heading);
    CHECK(headings.size() == 4);
  }
  SUBCASE("scenario 4 mixes six non-convex with two convex obstacles") {
    const Scenario sc = build_scenario(4);
    int convex = 0, nonconvex = 0;
    for (bool c : sc.obstacle_convex) (c ? convex : nonconvex)++;
    CHECK(convex == 2);
    CHECK(nonconvex == 6);
    CHECK(sc.spawns.size() == 8);
  }
  SUBCASE("scenario 1 walls are non-convex") {
    const Scenario sc = build_scenario(1);
    for (const Polygon& p : sc.obstacles) {
      CHECK(convex_decompose(p).size() > 1);
    }
  }
  CHECK_THROWS(build_scenario(5));
}

TEST_CASE("scenario JSON round trip") {
  const Scenario sc = build_scenario(4);
  const Scenario back = scenario_from_json(scenario_to_json(sc));
  CHECK(back.name == sc.name);
  CHECK(back.max_ticks == sc.max_ticks);
  REQUIRE(back.obstacles.size() == sc.obstacles.size());
  REQUIRE(back.spawns.size() == sc.spawns.size());
  for (size_t i = 0; i < sc.spawns.size(); ++i) {
    CHECK(back.spawns[i].start.x == doctest::Approx(sc.spawns[i].start.x));
    CHECK(back.spawns[i].goal.y == doctest::Approx(sc.spawns[i].goal.y));
    CHECK(back.spawns[i].bounds.v_max ==
          doctest::Approx(sc.spawns[i].bounds.v_max));
  }
  CHECK(back.obstacle_convex == sc.obstacle_convex);
}

TEST_CASE("same seed gives identical agent placement") {
  const Scenario sc = build_scenario(1);
  const WorldConfig cfg;
  const World a(sc, cfg, 42), b(sc, cfg, 42), c(sc, cfg, 43);
  CHECK(a.agent(0).start.x == b.agent(0).start.x);
  CHECK(a.agent(0).start.y == b.agent(0).start.y);
  CHECK((a.agent(0).start - c.agent(0).start).norm() > 0.0);
}

TEST_CASE("observe layout") {
  Scenario sc;
  sc.name = "single";
  SpawnSpec sp;
  sp.start = {0.0, 0.0};
  sp.goal = {2.0, 0.0};
  sc.spawns = {sp};
  const WorldConfig cfg;

  SUBCASE("empty world: zero neighbor block, rays at max range") {
    const World w(sc, cfg, 1);
    const Eigen::VectorXd s = w.observe(0);
    REQUIRE(s.size() == 9 + 7 * 3 + 8);
    CHECK(s[0] == doctest::Approx(2.0));  // goal ahead in body frame
    CHECK(s[1] == doctest::Approx(0.0));
    CHECK(s[8] == doctest::Approx(2.0));  // distance to goal
    for (int k = 9; k < 9 + 21; ++k) CHECK(s[k] == 0.0);
    for (int k = 30; k < 38; ++k) CHECK(s[k] == doctest::Approx(1.0));
  }
  SUBCASE("wall at known distance shows up on the forward ray") {
    sc.obstacles = {make_rect({1.0, -2.0}, {1.3, 2.0})};
    sc.obstacle_convex = {true};
    const World w(sc, cfg, 1);
    const Eigen::VectorXd s = w.observe(0);
    CHECK(s[30] == doctest::Approx(1.0 / 3.0));  // ray 0 points along heading
  }
  SUBCASE("five neighbors: the three nearest reported, ascending") {
    for (double d : {1.2, 0.4, 1.9, 0.8, 1.55}) {
      SpawnSpec nb;
      nb.start = {d, 0.6};
      nb.goal = {d, -2.0};
      sc.spawns.push_back(nb);
    }
    const World w(sc, cfg, 1);
    const Eigen::VectorXd s = w.observe(0);
    std::vector<double> dists;
    for (int k = 0; k < 3; ++k) {
      dists.push_back(Vec2{s[9 + 7 * k], s[10 + 7 * k]}.norm());
    }
    CHECK(dists[0] <= dists[1]);
    CHECK(dists[1] <= dists[2]);
    CHECK(dists[0] == doctest::Approx(Vec2{0.4, 0.6}.norm()));
    CHECK(dists[2] == doctest::Approx(Vec2{1.2, 0.6}.norm()));
  }
}

TEST_CASE("single agent drives to its goal under PURE_ORCA") {
  Scenario sc;
  sc.name = "single";
  SpawnSpec sp;
  sp.start = {0.0, 0.0};
  sp.goal = {2.0, 0.0};
  sc.spawns = {sp};
  WorldConfig cfg;
  cfg.mode = ControlMode::kPureOrca;
  const EpisodeResult ep = run_episode(sc, cfg, 3, nullptr);
  REQUIRE(ep.outcomes.size() == 1);
  CHECK(ep.outcomes[0] == Outcome::kSuccess);
  // 1.88 m to the arrival radius at 0.2 m/s and dt 0.2 s: about 47 ticks.
  CHECK(ep.terminal_ticks[0] > 40);
  CHECK(ep.terminal_ticks[0] < 60);
  CHECK(validate_episode(sc, ep).empty());
}

TEST_CASE("head-on pair passes without collision and episode log validates") {
  const Scenario sc = build_scenario(1);
  WorldConfig cfg;
  cfg.mode = ControlMode::kPureOrca;
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    const EpisodeResult ep = run_episode(sc, cfg, seed, nullptr);
    CHECK(ep.outcomes[0] == Outcome::kSuccess);
    CHECK(ep.outcomes[1] == Outcome::kSuccess);
    const std::string why = validate_episode(sc, ep);
    INFO(why);
    CHECK(why.empty());
  }
}

TEST_CASE("episode CSV is deterministic and matches the pinned header") {
  const Scenario sc = build_scenario(1);
  WorldConfig cfg;
  cfg.mode = ControlMode::kPureOrca;
  const std::string a = run_episode(sc, cfg, 7, nullptr).to_csv();
  const std::string b = run_episode(sc, cfg, 7, nullptr).to_csv();
  CHECK(a == b);
  CHECK(a.substr(0, a.find('\n')) ==
        "tick,agent,px,py,psi,v,w,case,r_ex,r_c,outcome");
  const std::string c = run_episode(sc, cfg, 8, nullptr).to_csv();
  CHECK(a != c);
}

TEST_CASE("overtake scenario: fast agent passes the slow one") {
  const Scenario sc = build_scenario(2);
  WorldConfig cfg;
  cfg.mode = ControlMode::kPureOrca;
  const EpisodeResult ep = run_episode(sc, cfg, 11, nullptr);
  CHECK(ep.outcomes[0] == Outcome::kSuccess);
  CHECK(ep.outcomes[1] == Outcome::kSuccess);
  // The fast agent arrives first despite starting 1 m behind.
  CHECK(ep.terminal_ticks[0] < ep.terminal_ticks[1]);
}

TEST_CASE("metrics aggregation arithmetic") {
  // Hand-built episode set: 2 robots, one all-success episode (arrivals at
  // ticks 100 and 150) and one with a robot collision pair.
  EpisodeResult good;
  good.dt = 0.2;
  good.outcomes = {Outcome::kSuccess, Outcome::kSuccess};
  good.terminal_ticks = {100, 150};
  good.trajectories = {{{0, 0}, {1, 0}}, {{5, 5}, {6, 5}}};
  EpisodeResult bad = good;
  bad.outcomes = {Outcome::kColRobot, Outcome::kColRobot};
  const MetricsReport rep =
      compute_metrics({good, bad}, "toy", "pure-orca", 2);
  CHECK(rep.success_rate == doctest::Approx(50.0));
  CHECK(rep.col_robots == doctest::Approx(50.0));
  CHECK(rep.avg_time == doctest::Approx(25.0));
  CHECK(rep.avg_time_fail);  // 50% < 60% threshold
  const std::string csv = rep.to_csv();
  CHECK(csv.find("Soclial rules success rate(%)") != std::string::npos);
  CHECK(csv.find("fail") != std::string::npos);
}

TEST_CASE("evaluate is worker-count invariant in its report") {
  const Scenario sc = build_scenario(1);
  WorldConfig cfg;
  cfg.mode = ControlMode::kPureOrca;
  const EvalResult one = evaluate(sc, cfg, 8, 5, nullptr, 1);
  const EvalResult four = evaluate(sc, cfg, 8, 5, nullptr, 4);
  CHECK(one.report.success_rate == four.report.success_rate);
  CHECK(one.report.avg_time == four.report.avg_time);
  CHECK(one.episodes[3].to_csv() == four.episodes[3].to_csv());
}

TEST_CASE("social stats classify a clean right-side pass as compliant") {
  EpisodeResult ep;
  ep.outcomes = {Outcome::kSuccess, Outcome::kSuccess};
  ep.terminal_ticks = {40, 40};
  std::vector<Vec2> i_traj, j_traj;
  for (int t = 0; t <= 40; ++t) {
    i_traj.push_back({-2.0 + 0.1 * t, -0.15});
    j_traj.push_back({2.0 - 0.1 * t, 0.15});
  }
  ep.trajectories = {i_traj, j_traj};
  const SocialStats st = episode_social_stats(ep);
  CHECK(st.pass_right == 2);
  CHECK(st.pass_left == 0);
  CHECK(st.compliant);
  // Mirrored: both agents keep left instead.
  for (auto& p : ep.trajectories[0]) p.y = 0.15;
  for (auto& p : ep.trajectories[1]) p.y = -0.15;
  const SocialStats bad = episode_social_stats(ep);
  CHECK(bad.pass_left == 2);
  CHECK_FALSE(bad.compliant);
}
