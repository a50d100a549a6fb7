#pragma once

#include <string>

#include "orcadrl/orca.hpp"

namespace orcadrl::oracles {

/// Brute-force checkers, deliberately independent of the incremental-LP and
/// VO code paths they validate.

struct GridLpResult {
  bool feasible = false;
  Vec2 v;
  double objective = 0.0;  ///< ||v - v_pref|| of the best grid point
};

/// Exhaustive grid search over the speed disc for the constrained projection
/// solved by lp2. `grid` points per axis; spacing 2*max_speed/(grid-1).
GridLpResult lp2_grid_search(const OrcaConstraintSet& c, Vec2 v_pref,
                             int grid = 400);

/// Exhaustive grid search for the minimax agent-plane violation over disc
/// points satisfying the fixed planes.
double lp3_grid_minimax(const OrcaConstraintSet& c, int grid = 400);

/// First time t > 0 at which t*v enters the open disc D(rel_p, r), from the
/// ray-disc quadratic; +inf when the ray misses.
double vo_first_contact_time(Vec2 rel_p, double r, Vec2 v);

struct SuiteReport {
  int instances = 0;
  int failures = 0;
  double worst_deviation = 0.0;
  std::string detail;
  bool passed() const { return failures == 0; }
};

/// Randomized lp2/lp3 vs grid-search comparison (acceptance criterion 1
/// reuses this with its own instance count).
SuiteReport run_lp_suite(int instances, std::uint64_t seed, int grid = 400);

/// Randomized vo_contains vs analytic ray-disc oracle.
SuiteReport run_vo_suite(int instances, std::uint64_t seed);

/// Analytic-vs-finite-difference gradient checks on random small networks.
SuiteReport run_grad_suite(int networks, std::uint64_t seed);

}  // namespace orcadrl::oracles
