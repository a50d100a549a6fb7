#pragma once

#include "orcadrl/orca.hpp"

namespace orcadrl {

/// Which branch resolved the final velocity this tick.
enum class FusionCase {
  kNone = 0,   ///< no ORCA involved (pure learned policy)
  kCase1 = 1,  ///< learned velocity already satisfied every constraint
  kCase2 = 2,  ///< projected onto the feasible region
  kCase3 = 3,  ///< region empty; minimax relaxation used
};

struct FusionDecision {
  Vec2 v_final;
  FusionCase fusion_case = FusionCase::kNone;
};

/// Safety filter: keep v_rl when feasible, otherwise project (case 2) or
/// fall back to the least-violating velocity (case 3).
FusionDecision fuse(const OrcaConstraintSet& constraints, Vec2 v_rl);

}  // namespace orcadrl
