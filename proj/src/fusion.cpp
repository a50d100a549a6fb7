#include "orcadrl/fusion.hpp"

namespace orcadrl {

FusionDecision fuse(const OrcaConstraintSet& constraints, Vec2 v_rl) {
  if (feasibility_margin(constraints, v_rl) >= 0.0) {
    return {v_rl, FusionCase::kCase1};
  }
  if (const auto projected = lp2(constraints, v_rl)) {
    return {*projected, FusionCase::kCase2};
  }
  return {lp3(constraints, v_rl), FusionCase::kCase3};
}

}  // namespace orcadrl
