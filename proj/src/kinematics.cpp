#include "orcadrl/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace orcadrl {

Command track_holonomic(const DiffDriveState& state, Vec2 v_h,
                        const ActionBounds& bounds, double heading_gain) {
  const double speed = v_h.norm();
  if (speed < 1e-12) {
    return {.v = 0.0, .w = 0.0};
  }
  const double angle_error = wrap_angle(v_h.angle() - state.heading);
  const double w =
      std::clamp(heading_gain * angle_error, bounds.w_min, bounds.w_max);
  const double v = std::clamp(speed * std::max(0.0, std::cos(angle_error)),
                              bounds.v_min, bounds.v_max);
  return {.v = v, .w = w};
}

DiffDriveState integrate(const DiffDriveState& state, Command action,
                         double dt) {
  DiffDriveState next = state;
  next.v = action.v;
  next.w = action.w;
  if (std::abs(action.w) < 1e-6) {
    next.position =
        state.position + action.v * dt * unit_from_angle(state.heading);
    next.heading = wrap_angle(state.heading + action.w * dt);
  } else {
    const double radius = action.v / action.w;
    const double psi0 = state.heading;
    const double psi1 = psi0 + action.w * dt;
    next.position = state.position + Vec2{radius * (std::sin(psi1) - std::sin(psi0)),
                                          radius * (std::cos(psi0) - std::cos(psi1))};
    next.heading = wrap_angle(psi1);
  }
  return next;
}

double tracking_error_bound(double v_max, double dt) {
  // Worst admissible case is a target behind the robot: the tracker loses the
  // full holonomic displacement (v_max*dt) while the speed floor still creeps
  // the robot forward by up to v_min*dt in the wrong direction.
  return (v_max + ActionBounds{}.v_min) * dt;
}

}  // namespace orcadrl
