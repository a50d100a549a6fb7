#pragma once

#include "orcadrl/geometry.hpp"

namespace orcadrl {

/// Differential-drive state. v >= 0; backward motion is not allowed.
struct DiffDriveState {
  Vec2 position;
  double heading = 0.0;  ///< normalized to (-pi, pi]
  double v = 0.0;        ///< translational speed (m/s)
  double w = 0.0;        ///< rotational speed (rad/s)
};

struct ActionBounds {
  double v_min = 0.01;
  double v_max = 0.20;
  double w_min = -2.5;
  double w_max = 2.5;
};

/// Proportional heading controller gain. At dt = 0.2 s a gain of 4.0 removes
/// 80% of the heading error per tick without saturating |w| <= 2.5 for errors
/// under 0.6 rad.
inline constexpr double kHeadingGain = 4.0;

struct Command {
  double v = 0.0;
  double w = 0.0;
};

/// Converts a holonomic target velocity into a (v, w) command: rotate toward
/// v_h, scale forward speed by the cosine of the remaining angle error.
Command track_holonomic(const DiffDriveState& state, Vec2 v_h,
                        const ActionBounds& bounds,
                        double heading_gain = kHeadingGain);

/// Exact unicycle arc integration (straight line when |w| < 1e-6).
DiffDriveState integrate(const DiffDriveState& state, Command action,
                         double dt);

/// Conservative one-tick bound on the deviation between the commanded
/// holonomic displacement and the arc the tracker actually drives. Used as
/// the epsilon margin in the VO combined radius.
double tracking_error_bound(double v_max, double dt);

}  // namespace orcadrl
