#pragma once

#include "swarmtrack/environment.hpp"

namespace swarmtrack {

struct RobotPose {
  int robot_id = 0;
  Vec2 position;
  double heading = 0.0;  // radians in [0, 2*pi)
  double speed = 0.7;    // m/s, constant within a run

  friend bool operator==(const RobotPose&, const RobotPose&) = default;
};

// Ballistic step: advance in a straight line; when the wall standoff
// (raycast distance minus agent radius) would be crossed, stop there and
// draw a fresh heading.
RobotPose step_robot(const EnvironmentMap& map, const RobotPose& pose, double dt,
                     Rng& rng);

// Uniform over headings with more than 2 * kAgentRadius of wall clearance,
// by rejection sampling (up to 64 tries). Falls back to
// max_clearance_heading, so it always returns.
double resample_heading(const EnvironmentMap& map, Vec2 position, Rng& rng);

// The most open of 16 evenly spaced probe headings; the deterministic
// fallback for degenerate corners where rejection sampling runs out.
double max_clearance_heading(const EnvironmentMap& map, Vec2 position);

}  // namespace swarmtrack
