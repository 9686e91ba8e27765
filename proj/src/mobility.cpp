#include "swarmtrack/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace swarmtrack {

RobotPose step_robot(const EnvironmentMap& map, const RobotPose& pose, double dt,
                     Rng& rng) {
  const double wall = raycast_wall(map, pose.position, pose.heading);
  const double step = pose.speed * dt;
  const Vec2 dir = heading_dir(pose.heading);

  RobotPose out = pose;
  if (wall - kAgentRadius > step) {
    out.position = pose.position + step * dir;
    return out;
  }
  // Stop at the standoff point and bounce off with a fresh heading.
  const double advance = std::clamp(wall - kAgentRadius, 0.0, step);
  out.position = pose.position + advance * dir;
  out.heading = resample_heading(map, out.position, rng);
  return out;
}

double resample_heading(const EnvironmentMap& map, Vec2 position, Rng& rng) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr double kMinClearance = 2.0 * kAgentRadius;

  for (int attempt = 0; attempt < 64; ++attempt) {
    const double h = rng.uniform() * kTwoPi;
    if (raycast_wall(map, position, h) > kMinClearance) return h;
  }
  return max_clearance_heading(map, position);
}

double max_clearance_heading(const EnvironmentMap& map, Vec2 position) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double best_h = 0.0;
  double best_d = -1.0;
  for (int i = 0; i < 16; ++i) {
    const double h = kTwoPi * i / 16.0;
    const double d = raycast_wall(map, position, h);
    if (d > best_d) {
      best_d = d;
      best_h = h;
    }
  }
  return best_h;
}

}  // namespace swarmtrack
