#include "swarmtrack/sensing.hpp"

namespace swarmtrack {

std::vector<TrackRecord> sense(const EnvironmentMap& map, const RobotPose& robot,
                               const std::vector<PersonState>& persons, TimeUs t,
                               const SensingParams& params, Rng& rng) {
  std::vector<TrackRecord> out;
  const auto robot_loc = location_at(map, robot.position);
  if (!robot_loc) return out;

  for (const PersonState& person : persons) {
    if (person.location != *robot_loc) continue;
    if (distance(robot.position, person.position) > params.detect_radius) continue;
    // One Bernoulli draw per eligible person, in person order.
    if (!rng.bernoulli(params.p_detect)) continue;
    out.push_back(TrackRecord{person.person_id, person.location, t, robot.robot_id});
  }
  return out;
}

}  // namespace swarmtrack
