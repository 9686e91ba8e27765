#pragma once

#include <vector>

#include "swarmtrack/crowd.hpp"
#include "swarmtrack/gossip.hpp"
#include "swarmtrack/mobility.hpp"

namespace swarmtrack {

// Bernoulli detection channel standing in for the face-recognition stack.
struct SensingParams {
  double detect_radius = 2.0;  // meters
  double sense_period = 1.0;   // seconds between attempts
  double p_detect = 0.9;       // success probability per attempt
};

// One detection attempt per person that shares the robot's location and is
// within detect_radius. Co-location is required, so walls are opaque; there
// are no false identifications. Emitted records carry timestamp t and the
// person's true location.
std::vector<TrackRecord> sense(const EnvironmentMap& map, const RobotPose& robot,
                               const std::vector<PersonState>& persons, TimeUs t,
                               const SensingParams& params, Rng& rng);

}  // namespace swarmtrack
