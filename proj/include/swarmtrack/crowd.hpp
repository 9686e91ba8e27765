#pragma once

#include <optional>
#include <utility>

#include "swarmtrack/environment.hpp"
#include "swarmtrack/sim_time.hpp"

namespace swarmtrack {

// Defaults give a 200 s mean room dwell (20 / 0.1) and a strong bias to
// leave corridors quickly.
struct CrowdParams {
  double check_interval = 20.0;  // seconds between transition checks
  double p_leave_room = 0.1;
  double p_leave_corridor = 0.9;
};

struct PersonState {
  int person_id = 0;
  int location = 0;
  Vec2 position;            // static between transitions
  TimeUs entered_at_us = 0;

  friend bool operator==(const PersonState&, const PersonState&) = default;
};

struct Transition {
  int person_id = 0;
  int from = 0;
  int to = 0;
  TimeUs t_us = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

double p_leave(LocationKind kind, const CrowdParams& params);

// One transition check at time t: with probability p_leave(kind) the person
// hops to a uniformly chosen adjacent location and resamples its position
// there. A location without neighbors always stays.
std::pair<PersonState, std::optional<Transition>> step_person(
    const EnvironmentMap& map, const PersonState& person, TimeUs t,
    const CrowdParams& params, Rng& rng);

// Mean dwell in seconds: check_interval / p_leave(kind), the mean of the
// geometric check count times the interval.
double expected_dwell(LocationKind kind, const CrowdParams& params);

}  // namespace swarmtrack
