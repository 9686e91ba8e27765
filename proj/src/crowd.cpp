#include "swarmtrack/crowd.hpp"

namespace swarmtrack {

double p_leave(LocationKind kind, const CrowdParams& params) {
  return kind == LocationKind::Room ? params.p_leave_room
                                    : params.p_leave_corridor;
}

std::pair<PersonState, std::optional<Transition>> step_person(
    const EnvironmentMap& map, const PersonState& person, TimeUs t,
    const CrowdParams& params, Rng& rng) {
  const LocationKind kind = map.location(person.location).kind;
  if (rng.uniform() >= p_leave(kind, params)) return {person, std::nullopt};

  const std::set<int>& neighbors = map.adjacency().at(person.location);
  if (neighbors.empty()) return {person, std::nullopt};

  auto it = neighbors.begin();
  std::advance(it, static_cast<long>(rng.uniform_below(neighbors.size())));
  const int dest = *it;

  PersonState next = person;
  next.location = dest;
  next.position = sample_free_point(map, rng, dest);
  next.entered_at_us = t;
  return {next, Transition{person.person_id, person.location, dest, t}};
}

double expected_dwell(LocationKind kind, const CrowdParams& params) {
  return params.check_interval / p_leave(kind, params);
}

}  // namespace swarmtrack
