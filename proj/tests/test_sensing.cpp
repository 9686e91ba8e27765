#include "doctest.h"
#include "swarmtrack/sensing.hpp"

using namespace swarmtrack;

namespace {

EnvironmentMap room_and_corridor() {
  return EnvironmentMap("rc",
                        {{0, LocationKind::Room, {0, 0, 4, 4}},
                         {1, LocationKind::Corridor, {0, 4, 4, 6}}},
                        {{0, 1, {1.5, 4}, {2.5, 4}}});
}

}  // namespace

TEST_CASE("co-located person in range is detected with p_detect = 1") {
  const EnvironmentMap map = room_and_corridor();
  SensingParams params;
  params.p_detect = 1.0;
  const RobotPose robot{3, {1, 1}, 0, 0.25};
  const std::vector<PersonState> persons = {{7, 0, {2, 2}, 0}};  // dist ~1.41
  Rng rng(1);
  const TimeUs t = 42 * kUsPerSecond;
  const auto records = sense(map, robot, persons, t, params, rng);
  REQUIRE(records.size() == 1);
  CHECK(records[0].person_id == 7);
  CHECK(records[0].location == 0);
  CHECK(records[0].timestamp_us == t);
  CHECK(records[0].observer == 3);
}

TEST_CASE("walls are opaque: nearby person in the adjacent location is missed") {
  const EnvironmentMap map = room_and_corridor();
  SensingParams params;
  params.p_detect = 1.0;
  // robot in the corridor at (2, 4.5); person in the room at (2, 3.5): 1 m apart
  const RobotPose robot{0, {2, 4.5}, 0, 0.25};
  const std::vector<PersonState> persons = {{0, 0, {2, 3.5}, 0}};
  Rng rng(1);
  CHECK(sense(map, robot, persons, 0, params, rng).empty());
}

TEST_CASE("out-of-range person in the same room is missed") {
  const EnvironmentMap wide("wide", {{0, LocationKind::Room, {0, 0, 10, 4}}}, {});
  SensingParams params;
  params.p_detect = 1.0;
  const RobotPose robot{0, {1, 2}, 0, 0.25};
  const std::vector<PersonState> persons = {{0, 0, {9, 2}, 0}};  // 8 m away
  Rng rng(1);
  CHECK(sense(wide, robot, persons, 0, params, rng).empty());
}

TEST_CASE("detection frequency matches p_detect") {
  const EnvironmentMap map = room_and_corridor();
  SensingParams params;  // p_detect = 0.9
  const RobotPose robot{0, {1, 1}, 0, 0.25};
  const std::vector<PersonState> persons = {{0, 0, {2, 2}, 0}};
  Rng rng(8);
  int hits = 0;
  const int attempts = 10000;
  for (int i = 0; i < attempts; ++i)
    hits += static_cast<int>(!sense(map, robot, persons, 0, params, rng).empty());
  const double freq = static_cast<double>(hits) / attempts;
  CHECK(freq > 0.89);
  CHECK(freq < 0.91);
}

TEST_CASE("each eligible person gets an independent attempt") {
  const EnvironmentMap map = room_and_corridor();
  SensingParams params;
  params.p_detect = 1.0;
  const RobotPose robot{0, {2, 2}, 0, 0.25};
  const std::vector<PersonState> persons = {
      {0, 0, {1, 2}, 0}, {1, 0, {3, 2}, 0}, {2, 1, {2, 5}, 0}};  // third is walled off
  Rng rng(1);
  const auto records = sense(map, robot, persons, 0, params, rng);
  REQUIRE(records.size() == 2);
  CHECK(records[0].person_id == 0);
  CHECK(records[1].person_id == 1);
}
