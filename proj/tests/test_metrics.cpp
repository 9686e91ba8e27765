#include "doctest.h"
#include "swarmtrack/engine.hpp"
#include "swarmtrack/errors.hpp"
#include "swarmtrack/metrics.hpp"

using namespace swarmtrack;

namespace {

TimeUs sec(double s) { return seconds_to_us(s); }

EnvironmentMap scripted_map() {
  // roomA (0) and roomB (2) on a corridor (1)
  return EnvironmentMap("scripted",
                        {{0, LocationKind::Room, {0, 0, 4, 4}},
                         {1, LocationKind::Corridor, {0, 4, 8, 6}},
                         {2, LocationKind::Room, {4, 0, 8, 4}}},
                        {{0, 1, {1.5, 4}, {2.5, 4}}, {2, 1, {5.5, 4}, {6.5, 4}}});
}

// Hand-scripted 3-robot, 1-person log.
//
// Timeline: the person enters roomB at t=100 (event 1), returns to the
// corridor at 300, enters roomA at 340 (event 2, never observed), and
// re-enters roomB at 440 (inside the 180 s tail, not an event).
// Robot 0 observes the roomB stay at t=130; awareness snapshots show robots
// 0/1/2 holding that record from t=130/170/240.
//
// Hand-computed outcomes, frozen as the metrics oracle:
//   event 1: detect 30; prop thresholds 1,2,3 robots cross at 130/170/240,
//            so delays 30/70/140 for fractions 25%/50%/75% of 3 robots
//   event 2: censored on every metric
RunLog scripted_log() {
  SimConfig config;
  config.layout = "scripted";
  config.n_robots = 3;
  config.n_persons = 1;
  config.duration = 600.0;

  RunLog log{config, scripted_map(), {}, {}, {}};

  log.transitions = {
      {0, 1, 2, sec(100)},
      {0, 2, 1, sec(300)},
      {0, 1, 0, sec(340)},
      {0, 0, 1, sec(430)},
      {0, 1, 2, sec(440)},
  };

  const TrackRecord obs_roomB{0, 2, sec(130), 0};
  log.observations = {
      {sec(130), 0, obs_roomB},
      {sec(310), 2, TrackRecord{0, 1, sec(310), 2}},  // corridor sighting, no event
      {sec(450), 1, TrackRecord{0, 2, sec(450), 1}},  // next roomB stay
  };

  // Sparse full-state snapshots. At t=400 robot 0's record has been
  // overwritten by an unbacked roomA record, which must not rescue the
  // undetected event 2.
  log.belief_rows = {
      {sec(130), 0, obs_roomB},
      {sec(170), 0, obs_roomB},
      {sec(170), 1, obs_roomB},
      {sec(240), 0, obs_roomB},
      {sec(240), 1, obs_roomB},
      {sec(240), 2, obs_roomB},
      {sec(400), 0, TrackRecord{0, 0, sec(350), 1}},
      {sec(400), 1, obs_roomB},
      {sec(400), 2, obs_roomB},
  };
  return log;
}

}  // namespace

TEST_CASE("extract_events keeps room entries outside the 180 s tail") {
  const RunLog log = scripted_log();
  const auto events = extract_events(log);
  REQUIRE(events.size() == 2);
  CHECK(events[0].person_id == 0);
  CHECK(events[0].room == 2);
  CHECK(events[0].t_enter_us == sec(100));
  CHECK(events[1].room == 0);
  CHECK(events[1].t_enter_us == sec(340));
  // the 440 s entry exceeds 600 - 180 = 420 and is dropped;
  // corridor entries at 300 and 430 are not events
}

TEST_CASE("extract_events includes the cutoff boundary itself") {
  RunLog log = scripted_log();
  log.transitions.push_back({0, 1, 2, sec(420)});
  const auto events = extract_events(log);
  CHECK(events.back().t_enter_us == sec(420));
}

TEST_CASE("detection delay comes from the occupancy window only") {
  const RunLog log = scripted_log();
  const auto events = extract_events(log);

  SUBCASE("matching observation 30 s after entry") {
    CHECK(detection_delay(events[0], log) == sec(30));
  }
  SUBCASE("unobserved stay is censored") {
    CHECK(!detection_delay(events[1], log).has_value());
  }
  SUBCASE("observation from the next stay in the same room does not count") {
    // strip the in-window observation; only the 450 s next-stay one remains
    RunLog pruned = scripted_log();
    pruned.observations.erase(pruned.observations.begin());
    CHECK(!detection_delay(events[0], pruned).has_value());
  }
}

TEST_CASE("propagation delays cross thresholds 1, 2, 3 at the scripted snapshots") {
  const RunLog log = scripted_log();
  const auto events = extract_events(log);

  // ceil(f * 3) = 1, 2, 3 for f = 0.25, 0.5, 0.75
  CHECK(propagation_delay(events[0], log, 0.25, 3) == sec(30));
  CHECK(propagation_delay(events[0], log, 0.5, 3) == sec(70));
  CHECK(propagation_delay(events[0], log, 0.75, 3) == sec(140));

  // undetected event: none, even though a (spurious) matching belief exists
  CHECK(!propagation_delay(events[1], log, 0.25, 3).has_value());

  CHECK_THROWS_AS(propagation_delay(events[0], log, 0.3, 3), ContractViolation);
}

TEST_CASE("score_event bundles the oracle values") {
  const RunLog log = scripted_log();
  const auto events = extract_events(log);
  const EventOutcome o = score_event(events[0], log, 3);
  CHECK(o.detect_delay_us == sec(30));
  CHECK(o.prop_delay_25_us == sec(30));
  CHECK(o.prop_delay_50_us == sec(70));
  CHECK(o.prop_delay_75_us == sec(140));
}

TEST_CASE("thresholds use the ceiling rule") {
  // For n=4, 25% needs ceil(1) = 1 robot; the detecting robot satisfies it
  // at the first snapshot at/after the observation.
  RunLog log = scripted_log();
  log.config.n_robots = 4;
  const auto events = extract_events(log);
  CHECK(propagation_delay(events[0], log, 0.25, 4) == sec(30));
  // 75% of 4 robots needs 3; crossed at the scripted 240 s snapshot
  CHECK(propagation_delay(events[0], log, 0.75, 4) == sec(140));
}

TEST_CASE("ecdf counts censored events in the denominator") {
  SUBCASE("mixed censoring") {
    const EcdfCurve c = ecdf({sec(10), sec(20), sec(30), std::nullopt});
    REQUIRE(c.points.size() == 3);
    CHECK(c.points[0] == std::pair<TimeUs, double>{sec(10), 0.25});
    CHECK(c.points[1] == std::pair<TimeUs, double>{sec(20), 0.5});
    CHECK(c.points[2] == std::pair<TimeUs, double>{sec(30), 0.75});
    CHECK(c.plateau() == doctest::Approx(0.75));
  }
  SUBCASE("all censored is a flat zero curve") {
    const EcdfCurve c = ecdf({std::nullopt, std::nullopt});
    CHECK(c.points.empty());
    CHECK(c.plateau() == 0.0);
    CHECK(c.total == 2);
  }
  SUBCASE("duplicate delays collapse into one step") {
    const EcdfCurve c = ecdf({sec(10), sec(10)});
    REQUIRE(c.points.size() == 1);
    CHECK(c.points[0] == std::pair<TimeUs, double>{sec(10), 1.0});
  }
  SUBCASE("empty input is an error") {
    CHECK_THROWS_AS(ecdf({}), ConfigError);
  }
  SUBCASE("monotone non-decreasing in [0,1]") {
    const EcdfCurve c = ecdf({sec(5), sec(1), std::nullopt, sec(5), sec(9)});
    double prev = 0.0;
    for (const auto& [d, f] : c.points) {
      CHECK(f >= prev);
      CHECK(f <= 1.0);
      prev = f;
    }
  }
}

TEST_CASE("aggregate pools events across logs and rejects mixed sizes") {
  const RunLog a = scripted_log();

  RunLog b = scripted_log();
  b.transitions = {{0, 1, 0, sec(60)}};  // one unobserved roomA entry
  b.observations.clear();
  b.belief_rows.clear();

  const MetricsReport report = aggregate({a, b}, 3);
  REQUIRE(report.sizes.size() == 1);
  const SwarmMetrics& m = report.sizes[0];
  CHECK(m.total_events == 3);
  CHECK(m.detected == 1);
  CHECK(m.detection_rate == doctest::Approx(1.0 / 3.0));
  CHECK(m.detect.total == 3);
  CHECK(m.detect.uncensored == 1);
  CHECK(m.median_detect_s == doctest::Approx(30.0));

  RunLog mixed = scripted_log();
  mixed.config.n_robots = 4;
  CHECK_THROWS_AS(aggregate({a, mixed}, 3), ConfigError);
}

TEST_CASE("single-log aggregate equals the per-event computation") {
  const RunLog log = scripted_log();
  const MetricsReport report = aggregate({log}, 3);
  const SwarmMetrics& m = report.sizes[0];
  CHECK(m.total_events == 2);
  CHECK(m.detected == 1);
  CHECK(m.reach_rate_25 == doctest::Approx(0.5));
  CHECK(m.reach_rate_50 == doctest::Approx(0.5));
  CHECK(m.reach_rate_75 == doctest::Approx(0.5));
  REQUIRE(m.prop50.points.size() == 1);
  CHECK(m.prop50.points[0].first == sec(70));
}

TEST_CASE("outcomes from a real run keep the delay ordering invariants") {
  SimConfig c;
  c.layout = "Env1";
  c.n_robots = 4;
  c.duration = 300.0;
  c.seed = 11;
  const RunLog log = run(c);
  for (const Event& e : extract_events(log)) {
    const EventOutcome o = score_event(e, log, c.n_robots);
    if (o.prop_delay_25_us) {
      REQUIRE(o.detect_delay_us.has_value());
      CHECK(*o.prop_delay_25_us >= *o.detect_delay_us);
    }
    if (o.prop_delay_50_us) {
      REQUIRE(o.prop_delay_25_us.has_value());
      CHECK(*o.prop_delay_50_us >= *o.prop_delay_25_us);
    }
    if (o.prop_delay_75_us) {
      REQUIRE(o.prop_delay_50_us.has_value());
      CHECK(*o.prop_delay_75_us >= *o.prop_delay_50_us);
    }
  }
}
