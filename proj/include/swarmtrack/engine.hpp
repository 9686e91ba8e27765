#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swarmtrack/crowd.hpp"
#include "swarmtrack/environment.hpp"
#include "swarmtrack/gossip.hpp"
#include "swarmtrack/sensing.hpp"

namespace swarmtrack {

struct SimConfig {
  std::string layout = "Env1";   // builtin name or path to a layout spec file
  std::string layout_spec_text;  // inline layout JSON; overrides `layout` when set
  int n_robots = 4;
  int n_persons = 4;
  double duration = 600.0;      // seconds
  double dt = 0.1;              // seconds per tick
  std::uint64_t seed = 0;
  double snapshot_period = 1.0; // seconds between belief snapshots
  double robot_speed = 0.7;     // m/s
  CrowdParams crowd;
  SensingParams sensing;
  CommParams comm;

  TimeUs duration_us() const { return seconds_to_us(duration); }
};

struct Observation {
  TimeUs t_us = 0;
  int robot_id = 0;
  TrackRecord record;

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct BeliefRow {
  TimeUs t_us = 0;
  int robot_id = 0;
  TrackRecord record;

  friend bool operator==(const BeliefRow&, const BeliefRow&) = default;
};

// Complete record of one run: everything the metrics pipeline needs.
struct RunLog {
  SimConfig config;
  EnvironmentMap map;  // the resolved layout the run used
  std::vector<Transition> transitions;
  std::vector<Observation> observations;
  std::vector<BeliefRow> belief_rows;
};

// Throws ConfigError when the config violates its invariants against the map.
void validate_config(const SimConfig& config, const EnvironmentMap& map);

// Deterministic time-stepped simulation. Each tick applies, in fixed order:
// crowd checks, robot motion, sensing (own observations merge into the
// robot's store), gossip exchange, then log appends. Subsystems draw from
// independent named RNG streams derived from the seed.
class SimState {
 public:
  explicit SimState(const SimConfig& config);

  bool done() const { return tick_index_ >= total_ticks_; }
  TimeUs now_us() const { return tick_index_ * dt_us_; }
  std::int64_t ticks_total() const { return total_ticks_; }

  void step();  // advance one tick; requires !done()

  const EnvironmentMap& map() const { return log_.map; }
  const std::vector<RobotPose>& robots() const { return robots_; }
  const std::vector<PersonState>& persons() const { return persons_; }
  const std::vector<BeliefStore>& stores() const { return stores_; }
  const RunLog& log() const { return log_; }
  RunLog release_log() { return std::move(log_); }

 private:
  void crowd_checks(TimeUs t);
  void move_robots();
  void sense_all(TimeUs t);
  void snapshot_beliefs(TimeUs t);

  RunLog log_;
  std::vector<RobotPose> robots_;
  std::vector<PersonState> persons_;
  std::vector<BeliefStore> stores_;
  Rng rng_crowd_;
  Rng rng_mobility_;
  Rng rng_sensing_;
  TimeUs dt_us_ = 0;
  TimeUs check_us_ = 0;
  TimeUs sense_us_ = 0;
  TimeUs snapshot_us_ = 0;
  std::int64_t tick_index_ = 0;
  std::int64_t total_ticks_ = 0;
};

SimState init_sim(const SimConfig& config);
void tick(SimState& state);
RunLog run(const SimConfig& config);

}  // namespace swarmtrack
