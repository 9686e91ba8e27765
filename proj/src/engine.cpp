#include "swarmtrack/engine.hpp"

#include <cmath>
#include <numbers>

#include "swarmtrack/errors.hpp"
#include "swarmtrack/logio.hpp"

namespace swarmtrack {

namespace {

// Named RNG stream tags; each subsystem draws from its own stream so one
// subsystem's consumption never perturbs another's sequence.
constexpr std::uint64_t kStreamPlacement = 1;
constexpr std::uint64_t kStreamCrowd = 2;
constexpr std::uint64_t kStreamMobility = 3;
constexpr std::uint64_t kStreamSensing = 4;

RunLog make_log(const SimConfig& config) {
  SimConfig resolved = config;
  EnvironmentMap map = resolve_layout(resolved);
  validate_config(resolved, map);
  return RunLog{std::move(resolved), std::move(map), {}, {}, {}};
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

void validate_config(const SimConfig& config, const EnvironmentMap& map) {
  require(config.n_robots >= 1, "n_robots must be at least 1");
  require(config.n_persons >= 0, "n_persons must be non-negative");
  require(config.duration > 0, "duration must be positive");
  require(config.dt > 0, "dt must be positive");
  require(config.snapshot_period > 0, "snapshot_period must be positive");
  require(config.robot_speed > 0, "robot_speed must be positive");

  require(config.crowd.check_interval > 0, "crowd.check_interval must be positive");
  require(config.crowd.p_leave_room > 0 &&
              config.crowd.p_leave_room < config.crowd.p_leave_corridor &&
              config.crowd.p_leave_corridor <= 1,
          "crowd probabilities must satisfy 0 < p_leave_room < p_leave_corridor <= 1");

  require(config.sensing.detect_radius > 0, "sensing.detect_radius must be positive");
  require(config.sensing.sense_period > 0, "sensing.sense_period must be positive");
  require(config.sensing.p_detect > 0 && config.sensing.p_detect <= 1,
          "sensing.p_detect must be in (0, 1]");
  require(config.comm.comm_radius > 0, "comm.comm_radius must be positive");

  const TimeUs dt_us = seconds_to_us(config.dt);
  require(dt_us > 0, "dt rounds to zero microseconds");
  require(seconds_to_us(config.sensing.sense_period) % dt_us == 0,
          "dt must divide sensing.sense_period");
  require(seconds_to_us(config.crowd.check_interval) % dt_us == 0,
          "dt must divide crowd.check_interval");
  require(seconds_to_us(config.snapshot_period) % dt_us == 0,
          "dt must divide snapshot_period");

  const std::size_t n_rooms = map.room_ids().size();
  require(static_cast<std::size_t>(config.n_persons) <= n_rooms,
          "n_persons (" + std::to_string(config.n_persons) +
              ") exceeds the number of rooms (" + std::to_string(n_rooms) + ")");
}

SimState::SimState(const SimConfig& config)
    : log_(make_log(config)),
      rng_crowd_(Rng(mix_index(log_.config.seed, kStreamCrowd))),
      rng_mobility_(Rng(mix_index(log_.config.seed, kStreamMobility))),
      rng_sensing_(Rng(mix_index(log_.config.seed, kStreamSensing))) {
  const SimConfig& cfg = log_.config;
  dt_us_ = seconds_to_us(cfg.dt);
  check_us_ = seconds_to_us(cfg.crowd.check_interval);
  sense_us_ = seconds_to_us(cfg.sensing.sense_period);
  snapshot_us_ = seconds_to_us(cfg.snapshot_period);
  total_ticks_ = cfg.duration_us() / dt_us_;

  Rng placement(mix_index(cfg.seed, kStreamPlacement));

  // Persons occupy the lowest-id rooms, one each, from t = 0.
  const std::vector<int> rooms = map().room_ids();
  for (int i = 0; i < cfg.n_persons; ++i) {
    PersonState p;
    p.person_id = i;
    p.location = rooms[static_cast<std::size_t>(i)];
    p.position = sample_free_point(map(), placement, p.location);
    p.entered_at_us = 0;
    persons_.push_back(p);
  }

  // Robots start anywhere in the world with uniform random headings.
  for (int i = 0; i < cfg.n_robots; ++i) {
    RobotPose r;
    r.robot_id = i;
    r.position = sample_free_point(map(), placement);
    r.heading = placement.uniform() * 2.0 * std::numbers::pi;
    r.speed = cfg.robot_speed;
    robots_.push_back(r);
  }
  stores_.resize(static_cast<std::size_t>(cfg.n_robots));
}

void SimState::step() {
  if (done()) throw ContractViolation("tick called past the configured duration");
  const TimeUs t = now_us();

  // Fixed subsystem order: crowd, motion, sensing, gossip, snapshot. Crowd
  // checks skip t = 0 so persons hold their fixed starting rooms.
  if (t > 0 && t % check_us_ == 0) crowd_checks(t);
  move_robots();
  if (t % sense_us_ == 0) sense_all(t);
  stores_ = exchange(robots_, std::move(stores_), log_.config.comm);
  if (t % snapshot_us_ == 0) snapshot_beliefs(t);

  ++tick_index_;
}

void SimState::crowd_checks(TimeUs t) {
  for (PersonState& person : persons_) {
    auto [next, transition] = step_person(map(), person, t, log_.config.crowd, rng_crowd_);
    person = next;
    if (transition) log_.transitions.push_back(*transition);
  }
}

void SimState::move_robots() {
  const double dt = us_to_seconds(dt_us_);
  for (RobotPose& robot : robots_)
    robot = step_robot(map(), robot, dt, rng_mobility_);
}

void SimState::sense_all(TimeUs t) {
  for (const RobotPose& robot : robots_) {
    const auto records = sense(map(), robot, persons_, t, log_.config.sensing, rng_sensing_);
    for (const TrackRecord& rec : records) {
      log_.observations.push_back(Observation{t, robot.robot_id, rec});
      stores_[static_cast<std::size_t>(robot.robot_id)].merge_record(rec);
    }
  }
}

void SimState::snapshot_beliefs(TimeUs t) {
  for (std::size_t r = 0; r < stores_.size(); ++r)
    for (const auto& [pid, rec] : stores_[r].records())
      log_.belief_rows.push_back(BeliefRow{t, static_cast<int>(r), rec});
}

SimState init_sim(const SimConfig& config) { return SimState(config); }

void tick(SimState& state) { state.step(); }

RunLog run(const SimConfig& config) {
  SimState state(config);
  while (!state.done()) state.step();
  return state.release_log();
}

}  // namespace swarmtrack
