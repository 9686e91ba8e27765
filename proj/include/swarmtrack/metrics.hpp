#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "swarmtrack/engine.hpp"

namespace swarmtrack {

// Events in the final stretch of a run have no time to propagate and are
// dropped from scoring.
constexpr double kEventTailExclusion = 180.0;  // seconds

// A person entering a room. Corridor entries are not events.
struct Event {
  int person_id = 0;
  int room = 0;
  TimeUs t_enter_us = 0;
};

struct EventOutcome {
  Event event;
  std::optional<TimeUs> detect_delay_us;
  std::optional<TimeUs> prop_delay_25_us;
  std::optional<TimeUs> prop_delay_50_us;
  std::optional<TimeUs> prop_delay_75_us;
};

// Censored empirical CDF: steps at each defined delay, denominator counts
// every event, so the curve plateaus at uncensored/total.
struct EcdfCurve {
  std::vector<std::pair<TimeUs, double>> points;  // (delay, cumulative fraction)
  long total = 0;
  long uncensored = 0;

  double plateau() const {
    return total > 0 ? static_cast<double>(uncensored) / static_cast<double>(total) : 0.0;
  }
};

// Room-entry events from the run's transitions, tail-excluded, sorted by time.
std::vector<Event> extract_events(const RunLog& log);

// Delay until some robot observes the person in the entered room during this
// stay (the occupancy window); nullopt when the stay goes unobserved.
std::optional<TimeUs> detection_delay(const Event& e, const RunLog& log);

// Delay until ceil(fraction * n_robots) robots hold a belief matching the
// event (same room, timestamp at or after entry), measured on the snapshot
// grid. Defined only when the event was detected. fraction must be one of
// 0.25, 0.5, 0.75.
std::optional<TimeUs> propagation_delay(const Event& e, const RunLog& log,
                                        double fraction, int n_robots);

EventOutcome score_event(const Event& e, const RunLog& log, int n_robots);

// Throws ConfigError on an empty delay list (no events to score).
EcdfCurve ecdf(const std::vector<std::optional<TimeUs>>& delays);

struct SwarmMetrics {
  int n_robots = 0;
  long total_events = 0;
  long detected = 0;
  double detection_rate = 0.0;
  double reach_rate_25 = 0.0;
  double reach_rate_50 = 0.0;
  double reach_rate_75 = 0.0;
  std::optional<double> median_detect_s;   // over uncensored delays
  std::optional<double> median_prop_25_s;
  std::optional<double> median_prop_50_s;
  std::optional<double> median_prop_75_s;
  EcdfCurve detect;
  EcdfCurve prop25;
  EcdfCurve prop50;
  EcdfCurve prop75;
};

struct MetricsReport {
  std::vector<SwarmMetrics> sizes;  // ascending by n_robots

  const SwarmMetrics* find(int n_robots) const;
};

// Pools events from all runs (across environments) before computing rates
// and ECDFs. Every log must share the given swarm size.
MetricsReport aggregate(const std::vector<RunLog>& logs, int n_robots);

// Union of per-size entries from several reports; sizes must not repeat.
MetricsReport merge_reports(const std::vector<MetricsReport>& reports);

}  // namespace swarmtrack
