#include "swarmtrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "swarmtrack/errors.hpp"

namespace swarmtrack {

namespace {

std::optional<double> median_s(std::vector<TimeUs> delays) {
  if (delays.empty()) return std::nullopt;
  std::sort(delays.begin(), delays.end());
  const std::size_t n = delays.size();
  if (n % 2 == 1) return us_to_seconds(delays[n / 2]);
  return 0.5 * (us_to_seconds(delays[n / 2 - 1]) + us_to_seconds(delays[n / 2]));
}

// Time of the person's next transition after t, or +inf sentinel.
TimeUs next_transition_after(const RunLog& log, int person_id, TimeUs t) {
  for (const Transition& tr : log.transitions)
    if (tr.person_id == person_id && tr.t_us > t) return tr.t_us;
  return std::numeric_limits<TimeUs>::max();
}

}  // namespace

std::vector<Event> extract_events(const RunLog& log) {
  const TimeUs cutoff = log.config.duration_us() - seconds_to_us(kEventTailExclusion);
  std::vector<Event> events;
  for (const Transition& tr : log.transitions) {
    if (log.map.location(tr.to).kind != LocationKind::Room) continue;
    if (tr.t_us > cutoff) continue;
    events.push_back(Event{tr.person_id, tr.to, tr.t_us});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.t_enter_us < b.t_enter_us; });
  return events;
}

std::optional<TimeUs> detection_delay(const Event& e, const RunLog& log) {
  const TimeUs window_end = next_transition_after(log, e.person_id, e.t_enter_us);
  std::optional<TimeUs> best;
  for (const Observation& obs : log.observations) {
    if (obs.record.person_id != e.person_id) continue;
    if (obs.record.location != e.room) continue;
    const TimeUs ts = obs.record.timestamp_us;
    if (ts < e.t_enter_us || ts >= window_end) continue;  // occupancy window
    const TimeUs delay = ts - e.t_enter_us;
    if (!best || delay < *best) best = delay;
  }
  return best;
}

std::optional<TimeUs> propagation_delay(const Event& e, const RunLog& log,
                                        double fraction, int n_robots) {
  if (fraction != 0.25 && fraction != 0.5 && fraction != 0.75)
    throw ContractViolation("propagation_delay: fraction must be 0.25, 0.5 or 0.75");
  if (!detection_delay(e, log)) return std::nullopt;

  const int threshold = static_cast<int>(std::ceil(fraction * n_robots));

  // Belief rows are grouped by snapshot time in ascending order. A robot is
  // aware at a snapshot when its stored record matches the event's room with
  // a timestamp at or after entry; a later overwrite can retract awareness,
  // so each snapshot is evaluated on its own rows.
  std::set<int> aware;
  TimeUs snapshot_t = -1;
  auto flush = [&]() -> std::optional<TimeUs> {
    if (snapshot_t >= e.t_enter_us && static_cast<int>(aware.size()) >= threshold)
      return snapshot_t - e.t_enter_us;
    return std::nullopt;
  };
  for (const BeliefRow& row : log.belief_rows) {
    if (row.t_us != snapshot_t) {
      if (auto hit = flush()) return hit;
      snapshot_t = row.t_us;
      aware.clear();
    }
    if (row.record.person_id == e.person_id && row.record.location == e.room &&
        row.record.timestamp_us >= e.t_enter_us)
      aware.insert(row.robot_id);
  }
  return flush();
}

EventOutcome score_event(const Event& e, const RunLog& log, int n_robots) {
  EventOutcome out;
  out.event = e;
  out.detect_delay_us = detection_delay(e, log);
  out.prop_delay_25_us = propagation_delay(e, log, 0.25, n_robots);
  out.prop_delay_50_us = propagation_delay(e, log, 0.5, n_robots);
  out.prop_delay_75_us = propagation_delay(e, log, 0.75, n_robots);
  return out;
}

EcdfCurve ecdf(const std::vector<std::optional<TimeUs>>& delays) {
  if (delays.empty()) throw ConfigError("ecdf: no events to score");

  EcdfCurve curve;
  curve.total = static_cast<long>(delays.size());
  std::vector<TimeUs> defined;
  for (const auto& d : delays)
    if (d) defined.push_back(*d);
  curve.uncensored = static_cast<long>(defined.size());
  std::sort(defined.begin(), defined.end());

  long count = 0;
  for (std::size_t i = 0; i < defined.size(); ++i) {
    ++count;
    const bool last_of_value = i + 1 == defined.size() || defined[i + 1] != defined[i];
    if (last_of_value)
      curve.points.emplace_back(defined[i],
                                static_cast<double>(count) / static_cast<double>(curve.total));
  }
  return curve;
}

const SwarmMetrics* MetricsReport::find(int n_robots) const {
  for (const SwarmMetrics& m : sizes)
    if (m.n_robots == n_robots) return &m;
  return nullptr;
}

MetricsReport aggregate(const std::vector<RunLog>& logs, int n_robots) {
  std::vector<std::optional<TimeUs>> detect, prop25, prop50, prop75;
  for (const RunLog& log : logs) {
    if (log.config.n_robots != n_robots)
      throw ConfigError("aggregate: mixed swarm sizes (expected " +
                        std::to_string(n_robots) + ", got " +
                        std::to_string(log.config.n_robots) + ")");
    for (const Event& e : extract_events(log)) {
      const EventOutcome o = score_event(e, log, n_robots);
      detect.push_back(o.detect_delay_us);
      prop25.push_back(o.prop_delay_25_us);
      prop50.push_back(o.prop_delay_50_us);
      prop75.push_back(o.prop_delay_75_us);
    }
  }

  SwarmMetrics m;
  m.n_robots = n_robots;
  m.total_events = static_cast<long>(detect.size());

  auto defined_of = [](const std::vector<std::optional<TimeUs>>& v) {
    std::vector<TimeUs> out;
    for (const auto& d : v)
      if (d) out.push_back(*d);
    return out;
  };
  const auto detect_defined = defined_of(detect);
  m.detected = static_cast<long>(detect_defined.size());
  if (m.total_events > 0) {
    const double total = static_cast<double>(m.total_events);
    m.detection_rate = static_cast<double>(m.detected) / total;
    m.reach_rate_25 = static_cast<double>(defined_of(prop25).size()) / total;
    m.reach_rate_50 = static_cast<double>(defined_of(prop50).size()) / total;
    m.reach_rate_75 = static_cast<double>(defined_of(prop75).size()) / total;
    m.median_detect_s = median_s(detect_defined);
    m.median_prop_25_s = median_s(defined_of(prop25));
    m.median_prop_50_s = median_s(defined_of(prop50));
    m.median_prop_75_s = median_s(defined_of(prop75));
    m.detect = ecdf(detect);
    m.prop25 = ecdf(prop25);
    m.prop50 = ecdf(prop50);
    m.prop75 = ecdf(prop75);
  }

  MetricsReport report;
  report.sizes.push_back(std::move(m));
  return report;
}

MetricsReport merge_reports(const std::vector<MetricsReport>& reports) {
  MetricsReport out;
  for (const MetricsReport& r : reports)
    for (const SwarmMetrics& m : r.sizes) {
      if (out.find(m.n_robots))
        throw ConfigError("merge_reports: duplicate swarm size " +
                          std::to_string(m.n_robots));
      out.sizes.push_back(m);
    }
  std::sort(out.sizes.begin(), out.sizes.end(),
            [](const SwarmMetrics& a, const SwarmMetrics& b) {
              return a.n_robots < b.n_robots;
            });
  return out;
}

}  // namespace swarmtrack
