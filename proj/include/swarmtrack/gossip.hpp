#pragma once

#include <map>
#include <vector>

#include "swarmtrack/mobility.hpp"
#include "swarmtrack/sim_time.hpp"

namespace swarmtrack {

// One person sighting; the unit robots exchange.
struct TrackRecord {
  int person_id = 0;
  int location = 0;
  TimeUs timestamp_us = 0;  // observation time
  int observer = 0;         // robot that made the observation

  double timestamp_s() const { return us_to_seconds(timestamp_us); }
  friend bool operator==(const TrackRecord&, const TrackRecord&) = default;
};

// Total order over records of the same person: timestamp, then observer,
// then location, ascending. The greater record wins merges; breaking
// timestamp ties this way keeps the merge commutative. Returns -1/0/+1;
// throws ContractViolation on mismatched person ids.
int record_order(const TrackRecord& a, const TrackRecord& b);

// Per-robot map from person id to the best-known record. Merging keeps the
// record_order-greater record per person, so stored timestamps never
// decrease.
class BeliefStore {
 public:
  void merge_record(const TrackRecord& incoming);
  void merge_store(const BeliefStore& other);

  const std::map<int, TrackRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const TrackRecord* find(int person_id) const;

  friend bool operator==(const BeliefStore&, const BeliefStore&) = default;

 private:
  std::map<int, TrackRecord> records_;
};

// Value-returning forms of the merge operations.
BeliefStore merge_record(BeliefStore store, const TrackRecord& incoming);
BeliefStore merge_stores(BeliefStore mine, const BeliefStore& theirs);

struct CommParams {
  double comm_radius = 2.5;  // meters; walls do not block communication
};

// One gossip round: every unordered pair within comm_radius merges the
// other's start-of-round snapshot. Information travels one hop per round;
// no within-round relay. poses and stores are index-aligned.
std::vector<BeliefStore> exchange(const std::vector<RobotPose>& poses,
                                  std::vector<BeliefStore> stores,
                                  const CommParams& params);

}  // namespace swarmtrack
