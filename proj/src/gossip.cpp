#include "swarmtrack/gossip.hpp"

#include "swarmtrack/errors.hpp"

namespace swarmtrack {

int record_order(const TrackRecord& a, const TrackRecord& b) {
  if (a.person_id != b.person_id)
    throw ContractViolation("record_order: records refer to different persons");
  if (a.timestamp_us != b.timestamp_us)
    return a.timestamp_us < b.timestamp_us ? -1 : 1;
  if (a.observer != b.observer) return a.observer < b.observer ? -1 : 1;
  if (a.location != b.location) return a.location < b.location ? -1 : 1;
  return 0;
}

void BeliefStore::merge_record(const TrackRecord& incoming) {
  auto [it, inserted] = records_.try_emplace(incoming.person_id, incoming);
  if (!inserted && record_order(it->second, incoming) < 0) it->second = incoming;
}

void BeliefStore::merge_store(const BeliefStore& other) {
  for (const auto& [pid, rec] : other.records_) merge_record(rec);
}

const TrackRecord* BeliefStore::find(int person_id) const {
  auto it = records_.find(person_id);
  return it == records_.end() ? nullptr : &it->second;
}

BeliefStore merge_record(BeliefStore store, const TrackRecord& incoming) {
  store.merge_record(incoming);
  return store;
}

BeliefStore merge_stores(BeliefStore mine, const BeliefStore& theirs) {
  mine.merge_store(theirs);
  return mine;
}

std::vector<BeliefStore> exchange(const std::vector<RobotPose>& poses,
                                  std::vector<BeliefStore> stores,
                                  const CommParams& params) {
  // Merge against start-of-round snapshots: one hop per round.
  const std::vector<BeliefStore> snapshots = stores;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    for (std::size_t j = i + 1; j < poses.size(); ++j) {
      if (distance(poses[i].position, poses[j].position) > params.comm_radius)
        continue;
      stores[i].merge_store(snapshots[j]);
      stores[j].merge_store(snapshots[i]);
    }
  }
  return stores;
}

}  // namespace swarmtrack
