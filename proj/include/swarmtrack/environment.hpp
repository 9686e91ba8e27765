#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "swarmtrack/geometry.hpp"
#include "swarmtrack/rng.hpp"

namespace swarmtrack {

// Radius used for wall insets when placing and moving agents.
constexpr double kAgentRadius = 0.2;

enum class LocationKind { Room, Corridor };

const char* to_string(LocationKind kind);

struct Location {
  int id = 0;
  LocationKind kind = LocationKind::Room;
  Rect bounds;
};

// Open wall segment joining two locations. The segment lies on their shared
// boundary; rays and agents pass through it as if the wall were absent.
struct Doorway {
  int loc_a = 0;
  int loc_b = 0;
  Vec2 seg_a;
  Vec2 seg_b;

  double width() const { return distance(seg_a, seg_b); }
  bool vertical() const { return seg_a.x == seg_b.x; }
  bool touches(int loc) const { return loc == loc_a || loc == loc_b; }
  int other(int loc) const { return loc == loc_a ? loc_b : loc_a; }
};

// Immutable office world: disjoint axis-aligned locations joined by doorways
// into a connected adjacency graph. Validated on construction; safe to share
// read-only across threads afterwards.
class EnvironmentMap {
 public:
  EnvironmentMap(std::string name, std::vector<Location> locations,
                 std::vector<Doorway> doorways);

  const std::string& name() const { return name_; }
  const std::vector<Location>& locations() const { return locations_; }
  const std::vector<Doorway>& doorways() const { return doorways_; }
  const std::map<int, std::set<int>>& adjacency() const { return adjacency_; }

  const Location& location(int id) const;  // throws ConfigError on unknown id
  std::vector<int> room_ids() const;       // ascending
  Rect world_bounds() const;

 private:
  void validate() const;

  std::string name_;
  std::vector<Location> locations_;
  std::vector<Doorway> doorways_;
  std::map<int, std::set<int>> adjacency_;
};

std::vector<std::string> builtin_layout_names();  // Env1..Env4
bool is_builtin_layout(const std::string& layout_id);
EnvironmentMap build_layout(const std::string& layout_id);

// The unique location whose half-open rectangle contains p, if any.
std::optional<int> location_at(const EnvironmentMap& map, Vec2 p);

// Distance along `heading` to the first wall hit, passing through doorways
// into adjacent locations. Throws ContractViolation when the origin lies
// outside every location.
double raycast_wall(const EnvironmentMap& map, Vec2 origin, double heading);

// Uniform point over the inset interior of one location, or over the union of
// all inset interiors when no id is given.
Vec2 sample_free_point(const EnvironmentMap& map, Rng& rng,
                       std::optional<int> location_id = std::nullopt);

}  // namespace swarmtrack
