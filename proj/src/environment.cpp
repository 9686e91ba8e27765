#include "swarmtrack/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "swarmtrack/errors.hpp"

namespace swarmtrack {

namespace {

constexpr double kMinRoomArea = 4.0;       // m^2
constexpr double kMinCorridorWidth = 1.2;  // m
constexpr double kMinDoorWidth = 0.8;      // m

std::string describe(const Doorway& d, std::size_t index) {
  std::ostringstream os;
  os << "doorway " << index << " (" << d.loc_a << "-" << d.loc_b << ")";
  return os.str();
}

}  // namespace

const char* to_string(LocationKind kind) {
  return kind == LocationKind::Room ? "room" : "corridor";
}

EnvironmentMap::EnvironmentMap(std::string name, std::vector<Location> locations,
                               std::vector<Doorway> doorways)
    : name_(std::move(name)),
      locations_(std::move(locations)),
      doorways_(std::move(doorways)) {
  for (const Location& loc : locations_) adjacency_[loc.id];
  for (const Doorway& d : doorways_) {
    adjacency_[d.loc_a].insert(d.loc_b);
    adjacency_[d.loc_b].insert(d.loc_a);
  }
  validate();
}

const Location& EnvironmentMap::location(int id) const {
  for (const Location& loc : locations_)
    if (loc.id == id) return loc;
  throw ConfigError("unknown location id " + std::to_string(id) + " in layout '" +
                    name_ + "'");
}

std::vector<int> EnvironmentMap::room_ids() const {
  std::vector<int> ids;
  for (const Location& loc : locations_)
    if (loc.kind == LocationKind::Room) ids.push_back(loc.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

Rect EnvironmentMap::world_bounds() const {
  Rect out = locations_.front().bounds;
  for (const Location& loc : locations_) {
    out.x_min = std::min(out.x_min, loc.bounds.x_min);
    out.y_min = std::min(out.y_min, loc.bounds.y_min);
    out.x_max = std::max(out.x_max, loc.bounds.x_max);
    out.y_max = std::max(out.y_max, loc.bounds.y_max);
  }
  return out;
}

void EnvironmentMap::validate() const {
  if (locations_.empty()) throw ConfigError("layout '" + name_ + "' has no locations");

  for (std::size_t i = 0; i < locations_.size(); ++i) {
    const Location& loc = locations_[i];
    const std::string label = "location " + std::to_string(loc.id);
    if (!loc.bounds.valid())
      throw ConfigError(label + ": invalid rectangle (min must be below max)");
    if (loc.kind == LocationKind::Room && loc.bounds.area() < kMinRoomArea)
      throw ConfigError(label + ": room area below 4 m^2");
    if (loc.kind == LocationKind::Corridor &&
        std::min(loc.bounds.width(), loc.bounds.height()) < kMinCorridorWidth)
      throw ConfigError(label + ": corridor width below 1.2 m");
    for (std::size_t j = i + 1; j < locations_.size(); ++j) {
      if (locations_[j].id == loc.id)
        throw ConfigError("duplicate location id " + std::to_string(loc.id));
      if (loc.bounds.overlaps_interior(locations_[j].bounds))
        throw ConfigError("locations " + std::to_string(loc.id) + " and " +
                          std::to_string(locations_[j].id) + " overlap");
    }
  }

  for (std::size_t i = 0; i < doorways_.size(); ++i) {
    const Doorway& d = doorways_[i];
    if (d.loc_a == d.loc_b)
      throw ConfigError(describe(d, i) + ": joins a location to itself");
    const Location* a = nullptr;
    const Location* b = nullptr;
    for (const Location& loc : locations_) {
      if (loc.id == d.loc_a) a = &loc;
      if (loc.id == d.loc_b) b = &loc;
    }
    if (!a) throw ConfigError(describe(d, i) + ": unknown location " + std::to_string(d.loc_a));
    if (!b) throw ConfigError(describe(d, i) + ": unknown location " + std::to_string(d.loc_b));
    if (d.width() < kMinDoorWidth)
      throw ConfigError(describe(d, i) + ": width below 0.8 m");

    const bool vertical = d.seg_a.x == d.seg_b.x;
    const bool horizontal = d.seg_a.y == d.seg_b.y;
    if (vertical == horizontal)
      throw ConfigError(describe(d, i) + ": segment must be axis-aligned");

    // The segment must lie on the shared face of the two rectangles.
    if (vertical) {
      const double x = d.seg_a.x;
      const bool a_east = a->bounds.x_max == x && b->bounds.x_min == x;
      const bool b_east = b->bounds.x_max == x && a->bounds.x_min == x;
      if (!a_east && !b_east)
        throw ConfigError(describe(d, i) + ": segment not on the shared boundary");
      const double lo = std::min(d.seg_a.y, d.seg_b.y);
      const double hi = std::max(d.seg_a.y, d.seg_b.y);
      const double shared_lo = std::max(a->bounds.y_min, b->bounds.y_min);
      const double shared_hi = std::min(a->bounds.y_max, b->bounds.y_max);
      if (lo < shared_lo || hi > shared_hi)
        throw ConfigError(describe(d, i) + ": segment extends past the shared boundary");
    } else {
      const double y = d.seg_a.y;
      const bool a_north = a->bounds.y_max == y && b->bounds.y_min == y;
      const bool b_north = b->bounds.y_max == y && a->bounds.y_min == y;
      if (!a_north && !b_north)
        throw ConfigError(describe(d, i) + ": segment not on the shared boundary");
      const double lo = std::min(d.seg_a.x, d.seg_b.x);
      const double hi = std::max(d.seg_a.x, d.seg_b.x);
      const double shared_lo = std::max(a->bounds.x_min, b->bounds.x_min);
      const double shared_hi = std::min(a->bounds.x_max, b->bounds.x_max);
      if (lo < shared_lo || hi > shared_hi)
        throw ConfigError(describe(d, i) + ": segment extends past the shared boundary");
    }
  }

  // Connectivity over the doorway-induced graph.
  std::set<int> seen;
  std::queue<int> frontier;
  frontier.push(locations_.front().id);
  seen.insert(locations_.front().id);
  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop();
    for (int next : adjacency_.at(cur))
      if (seen.insert(next).second) frontier.push(next);
  }
  for (const Location& loc : locations_)
    if (!seen.count(loc.id))
      throw ConfigError("layout '" + name_ + "' not connected: location " +
                        std::to_string(loc.id) + " unreachable");
}

namespace {

// Shared geometry for the built-ins: a 2 m corridor spine with five rooms
// attached through 1.2 m doorways. Rooms are ids 0..4, the corridor is id 5.
// The four variants differ in room placement and contact topology.
EnvironmentMap make_env1() {
  const int corridor = 5;
  std::vector<Location> locs = {
      {0, LocationKind::Room, {0, 0, 4, 4}},
      {1, LocationKind::Room, {4, 0, 8, 4}},
      {2, LocationKind::Room, {8, 0, 12, 4}},
      {3, LocationKind::Room, {0, 6, 6, 10}},
      {4, LocationKind::Room, {6, 6, 12, 10}},
      {corridor, LocationKind::Corridor, {0, 4, 12, 6}},
  };
  std::vector<Doorway> doors = {
      {0, corridor, {1.4, 4}, {2.6, 4}},
      {1, corridor, {5.4, 4}, {6.6, 4}},
      {2, corridor, {9.4, 4}, {10.6, 4}},
      {3, corridor, {2.4, 6}, {3.6, 6}},
      {4, corridor, {8.4, 6}, {9.6, 6}},
  };
  return EnvironmentMap("Env1", std::move(locs), std::move(doors));
}

EnvironmentMap make_env2() {
  const int corridor = 5;
  std::vector<Location> locs = {
      {0, LocationKind::Room, {0, 6, 4, 10}},
      {1, LocationKind::Room, {4, 6, 8, 10}},
      {2, LocationKind::Room, {8, 6, 12, 10}},
      {3, LocationKind::Room, {12, 6, 16, 10}},
      {4, LocationKind::Room, {6, 0, 11, 4}},
      {corridor, LocationKind::Corridor, {0, 4, 16, 6}},
  };
  std::vector<Doorway> doors = {
      {0, corridor, {1.4, 6}, {2.6, 6}},
      {1, corridor, {5.4, 6}, {6.6, 6}},
      {2, corridor, {9.4, 6}, {10.6, 6}},
      {3, corridor, {13.4, 6}, {14.6, 6}},
      {4, corridor, {7.9, 4}, {9.1, 4}},
      {1, 2, {8, 7.4}, {8, 8.6}},  // room-to-room shortcut
  };
  return EnvironmentMap("Env2", std::move(locs), std::move(doors));
}

EnvironmentMap make_env3() {
  const int corridor = 5;
  std::vector<Location> locs = {
      {0, LocationKind::Room, {0, 3, 4, 7}},    // west end cap
      {1, LocationKind::Room, {14, 3, 18, 7}},  // east end cap
      {2, LocationKind::Room, {4, 6, 9, 10}},
      {3, LocationKind::Room, {9, 6, 14, 10}},
      {4, LocationKind::Room, {6, 0, 12, 4}},
      {corridor, LocationKind::Corridor, {4, 4, 14, 6}},
  };
  std::vector<Doorway> doors = {
      {0, corridor, {4, 4.4}, {4, 5.6}},
      {1, corridor, {14, 4.4}, {14, 5.6}},
      {2, corridor, {5.9, 6}, {7.1, 6}},
      {3, corridor, {10.9, 6}, {12.1, 6}},
      {4, corridor, {8.4, 4}, {9.6, 4}},
  };
  return EnvironmentMap("Env3", std::move(locs), std::move(doors));
}

EnvironmentMap make_env4() {
  const int corridor = 5;
  std::vector<Location> locs = {
      {0, LocationKind::Room, {0, 6, 5, 10}},
      {1, LocationKind::Room, {5, 6, 10, 10}},
      {2, LocationKind::Room, {0, 0, 5, 4}},
      {3, LocationKind::Room, {5, 0, 10, 4}},  // reachable only through room 2
      {4, LocationKind::Room, {10, 3, 14, 7}},
      {corridor, LocationKind::Corridor, {0, 4, 10, 6}},
  };
  std::vector<Doorway> doors = {
      {0, corridor, {1.9, 6}, {3.1, 6}},
      {1, corridor, {6.9, 6}, {8.1, 6}},
      {2, corridor, {1.9, 4}, {3.1, 4}},
      {2, 3, {5, 1.4}, {5, 2.6}},
      {4, corridor, {10, 4.4}, {10, 5.6}},
  };
  return EnvironmentMap("Env4", std::move(locs), std::move(doors));
}

}  // namespace

std::vector<std::string> builtin_layout_names() {
  return {"Env1", "Env2", "Env3", "Env4"};
}

bool is_builtin_layout(const std::string& layout_id) {
  for (const std::string& name : builtin_layout_names())
    if (name == layout_id) return true;
  return false;
}

EnvironmentMap build_layout(const std::string& layout_id) {
  if (layout_id == "Env1") return make_env1();
  if (layout_id == "Env2") return make_env2();
  if (layout_id == "Env3") return make_env3();
  if (layout_id == "Env4") return make_env4();
  throw ConfigError("unknown builtin layout '" + layout_id + "'");
}

std::optional<int> location_at(const EnvironmentMap& map, Vec2 p) {
  for (const Location& loc : map.locations())
    if (loc.bounds.contains(p)) return loc.id;
  return std::nullopt;
}

double raycast_wall(const EnvironmentMap& map, Vec2 origin, double heading) {
  auto start = location_at(map, origin);
  if (!start)
    throw ContractViolation("raycast_wall: origin outside the world");

  const Vec2 dir = heading_dir(heading);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  int cur = *start;
  Vec2 p = origin;
  double total = 0.0;

  // A straight ray crosses each convex location at most once, so the hop
  // count is bounded by the location count.
  const std::size_t max_hops = map.locations().size() + 1;
  for (std::size_t hop = 0; hop < max_hops; ++hop) {
    const Rect& r = map.location(cur).bounds;

    double tx = kInf, ty = kInf;
    double face_x = 0.0, face_y = 0.0;
    if (dir.x > 0) {
      tx = (r.x_max - p.x) / dir.x;
      face_x = r.x_max;
    } else if (dir.x < 0) {
      tx = (r.x_min - p.x) / dir.x;
      face_x = r.x_min;
    }
    if (dir.y > 0) {
      ty = (r.y_max - p.y) / dir.y;
      face_y = r.y_max;
    } else if (dir.y < 0) {
      ty = (r.y_min - p.y) / dir.y;
      face_y = r.y_min;
    }

    const double t = std::min(tx, ty);
    const Vec2 q{p.x + t * dir.x, p.y + t * dir.y};

    // Corner hits (tx == ty) count as wall; a doorway never covers a corner.
    const Doorway* through = nullptr;
    if (tx < ty) {
      for (const Doorway& d : map.doorways()) {
        if (!d.touches(cur) || !d.vertical() || d.seg_a.x != face_x) continue;
        const double lo = std::min(d.seg_a.y, d.seg_b.y);
        const double hi = std::max(d.seg_a.y, d.seg_b.y);
        if (q.y > lo && q.y < hi) {
          through = &d;
          break;
        }
      }
    } else if (ty < tx) {
      for (const Doorway& d : map.doorways()) {
        if (!d.touches(cur) || d.vertical() || d.seg_a.y != face_y) continue;
        const double lo = std::min(d.seg_a.x, d.seg_b.x);
        const double hi = std::max(d.seg_a.x, d.seg_b.x);
        if (q.x > lo && q.x < hi) {
          through = &d;
          break;
        }
      }
    }

    if (!through) return total + t;
    total += t;
    p = q;
    cur = through->other(cur);
  }
  throw ContractViolation("raycast_wall: exceeded location hop bound");
}

Vec2 sample_free_point(const EnvironmentMap& map, Rng& rng,
                       std::optional<int> location_id) {
  auto sample_rect = [&rng](const Rect& r) {
    const double x = r.x_min + rng.uniform() * r.width();
    const double y = r.y_min + rng.uniform() * r.height();
    return Vec2{x, y};
  };

  if (location_id) {
    const Rect in = map.location(*location_id).bounds.inset(kAgentRadius);
    if (!in.valid())
      throw ConfigError("location " + std::to_string(*location_id) +
                        " too small for the 0.2 m agent inset");
    return sample_rect(in);
  }

  // Weight locations by inset area so the union sample stays uniform.
  double total_area = 0.0;
  for (const Location& loc : map.locations()) {
    const Rect in = loc.bounds.inset(kAgentRadius);
    if (in.valid()) total_area += in.area();
  }
  if (total_area <= 0.0)
    throw ConfigError("no location can fit the 0.2 m agent inset");

  double pick = rng.uniform() * total_area;
  Rect chosen{};
  for (const Location& loc : map.locations()) {
    const Rect in = loc.bounds.inset(kAgentRadius);
    if (!in.valid()) continue;
    chosen = in;
    pick -= in.area();
    if (pick < 0.0) break;
  }
  return sample_rect(chosen);
}

}  // namespace swarmtrack
