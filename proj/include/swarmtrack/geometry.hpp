#pragma once

#include <cmath>

namespace swarmtrack {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::sqrt(dot(v, v)); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline Vec2 heading_dir(double heading_rad) {
  return {std::cos(heading_rad), std::sin(heading_rad)};
}

// Axis-aligned rectangle. Containment is half-open, [x_min, x_max) x
// [y_min, y_max), so a point on a shared boundary belongs to exactly one
// rectangle.
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
  bool valid() const { return x_min < x_max && y_min < y_max; }

  bool contains(Vec2 p) const {
    return p.x >= x_min && p.x < x_max && p.y >= y_min && p.y < y_max;
  }

  bool overlaps_interior(const Rect& o) const {
    return x_min < o.x_max && o.x_min < x_max && y_min < o.y_max &&
           o.y_min < y_max;
  }

  Rect inset(double r) const {
    return {x_min + r, y_min + r, x_max - r, y_max - r};
  }
};

}  // namespace swarmtrack
