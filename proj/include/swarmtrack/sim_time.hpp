#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

namespace swarmtrack {

// Simulation time is kept in integer microseconds. Every scheduled action
// (crowd checks, sensing, snapshots) lands on an exact tick, timestamps
// serialize to exact decimal strings, and parsing those strings back gives
// bit-identical doubles. That is what makes run logs byte-reproducible.
using TimeUs = std::int64_t;

constexpr TimeUs kUsPerSecond = 1000000;

inline TimeUs seconds_to_us(double s) {
  return static_cast<TimeUs>(std::llround(s * 1e6));
}

inline double us_to_seconds(TimeUs t) { return static_cast<double>(t) / 1e6; }

// Exact decimal rendering with trailing zeros trimmed: 300000 -> "0.3",
// 2000000 -> "2", 599900000 -> "599.9".
inline std::string format_time_s(TimeUs t) {
  std::string out;
  if (t < 0) {
    out += '-';
    t = -t;
  }
  out += std::to_string(t / kUsPerSecond);
  TimeUs frac = t % kUsPerSecond;
  if (frac != 0) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%06lld", static_cast<long long>(frac));
    std::string digits(buf);
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

}  // namespace swarmtrack
