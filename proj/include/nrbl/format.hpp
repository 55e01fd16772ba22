#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace nrbl {

/// Shortest round-trip decimal form; identical on every conforming platform.
inline std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace nrbl
