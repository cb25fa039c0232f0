#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace bo4 {

// Round-trippable decimal form of a double.
inline std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Shortest decimal form that still round-trips.
inline std::string fmt_exact(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// Short form for labels.
inline std::string fmt_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace bo4
