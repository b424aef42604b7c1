#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace linksynth {

/// Shortest decimal text that parses back to exactly `v`.
inline std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  if (r.ec != std::errc{}) return "nan";
  return std::string(buf, r.ptr);
}

/// Fixed-point text with `digits` decimals.
inline std::string fixed(double v, int digits) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  if (r.ec != std::errc{}) return "nan";
  return std::string(buf, r.ptr);
}

}  // namespace linksynth
