#pragma once

#include <charconv>
#include <cstdint>
#include <string>

// Locale-independent number formatting for CSV and SVG output; shortest
// round-trip form keeps serialized files byte-stable across runs.
namespace pilotwave::detail {

inline void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

inline void append_u64(std::string& out, std::uint64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

inline std::string fmt_double(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

// Fixed two-decimal form for SVG coordinates.
inline void append_fixed2(std::string& out, double v) {
  char buf[32];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  out.append(buf, res.ptr);
}

}  // namespace pilotwave::detail
