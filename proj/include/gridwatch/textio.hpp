#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

#include "gridwatch/errors.hpp"

namespace gridwatch {

// Canonical number text used by every artifact and config file: shortest
// decimal form that parses back to the identical 64-bit value. Because the
// formatter is deterministic and parsing inverts it exactly, write-read-write
// cycles reproduce files byte for byte.
inline std::string format_real(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DomainError("malformed real number: '" + std::string(s) + "'");
  return v;
}

inline std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DomainError("malformed integer: '" + std::string(s) + "'");
  return v;
}

inline bool parse_bool(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw DomainError("malformed boolean (use true/false): '" + std::string(s) + "'");
}

inline std::string format_bool(bool b) { return b ? "true" : "false"; }

}  // namespace gridwatch
