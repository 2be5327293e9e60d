#pragma once

// Hand-rolled JSON emission: enough for the stats and certificate reports.
// Doubles print with 17 significant digits (trailing zeros stripped), which
// parses back to the identical bits; non-finite values (unbounded box
// sides) become null.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace fibjulia {

inline std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  const auto r =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

inline std::string json_number(long v) {
  char buf[24];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

inline std::string json_number(int v) { return json_number(static_cast<long>(v)); }

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (const char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
  return out;
}

} // namespace fibjulia
