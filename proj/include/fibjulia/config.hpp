#pragma once

// Line-based key=value configuration with '#' comments.  Flags override
// file values, which override these built-ins; parsing rejects unknown keys
// and malformed numbers with the offending line number.

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fibjulia {

struct Config {
  double c = -0.5;
  int max_iter = 5000;
  double tol = 1e-9;
  double escape_radius = 1e6;
  double r_max = 1e4;
  int max_depth = 24;
  std::string palette = "default";  // the only scheme currently defined
  std::string out = "out.ppm";
  std::string report = "report.jsonl";
  std::string stats;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string config_trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double config_double(const std::string& where, const std::string& key,
                            const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto r = std::from_chars(begin, end, out);
  if (r.ec != std::errc{} || r.ptr != end) {
    throw ConfigError(where + ": invalid number for " + key + ": '" + value + "'");
  }
  return out;
}

inline int config_int(const std::string& where, const std::string& key,
                      const std::string& value) {
  int out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto r = std::from_chars(begin, end, out);
  if (r.ec != std::errc{} || r.ptr != end) {
    throw ConfigError(where + ": invalid integer for " + key + ": '" + value + "'");
  }
  return out;
}

} // namespace detail

inline Config parse_config(std::istream& in, const std::string& name) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::config_trim(line);
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key=value, got '" + line + "'");
    }
    const std::string key = detail::config_trim(line.substr(0, eq));
    const std::string value = detail::config_trim(line.substr(eq + 1));
    if (key == "c") {
      cfg.c = detail::config_double(where, key, value);
    } else if (key == "max_iter") {
      cfg.max_iter = detail::config_int(where, key, value);
    } else if (key == "tol") {
      cfg.tol = detail::config_double(where, key, value);
    } else if (key == "escape_radius") {
      cfg.escape_radius = detail::config_double(where, key, value);
    } else if (key == "r_max") {
      cfg.r_max = detail::config_double(where, key, value);
    } else if (key == "max_depth") {
      cfg.max_depth = detail::config_int(where, key, value);
    } else if (key == "palette") {
      if (value != "default") {
        throw ConfigError(where + ": unknown palette '" + value + "'");
      }
      cfg.palette = value;
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "report") {
      cfg.report = value;
    } else if (key == "stats") {
      cfg.stats = value;
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

inline Config load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in, path);
}

} // namespace fibjulia
