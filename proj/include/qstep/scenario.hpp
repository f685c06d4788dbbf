#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qstep/errors.hpp"
#include "qstep/packet.hpp"
#include "qstep/step.hpp"

/*
 * Flat `key = value` scenario configs with `#` comments. Unknown keys,
 * duplicate keys, and malformed values are config errors carrying the line
 * number; physically inconsistent values (E0 <= V0, mixed canonical steps)
 * are domain errors raised when the effective kinematics is built.
 *
 * For potential = general, (v1, v2, v3) are multiples of the base step height
 * V0 = av0^2/2; the canonical magnitude left after the phase rotation rescales
 * the effective step height for both comparison cases.
 */

namespace qstep {

struct Scenario {
  double e0_over_v0 = 2.0;
  double av0 = 100.0;
  std::string potential = "complex";  // complex | quaternionic | general
  double v1 = 0.0, v2 = 0.0, v3 = 0.0;
  std::vector<double> tau_list = {-0.15, -0.10, -0.05, 0.0, 0.05, 0.10, 0.15};
  double grid_min = -30.0;
  double grid_max = 30.0;
  int grid_points = 4801;
  double truncation = 6.0;
  int nodes = 0;  // 0 = auto
  std::string csv_prefix = "density";

  std::vector<double> make_grid() const {
    return make_uniform_grid(grid_min, grid_max, grid_points);
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double parse_double(int line, const std::string& key,
                           const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ConfigError(line, key + ": not a number: '" + value + "'");
  return v;
}

inline int parse_int(int line, const std::string& key,
                     const std::string& value) {
  const double v = parse_double(line, key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError(line, key + ": not an integer: '" + value + "'");
  return i;
}

inline std::vector<double> parse_list(int line, const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw ConfigError(line, key + ": empty list entry");
    out.push_back(parse_double(line, key, t));
  }
  if (out.empty()) throw ConfigError(line, key + ": empty list");
  return out;
}

}  // namespace detail

inline Scenario parse_scenario(std::istream& in) {
  Scenario s;
  std::map<std::string, int> seen;  // key -> first line
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = detail::trim(line);
    if (text.empty()) continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(lineno, "expected 'key = value', got '" + text + "'");
    const std::string key = detail::trim(text.substr(0, eq));
    const std::string value = detail::trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(lineno, "missing key before '='");
    if (value.empty()) throw ConfigError(lineno, key + ": missing value");
    if (auto it = seen.find(key); it != seen.end())
      throw ConfigError(lineno, key + ": duplicate key (first set on line " +
                                    std::to_string(it->second) + ")");
    seen[key] = lineno;

    if (key == "e0_over_v0") s.e0_over_v0 = detail::parse_double(lineno, key, value);
    else if (key == "av0") s.av0 = detail::parse_double(lineno, key, value);
    else if (key == "potential") {
      if (value != "complex" && value != "quaternionic" && value != "general")
        throw ConfigError(lineno, "potential must be complex, quaternionic, or general");
      s.potential = value;
    }
    else if (key == "v1") s.v1 = detail::parse_double(lineno, key, value);
    else if (key == "v2") s.v2 = detail::parse_double(lineno, key, value);
    else if (key == "v3") s.v3 = detail::parse_double(lineno, key, value);
    else if (key == "tau_list") s.tau_list = detail::parse_list(lineno, key, value);
    else if (key == "grid_min") s.grid_min = detail::parse_double(lineno, key, value);
    else if (key == "grid_max") s.grid_max = detail::parse_double(lineno, key, value);
    else if (key == "grid_points") s.grid_points = detail::parse_int(lineno, key, value);
    else if (key == "truncation") s.truncation = detail::parse_double(lineno, key, value);
    else if (key == "nodes") s.nodes = detail::parse_int(lineno, key, value);
    else if (key == "csv_prefix") s.csv_prefix = value;
    else throw ConfigError(lineno, "unknown key '" + key + "'");
  }

  if (s.potential != "general" && (s.v1 != 0.0 || s.v2 != 0.0 || s.v3 != 0.0))
    throw ConfigError("v1/v2/v3 require potential = general");
  if (!(s.grid_min < s.grid_max))
    throw ConfigError("grid_min must be < grid_max");
  if (s.grid_points < 3) throw ConfigError("grid_points must be >= 3");
  if (s.tau_list.empty()) throw ConfigError("tau_list must be nonempty");
  if (s.nodes < 0) throw ConfigError("nodes must be >= 0");
  if (!(s.truncation > 0.0)) throw ConfigError("truncation must be > 0");
  return s;
}

// A missing or unreadable config file is a config error, not an io error.
inline Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_scenario(in);
}

// Scenario reduced to canonical kinematics shared by both comparison cases.
struct EffectiveScenario {
  Kinematics kin;
  CanonicalPotential canon;  // direction in units of the base V0
  double height_scale;       // effective V0 in units of the base V0
};

inline EffectiveScenario build_effective(const Scenario& s) {
  if (s.potential == "complex") {
    return {Kinematics::from_ratio(s.e0_over_v0, s.av0),
            {PotentialSpec{1.0, 0.0, 0.0}, 0.0}, 1.0};
  }
  if (s.potential == "quaternionic") {
    return {Kinematics::from_ratio(s.e0_over_v0, s.av0),
            {PotentialSpec{0.0, 1.0, 0.0}, 0.0}, 1.0};
  }
  const CanonicalPotential canon = canonicalize({s.v1, s.v2, s.v3});
  const double vc = canon.canonical.v1, vp = canon.canonical.v2;
  if (vc != 0.0 && vp != 0.0)
    throw DomainError("mixed complex-quaternionic step is outside the diffusion problem");
  const double mag = std::max(vc, vp);
  if (!(mag > 0.0)) throw DomainError("general potential must be nonzero");
  if (!(s.e0_over_v0 > mag))
    throw DomainError("diffusion regime requires E0 above the effective step height");
  if (!(s.av0 > 0.0)) throw DomainError("av0 must be > 0");
  // E0 = e0_over_v0 * V0_base, effective V0 = mag * V0_base.
  return {Kinematics(s.av0 * std::sqrt(s.e0_over_v0), s.av0 * std::sqrt(mag)),
          canon, mag};
}

}  // namespace qstep
