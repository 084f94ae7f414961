// Copyright 2026 The z2sim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "z2sim/lattice.hpp"

namespace z2sim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sweep configuration. Grammar (one setting per line):
//
//   key = value            # scalar
//   key = [v1, v2, v3]     # list; scalar promotes to a one-element list
//   # comment to end of line; blank lines ignored
//
// Keys: n, beta_h, dt, epsilon2, zeta_crosstalk (lists); n_steps, n_traj,
// master_seed, source_site (integers); out_dir, record_sites (strings).
// Unknown keys are rejected. epsilon2 left unset selects a grid-size
// dependent default list.
struct SweepConfig {
  std::vector<int> n = {3};
  std::vector<double> beta_h = {1.4, 1.6, 1.8};
  std::vector<double> dt = {0.25};
  std::vector<double> epsilon2;  // empty = per-n default
  bool epsilon2_set = false;
  std::vector<double> zeta = {1.5e5, 3.0e5, 4.5e5, 6.0e5, 7.5e5};
  int n_steps = 50;
  std::uint64_t n_traj = 1000;
  std::uint64_t master_seed = 1;
  int source_site = -1;  // -1 = lattice default (center site)
  std::string out_dir = "results";
  SitePolicy record_sites = SitePolicy::kSource;
};

// Default two-qubit depolarizing grid; the 3x3 grid uses a wider, coarser
// list than larger systems.
inline std::vector<double> default_epsilon2_grid(int n) {
  if (n <= 3) return {0.0, 1e-3, 2e-3, 3e-3, 4e-3, 5e-3};
  return {0.0, 0.5e-3, 1.0e-3, 1.5e-3, 2.0e-3, 2.5e-3, 3.0e-3};
}

namespace detail {

inline std::string strip(std::string s) {
  const std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& value,
                                           int line_no) {
  std::string v = strip(value);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']')
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unterminated list");
    v = v.substr(1, v.size() - 2);
    std::vector<std::string> items;
    std::string cur;
    std::stringstream ss(v);
    while (std::getline(ss, cur, ',')) {
      cur = strip(cur);
      if (cur.empty())
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": empty list element");
      items.push_back(cur);
    }
    return items;
  }
  if (v.empty())
    throw ConfigError("config line " + std::to_string(line_no) +
                      ": missing value");
  return {v};
}

inline double parse_double(const std::string& s, int line_no) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size())
    throw ConfigError("config line " + std::to_string(line_no) +
                      ": not a number: \"" + s + "\"");
  return x;
}

inline long long parse_int(const std::string& s, int line_no) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size())
    throw ConfigError("config line " + std::to_string(line_no) +
                      ": not an integer: \"" + s + "\"");
  return x;
}

inline std::uint64_t parse_u64(const std::string& s, int line_no) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size())
    throw ConfigError("config line " + std::to_string(line_no) +
                      ": not an unsigned integer: \"" + s + "\"");
  return x;
}

}  // namespace detail

inline SitePolicy parse_site_policy(const std::string& s) {
  if (s == "source") return SitePolicy::kSource;
  if (s == "symmetry") return SitePolicy::kSymmetry;
  if (s == "all") return SitePolicy::kAll;
  throw ConfigError("record_sites must be source, symmetry, or all (got \"" +
                    s + "\")");
}

inline const char* site_policy_name(SitePolicy p) {
  switch (p) {
    case SitePolicy::kSource: return "source";
    case SitePolicy::kSymmetry: return "symmetry";
    case SitePolicy::kAll: return "all";
  }
  return "source";
}

inline void validate_config(const SweepConfig& c) {
  if (c.n.empty()) throw ConfigError("n list must be non-empty");
  for (int n : c.n)
    if (n < 1 || n > 30) throw ConfigError("n out of range: " +
                                           std::to_string(n));
  if (c.beta_h.empty()) throw ConfigError("beta_h list must be non-empty");
  for (double b : c.beta_h)
    if (!(b > 0)) throw ConfigError("beta_h must be positive");
  if (c.dt.empty()) throw ConfigError("dt list must be non-empty");
  for (double d : c.dt)
    if (!(d > 0)) throw ConfigError("dt must be positive");
  if (c.epsilon2_set && c.epsilon2.empty())
    throw ConfigError("epsilon2 list must be non-empty");
  for (double e : c.epsilon2)
    if (e < 0 || e > 1) throw ConfigError("epsilon2 out of [0,1]");
  if (c.zeta.empty()) throw ConfigError("zeta_crosstalk list must be non-empty");
  for (double z : c.zeta)
    if (z < 0) throw ConfigError("zeta_crosstalk must be non-negative");
  if (c.n_steps < 1) throw ConfigError("n_steps must be >= 1");
  if (c.n_traj < 1) throw ConfigError("n_traj must be >= 1");
  if (c.out_dir.empty()) throw ConfigError("out_dir must be non-empty");
}

// Parses the documented key-value grammar. Throws ConfigError with a line
// number on any malformed or unknown input.
inline SweepConfig parse_config(const std::string& text) {
  SweepConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    line_no++;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::strip(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = detail::strip(line.substr(0, eq));
    const std::string value = detail::strip(line.substr(eq + 1));
    const auto items = detail::split_list(value, line_no);

    auto want_scalar = [&]() -> const std::string& {
      if (items.size() != 1)
        throw ConfigError("config line " + std::to_string(line_no) + ": " +
                          key + " takes a single value");
      return items[0];
    };

    if (key == "n") {
      cfg.n.clear();
      for (const auto& s : items)
        cfg.n.push_back(static_cast<int>(detail::parse_int(s, line_no)));
    } else if (key == "beta_h") {
      cfg.beta_h.clear();
      for (const auto& s : items)
        cfg.beta_h.push_back(detail::parse_double(s, line_no));
    } else if (key == "dt") {
      cfg.dt.clear();
      for (const auto& s : items)
        cfg.dt.push_back(detail::parse_double(s, line_no));
    } else if (key == "epsilon2") {
      cfg.epsilon2.clear();
      cfg.epsilon2_set = true;
      for (const auto& s : items)
        cfg.epsilon2.push_back(detail::parse_double(s, line_no));
    } else if (key == "zeta_crosstalk") {
      cfg.zeta.clear();
      for (const auto& s : items)
        cfg.zeta.push_back(detail::parse_double(s, line_no));
    } else if (key == "n_steps") {
      cfg.n_steps = static_cast<int>(detail::parse_int(want_scalar(), line_no));
    } else if (key == "n_traj") {
      cfg.n_traj = detail::parse_u64(want_scalar(), line_no);
    } else if (key == "master_seed") {
      cfg.master_seed = detail::parse_u64(want_scalar(), line_no);
    } else if (key == "source_site") {
      cfg.source_site =
          static_cast<int>(detail::parse_int(want_scalar(), line_no));
    } else if (key == "out_dir") {
      cfg.out_dir = want_scalar();
    } else if (key == "record_sites") {
      cfg.record_sites = parse_site_policy(want_scalar());
    } else {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key \"" + key + "\"");
    }
  }
  validate_config(cfg);
  return cfg;
}

}  // namespace z2sim
