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
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "z2sim/spectral.hpp"
#include "z2sim/trajectory_types.hpp"
#include "z2sim/version.hpp"

namespace z2sim {

using json = nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One self-contained run result: parameters, correlators, optional
// per-trajectory samples (needed for bitwise shard merging), and optional
// derived analysis products.
struct ResultRecord {
  std::string kind = "ensemble";  // "ensemble", "merged", or "oracle"
  std::string key;                // tuple hash, doubles as the file stem
  RunParams params;
  ShardSpec shard;
  bool partial = false;
  std::string site_policy = "source";
  int threads = 1;
  double wall_time_s = 0.0;
  CorrelatorSeries series;
  bool keep_samples = false;
  std::vector<TrajectorySamples> trajectories;
  bool has_spectrum = false;
  Spectrum spectrum;
  bool has_mass = false;
  MassEstimate mass;
  bool has_rel_err = false;
  double rel_err_pct = 0.0;
  std::string baseline_key;
  bool has_xi = false;
  double xi_anisotropy = 0.0;
  bool xi_multiple_roots = false;
};

namespace detail {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

// Canonical key for one parameter tuple. Stable across runs and platforms:
// it hashes a fixed-format text rendering of every physics- and
// sampling-relevant parameter. Shards of the same tuple share a key prefix
// and differ in the shard suffix.
inline std::string tuple_key(const RunParams& p, const ShardSpec& shard,
                             std::string_view site_policy) {
  std::string s;
  s += "n=" + std::to_string(p.n);
  s += ";beta_h=" + detail::fmt_double(p.beta_h);
  s += ";dt=" + detail::fmt_double(p.dt);
  s += ";steps=" + std::to_string(p.n_steps);
  s += ";eps1=" + detail::fmt_double(p.epsilon1);
  s += ";eps2=" + detail::fmt_double(p.epsilon2);
  s += ";zeta=" + detail::fmt_double(p.zeta);
  s += ";tg=" + detail::fmt_double(p.t_gate);
  s += ";seed=" + std::to_string(p.master_seed);
  s += ";traj=" + std::to_string(p.n_traj);
  s += ";src=" + std::to_string(p.source_site);
  s += ";sites=";
  for (int q : p.sites) s += std::to_string(q) + ",";
  s += ";policy=";
  s += site_policy;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(detail::fnv1a64(s)));
  std::string key = buf;
  if (shard.total > 1) {
    key += "-s" + std::to_string(shard.index) + "of" +
           std::to_string(shard.total);
  }
  return key;
}

namespace detail {

inline json complex_rows_re(const std::vector<std::vector<cdouble>>& v) {
  json rows = json::array();
  for (const auto& row : v) {
    json r = json::array();
    for (cdouble z : row) r.push_back(z.real());
    rows.push_back(std::move(r));
  }
  return rows;
}

inline json complex_rows_im(const std::vector<std::vector<cdouble>>& v) {
  json rows = json::array();
  for (const auto& row : v) {
    json r = json::array();
    for (cdouble z : row) r.push_back(z.imag());
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<std::vector<cdouble>> complex_rows(const json& re,
                                                      const json& im) {
  if (!re.is_array() || !im.is_array() || re.size() != im.size())
    throw IoError("records: mismatched complex row arrays");
  std::vector<std::vector<cdouble>> out(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    const auto& rr = re[i];
    const auto& ri = im[i];
    if (rr.size() != ri.size())
      throw IoError("records: mismatched complex row lengths");
    out[i].reserve(rr.size());
    for (std::size_t k = 0; k < rr.size(); ++k)
      out[i].emplace_back(rr[k].get<double>(), ri[k].get<double>());
  }
  return out;
}

}  // namespace detail

inline json series_to_json(const CorrelatorSeries& s) {
  json j;
  j["source_site"] = s.source_site;
  j["sites"] = s.sites;
  j["times"] = s.times;
  j["values_re"] = detail::complex_rows_re(s.values);
  j["values_im"] = detail::complex_rows_im(s.values);
  j["stderr_re"] = s.stderr_re;
  j["stderr_im"] = s.stderr_im;
  j["n_traj_effective"] = s.n_traj_effective;
  j["stderr_defined"] = s.stderr_defined;
  return j;
}

inline CorrelatorSeries series_from_json(const json& j) {
  CorrelatorSeries s;
  s.source_site = j.at("source_site").get<int>();
  s.sites = j.at("sites").get<std::vector<int>>();
  s.times = j.at("times").get<std::vector<double>>();
  s.values = detail::complex_rows(j.at("values_re"), j.at("values_im"));
  s.stderr_re = j.at("stderr_re").get<std::vector<std::vector<double>>>();
  s.stderr_im = j.at("stderr_im").get<std::vector<std::vector<double>>>();
  s.n_traj_effective = j.at("n_traj_effective").get<std::uint64_t>();
  s.stderr_defined = j.at("stderr_defined").get<bool>();
  return s;
}

inline json spectrum_to_json(const Spectrum& s) {
  json j;
  j["frequencies"] = s.frequencies;
  json re = json::array(), im = json::array();
  for (cdouble z : s.coeffs) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  j["coeffs_re"] = std::move(re);
  j["coeffs_im"] = std::move(im);
  j["magnitudes"] = s.magnitudes;
  j["peaks"] = s.peaks;
  j["n_t"] = s.n_t;
  j["dt"] = s.dt;
  j["bin_width"] = s.bin_width;
  j["mean_subtracted"] = s.mean_subtracted;
  j["hann_window"] = s.hann_window;
  return j;
}

inline Spectrum spectrum_from_json(const json& j) {
  Spectrum s;
  s.frequencies = j.at("frequencies").get<std::vector<double>>();
  const auto& re = j.at("coeffs_re");
  const auto& im = j.at("coeffs_im");
  if (re.size() != im.size()) throw IoError("records: bad spectrum coeffs");
  for (std::size_t k = 0; k < re.size(); ++k)
    s.coeffs.emplace_back(re[k].get<double>(), im[k].get<double>());
  s.magnitudes = j.at("magnitudes").get<std::vector<double>>();
  s.peaks = j.at("peaks").get<std::vector<std::pair<double, double>>>();
  s.n_t = j.at("n_t").get<int>();
  s.dt = j.at("dt").get<double>();
  s.bin_width = j.at("bin_width").get<double>();
  s.mean_subtracted = j.at("mean_subtracted").get<bool>();
  s.hann_window = j.at("hann_window").get<bool>();
  return s;
}

// Full record serialization. master_seed is stored as a decimal string so
// the full 64-bit range survives JSON readers that parse numbers as double.
inline json record_to_json(const ResultRecord& r) {
  json j;
  j["schema"] = kRecordSchema;
  j["generator"] = std::string("z2sim ") + kVersionString;
  j["kind"] = r.kind;
  j["key"] = r.key;

  json p;
  p["n"] = r.params.n;
  p["beta_h"] = r.params.beta_h;
  p["dt"] = r.params.dt;
  p["n_steps"] = r.params.n_steps;
  p["epsilon1"] = r.params.epsilon1;
  p["epsilon2"] = r.params.epsilon2;
  p["zeta_crosstalk"] = r.params.zeta;
  p["t_gate"] = r.params.t_gate;
  p["master_seed"] = std::to_string(r.params.master_seed);
  p["n_traj"] = r.params.n_traj;
  p["source_site"] = r.params.source_site;
  p["record_sites"] = r.params.sites;
  p["site_policy"] = r.site_policy;
  j["params"] = std::move(p);

  json run;
  run["shard_index"] = r.shard.index;
  run["shard_total"] = r.shard.total;
  run["partial"] = r.partial;
  run["threads"] = r.threads;
  run["wall_time_s"] = r.wall_time_s;
  j["run"] = std::move(run);

  j["series"] = series_to_json(r.series);

  if (r.keep_samples) {
    json traj = json::array();
    for (const auto& t : r.trajectories) {
      json e;
      e["index"] = t.index;
      e["values_re"] = detail::complex_rows_re(t.values);
      e["values_im"] = detail::complex_rows_im(t.values);
      traj.push_back(std::move(e));
    }
    j["trajectories"] = std::move(traj);
  }
  if (r.has_spectrum) j["spectrum"] = spectrum_to_json(r.spectrum);
  if (r.has_mass) {
    json m;
    m["mass"] = r.mass.mass;
    m["uncertainty"] = r.mass.uncertainty;
    m["interpolated"] = r.mass.interpolated;
    m["peak_magnitude"] = r.mass.peak_magnitude;
    j["mass"] = std::move(m);
  }
  if (r.has_rel_err) {
    j["relative_error_pct"] = r.rel_err_pct;
    j["baseline_key"] = r.baseline_key;
  }
  if (r.has_xi) {
    json x;
    x["xi"] = r.xi_anisotropy;
    x["multiple_roots"] = r.xi_multiple_roots;
    j["xi_anisotropy"] = std::move(x);
  }
  return j;
}

inline ResultRecord record_from_json(const json& j) {
  if (j.at("schema").get<std::string>() != kRecordSchema)
    throw IoError("records: unknown schema \"" +
                  j.at("schema").get<std::string>() + "\"");
  ResultRecord r;
  r.kind = j.at("kind").get<std::string>();
  r.key = j.at("key").get<std::string>();

  const json& p = j.at("params");
  r.params.n = p.at("n").get<int>();
  r.params.beta_h = p.at("beta_h").get<double>();
  r.params.dt = p.at("dt").get<double>();
  r.params.n_steps = p.at("n_steps").get<int>();
  r.params.epsilon1 = p.at("epsilon1").get<double>();
  r.params.epsilon2 = p.at("epsilon2").get<double>();
  r.params.zeta = p.at("zeta_crosstalk").get<double>();
  r.params.t_gate = p.at("t_gate").get<double>();
  r.params.master_seed = std::stoull(p.at("master_seed").get<std::string>());
  r.params.n_traj = p.at("n_traj").get<std::uint64_t>();
  r.params.source_site = p.at("source_site").get<int>();
  r.params.sites = p.at("record_sites").get<std::vector<int>>();
  r.site_policy = p.at("site_policy").get<std::string>();

  const json& run = j.at("run");
  r.shard.index = run.at("shard_index").get<std::uint64_t>();
  r.shard.total = run.at("shard_total").get<std::uint64_t>();
  r.partial = run.at("partial").get<bool>();
  r.threads = run.at("threads").get<int>();
  r.wall_time_s = run.at("wall_time_s").get<double>();

  r.series = series_from_json(j.at("series"));

  if (j.contains("trajectories")) {
    r.keep_samples = true;
    for (const auto& e : j.at("trajectories")) {
      TrajectorySamples t;
      t.index = e.at("index").get<std::uint64_t>();
      t.values = detail::complex_rows(e.at("values_re"), e.at("values_im"));
      r.trajectories.push_back(std::move(t));
    }
  }
  if (j.contains("spectrum")) {
    r.has_spectrum = true;
    r.spectrum = spectrum_from_json(j.at("spectrum"));
  }
  if (j.contains("mass")) {
    r.has_mass = true;
    const json& m = j.at("mass");
    r.mass.mass = m.at("mass").get<double>();
    r.mass.uncertainty = m.at("uncertainty").get<double>();
    r.mass.interpolated = m.at("interpolated").get<bool>();
    r.mass.peak_magnitude = m.at("peak_magnitude").get<double>();
  }
  if (j.contains("relative_error_pct")) {
    r.has_rel_err = true;
    r.rel_err_pct = j.at("relative_error_pct").get<double>();
    r.baseline_key = j.value("baseline_key", std::string{});
  }
  if (j.contains("xi_anisotropy")) {
    r.has_xi = true;
    const json& x = j.at("xi_anisotropy");
    r.xi_anisotropy = x.at("xi").get<double>();
    r.xi_multiple_roots = x.at("multiple_roots").get<bool>();
  }
  return r;
}

// CSV views. Doubles are printed with %.17g so the text round-trips.
inline std::string series_to_csv(const CorrelatorSeries& s) {
  std::string out = "site,k,t,re,im,stderr_re,stderr_im\n";
  for (std::size_t si = 0; si < s.sites.size(); ++si) {
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "%d,%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    s.sites[si], k, s.times[k], s.values[si][k].real(),
                    s.values[si][k].imag(),
                    s.stderr_defined ? s.stderr_re[si][k] : 0.0,
                    s.stderr_defined ? s.stderr_im[si][k] : 0.0);
      out += buf;
    }
  }
  return out;
}

inline std::string spectrum_to_csv(const Spectrum& s) {
  std::string out = "omega,magnitude,phase\n";
  for (std::size_t k = 0; k < s.frequencies.size(); ++k) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.frequencies[k],
                  s.magnitudes[k], std::arg(s.coeffs[k]));
    out += buf;
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << body;
  if (!f.flush()) throw IoError("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  std::string body((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  return body;
}

inline void write_record(const ResultRecord& r, const std::string& path) {
  write_text_file(path, record_to_json(r).dump(2) + "\n");
}

inline ResultRecord read_record(const std::string& path) {
  json j = json::parse(read_text_file(path));
  return record_from_json(j);
}

}  // namespace z2sim
