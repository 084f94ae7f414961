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

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "z2sim/config.hpp"
#include "z2sim/records.hpp"
#include "z2sim/trajectory.hpp"
#include "z2sim/trotter.hpp"

namespace z2sim {

// One point of the sweep grid. Baseline tuples (epsilon2 = zeta = 0) anchor
// the relative-error comparison for every noisy tuple sharing (n, beta_h, dt).
struct SweepTuple {
  int n = 3;
  double beta_h = 1.6;
  double dt = 0.25;
  double epsilon2 = 0;
  double zeta = 0;
  bool baseline = false;
};

// Cartesian product of the configured grids, with a noiseless baseline
// prepended to each (n, beta_h, dt) group so baselines are always computed
// before the noisy tuples that compare against them.
inline std::vector<SweepTuple> expand_tuples(const SweepConfig& cfg) {
  std::vector<SweepTuple> out;
  for (int n : cfg.n) {
    const std::vector<double> eps_grid =
        cfg.epsilon2_set ? cfg.epsilon2 : default_epsilon2_grid(n);
    for (double bh : cfg.beta_h) {
      for (double dt : cfg.dt) {
        out.push_back({n, bh, dt, 0.0, 0.0, true});
        for (double e2 : eps_grid)
          for (double z : cfg.zeta) {
            if (e2 == 0.0 && z == 0.0) continue;  // already the baseline
            out.push_back({n, bh, dt, e2, z, false});
          }
      }
    }
  }
  return out;
}

struct TupleRunOptions {
  int n_steps = 50;
  std::uint64_t n_traj = 1000;
  std::uint64_t master_seed = 1;
  ShardSpec shard;
  SitePolicy policy = SitePolicy::kSource;
  int source_site = -1;
  DftOptions dft;
  bool interpolate = true;
  bool keep_samples = false;  // forced on for sharded runs
  std::uint64_t mem_limit_bytes = 0;
};

inline TupleRunOptions options_from_config(const SweepConfig& cfg) {
  TupleRunOptions opt;
  opt.n_steps = cfg.n_steps;
  opt.n_traj = cfg.n_traj;
  opt.master_seed = cfg.master_seed;
  opt.policy = cfg.record_sites;
  opt.source_site = cfg.source_site;
  return opt;
}

// The exact parameter snapshot a run of this tuple would produce, available
// before running so resume checks can address records content-wise.
inline RunParams planned_params(const SweepTuple& t,
                                const TupleRunOptions& opt) {
  const LatticeSpec lat = build_lattice(t.n);
  const CouplingParams p =
      make_params(t.beta_h, t.dt, opt.n_steps, lat, opt.source_site);
  const NoiseModel model = (t.epsilon2 > 0 || t.zeta > 0)
                               ? noise_from_epsilon2(t.epsilon2, t.zeta)
                               : NoiseModel{};
  TrajectoryPlan plan;
  plan.n_traj = opt.n_traj;
  plan.master_seed = opt.master_seed;
  plan.shard = opt.shard;
  plan.record_sites = record_sites(lat, p.source_site, opt.policy);
  return snapshot_params(lat, p, model, plan);
}

inline std::string planned_key(const SweepTuple& t,
                               const TupleRunOptions& opt) {
  return tuple_key(planned_params(t, opt), opt.shard,
                   site_policy_name(opt.policy));
}

// Fills spectrum and mass for the source-site series. Returns false (leaving
// the mass fields unset) when the spectrum carries no usable peak or the
// series is too short for a DFT; the record itself stays writable either way.
inline bool analyze_record(ResultRecord& r, const DftOptions& opt,
                           bool interpolate) {
  if (r.series.times.size() < 4) return false;
  r.spectrum = dft(r.series, r.params.source_site, opt);
  r.has_spectrum = true;
  try {
    r.mass = extract_mass(r.spectrum, interpolate);
    r.has_mass = true;
  } catch (const NoSignalError&) {
    r.has_mass = false;
    return false;
  }
  return true;
}

struct TupleOutcome {
  ResultRecord record;
  bool no_signal = false;
};

// Full single-tuple pipeline: build the circuit (native gates when noiseless,
// the hardware decomposition with channel insertions otherwise), run the
// trajectory ensemble, reduce, and attach the spectral analysis.
inline TupleOutcome run_tuple(const SweepTuple& t,
                              const TupleRunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const LatticeSpec lat = build_lattice(t.n);
  const CouplingParams p =
      make_params(t.beta_h, t.dt, opt.n_steps, lat, opt.source_site);
  const bool noisy = t.epsilon2 > 0 || t.zeta > 0;

  NoisyCircuit nc;
  if (noisy) {
    nc = compile_noisy(build_evolution_circuit(lat, p, false),
                       noise_from_epsilon2(t.epsilon2, t.zeta));
  } else {
    nc.base = build_evolution_circuit(lat, p, false);
    nc.noise = NoiseModel{};
  }

  TrajectoryPlan plan;
  plan.n_traj = opt.n_traj;
  plan.master_seed = opt.master_seed;
  plan.shard = opt.shard;
  plan.record_sites = record_sites(lat, p.source_site, opt.policy);

  EnsembleResult ens = run_ensemble(nc, lat, p, plan, opt.mem_limit_bytes);

  TupleOutcome out;
  ResultRecord& r = out.record;
  r.kind = "ensemble";
  r.params = ens.params;
  r.shard = ens.shard;
  r.partial = ens.partial;
  r.site_policy = site_policy_name(opt.policy);
  r.threads = configured_threads();
  r.series = ens.series;
  r.keep_samples = opt.keep_samples || opt.shard.total > 1;
  if (r.keep_samples) r.trajectories = std::move(ens.trajectories);
  r.key = tuple_key(r.params, r.shard, r.site_policy);

  // Sharded partials carry raw samples only; analysis happens after merging.
  if (opt.shard.total == 1)
    out.no_signal = !analyze_record(r, opt.dft, opt.interpolate);

  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

// Writes <key>.json plus CSV views next to it; returns the record file name
// relative to out_dir.
inline std::string write_record_files(const ResultRecord& r,
                                      const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string stem = out_dir + "/" + r.key;
  write_record(r, stem + ".json");
  write_text_file(stem + ".series.csv", series_to_csv(r.series));
  if (r.has_spectrum)
    write_text_file(stem + ".spectrum.csv", spectrum_to_csv(r.spectrum));
  return r.key + ".json";
}

inline std::string manifest_path(const std::string& out_dir) {
  return out_dir + "/manifest.jsonl";
}

// Appends one JSON line under an exclusive flock so concurrent processes
// working disjoint slices of a sweep can share a manifest.
inline void append_manifest(const std::string& path, const json& entry) {
  const std::string line = entry.dump() + "\n";
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) throw IoError("cannot open manifest: " + path);
  if (::flock(fd, LOCK_EX) != 0) {
    ::close(fd);
    throw IoError("cannot lock manifest: " + path);
  }
  const ssize_t wrote = ::write(fd, line.data(), line.size());
  ::flock(fd, LOCK_UN);
  ::close(fd);
  if (wrote != static_cast<ssize_t>(line.size()))
    throw IoError("short write to manifest: " + path);
}

inline std::vector<json> read_manifest(const std::string& path) {
  std::vector<json> out;
  if (!std::filesystem::exists(path)) return out;
  std::ifstream f(path);
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    line_no++;
    if (detail::strip(line).empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw IoError("manifest line " + std::to_string(line_no) +
                    " unparseable: " + e.what());
    }
  }
  return out;
}

inline json manifest_ok_entry(const ResultRecord& r, const std::string& file) {
  json e;
  e["status"] = "ok";
  e["key"] = r.key;
  e["kind"] = r.kind;
  e["file"] = file;
  json t;
  t["n"] = r.params.n;
  t["beta_h"] = r.params.beta_h;
  t["dt"] = r.params.dt;
  t["epsilon2"] = r.params.epsilon2;
  t["zeta_crosstalk"] = r.params.zeta;
  t["n_steps"] = r.params.n_steps;
  t["n_traj"] = r.params.n_traj;
  t["master_seed"] = std::to_string(r.params.master_seed);
  e["tuple"] = std::move(t);
  e["wall_time_s"] = r.wall_time_s;
  return e;
}

inline json manifest_error_entry(const SweepTuple& t, const std::string& key,
                                 const std::string& what) {
  json e;
  e["status"] = "error";
  e["key"] = key;
  json tt;
  tt["n"] = t.n;
  tt["beta_h"] = t.beta_h;
  tt["dt"] = t.dt;
  tt["epsilon2"] = t.epsilon2;
  tt["zeta_crosstalk"] = t.zeta;
  e["tuple"] = std::move(tt);
  e["error"] = what;
  return e;
}

// Consistency check between the manifest and the records on disk. Problems:
// unparseable or missing files, key mismatches, and record files no manifest
// entry accounts for.
struct FsckReport {
  std::vector<std::string> problems;
  int entries = 0;
  int records = 0;
  bool ok() const { return problems.empty(); }
};

inline FsckReport fsck_output_dir(const std::string& out_dir) {
  FsckReport rep;
  std::vector<json> entries;
  try {
    entries = read_manifest(manifest_path(out_dir));
  } catch (const IoError& e) {
    rep.problems.push_back(e.what());
    return rep;
  }
  rep.entries = static_cast<int>(entries.size());

  std::vector<std::string> ok_files;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const json& e = entries[i];
    const std::string where = "manifest entry " + std::to_string(i + 1);
    if (!e.contains("status") || !e.contains("key")) {
      rep.problems.push_back(where + ": missing status or key");
      continue;
    }
    if (e["status"] != "ok") continue;
    if (!e.contains("file")) {
      rep.problems.push_back(where + ": ok entry without file");
      continue;
    }
    const std::string file = e["file"].get<std::string>();
    const std::string path = out_dir + "/" + file;
    if (!std::filesystem::exists(path)) {
      rep.problems.push_back(where + ": missing record file " + file);
      continue;
    }
    try {
      const ResultRecord r = read_record(path);
      if (r.key != e["key"].get<std::string>())
        rep.problems.push_back(where + ": key mismatch in " + file);
    } catch (const std::exception& ex) {
      rep.problems.push_back(where + ": unreadable record " + file + ": " +
                             ex.what());
    }
    ok_files.push_back(file);
  }

  if (!std::filesystem::exists(out_dir)) return rep;
  for (const auto& de : std::filesystem::directory_iterator(out_dir)) {
    if (!de.is_regular_file()) continue;
    const std::string name = de.path().filename().string();
    if (name == "manifest.jsonl") continue;
    if (de.path().extension() != ".json") continue;
    rep.records++;
    bool known = false;
    for (const auto& f : ok_files)
      if (f == name) {
        known = true;
        break;
      }
    if (!known)
      rep.problems.push_back("record file " + name +
                             " has no ok manifest entry");
  }
  return rep;
}

}  // namespace z2sim
