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

// Command-line front end: single-tuple runs, parameter sweeps, shard
// merging, re-analysis, exact oracles, benchmarks, gate counting, and
// output-directory consistency checks.
//
// Exit codes: 0 success, 2 configuration error, 3 resource refusal,
// 4 numeric failure (no extractable signal).

#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "z2sim/bench.hpp"
#include "z2sim/config.hpp"
#include "z2sim/exact.hpp"
#include "z2sim/records.hpp"
#include "z2sim/spectral.hpp"
#include "z2sim/sweep.hpp"
#include "z2sim/version.hpp"

namespace {

using namespace z2sim;

struct CommonArgs {
  std::string out_dir;
  int threads = 0;
  std::uint64_t mem_limit = 0;
  std::string window = "none";
  bool subtract_mean = false;
  bool no_interpolate = false;
};

void add_common(CLI::App* sub, CommonArgs* a, const char* out_default) {
  a->out_dir = out_default;
  sub->add_option("--out", a->out_dir, "Output directory")
      ->capture_default_str();
  sub->add_option("--threads", a->threads,
                  "Worker threads (default: Z2SIM_THREADS or hardware)");
  sub->add_option("--mem-limit", a->mem_limit,
                  "Refuse runs whose statevector estimate exceeds this many "
                  "bytes (0 = no limit)");
}

void add_analysis_flags(CLI::App* sub, CommonArgs* a) {
  sub->add_option("--window", a->window, "Spectral window")
      ->check(CLI::IsMember({"none", "hann"}))
      ->capture_default_str();
  sub->add_flag("--subtract-mean", a->subtract_mean,
                "Remove the series mean before the DFT");
  sub->add_flag("--no-interpolate", a->no_interpolate,
                "Skip quadratic peak interpolation");
}

void apply_threads(int threads) {
  if (threads > 0)
    ::setenv("Z2SIM_THREADS", std::to_string(threads).c_str(), 1);
}

DftOptions dft_options(const CommonArgs& a) {
  DftOptions o;
  o.hann = a.window == "hann";
  o.subtract_mean = a.subtract_mean;
  return o;
}

ShardSpec parse_shard(const std::string& s) {
  const std::size_t slash = s.find('/');
  if (slash == std::string::npos)
    throw ConfigError("--shard expects I/N, e.g. 0/4");
  ShardSpec sh;
  try {
    sh.index = std::stoull(s.substr(0, slash));
    sh.total = std::stoull(s.substr(slash + 1));
  } catch (const std::exception&) {
    throw ConfigError("--shard expects integers I/N");
  }
  if (sh.total == 0 || sh.index >= sh.total)
    throw ConfigError("--shard needs 0 <= I < N");
  return sh;
}

SweepConfig load_config(const std::string& path) {
  if (path.empty()) return SweepConfig{};
  return parse_config(read_text_file(path));
}

void print_mass_line(const ResultRecord& r) {
  if (r.has_mass) {
    std::printf("mass: %.6f +/- %.6f%s\n", r.mass.mass, r.mass.uncertainty,
                r.mass.interpolated ? " (interpolated peak)" : "");
  } else {
    std::printf("mass: no usable spectral peak\n");
  }
  if (r.has_rel_err)
    std::printf("relative error vs baseline: %+.2f%%\n", r.rel_err_pct);
}

// ---- simulate ----

struct SimulateArgs {
  CommonArgs common;
  std::string config_path;
  int n = 3;
  double beta_h = 1.6;
  double dt = 0.25;
  double epsilon2 = 0;
  double zeta = 0;
  int steps = 50;
  std::uint64_t traj = 1000;
  std::uint64_t seed = 1;
  int source_site = -1;
  std::string sites = "source";
  std::string shard = "0/1";
  bool keep_samples = false;
  std::string dump_circuit;
  // set-tracking for config-vs-flag precedence
  CLI::Option* on = nullptr;
  CLI::Option* obeta = nullptr;
  CLI::Option* odt = nullptr;
  CLI::Option* osteps = nullptr;
  CLI::Option* otraj = nullptr;
  CLI::Option* oseed = nullptr;
  CLI::Option* osites = nullptr;
  CLI::Option* osource = nullptr;
  CLI::Option* oout = nullptr;
};

int cmd_simulate(SimulateArgs& a) {
  apply_threads(a.common.threads);

  SitePolicy policy = parse_site_policy(a.sites);
  if (!a.config_path.empty()) {
    // Config supplies defaults; explicit flags win. List-valued config keys
    // contribute their first element.
    const SweepConfig cfg = load_config(a.config_path);
    if (!*a.on) a.n = cfg.n.front();
    if (!*a.obeta) a.beta_h = cfg.beta_h.front();
    if (!*a.odt) a.dt = cfg.dt.front();
    if (!*a.osteps) a.steps = cfg.n_steps;
    if (!*a.otraj) a.traj = cfg.n_traj;
    if (!*a.oseed) a.seed = cfg.master_seed;
    if (!*a.osites) policy = cfg.record_sites;
    if (!*a.osource) a.source_site = cfg.source_site;
    if (!*a.oout) a.common.out_dir = cfg.out_dir;
  }

  SweepTuple t{a.n, a.beta_h, a.dt, a.epsilon2, a.zeta,
               a.epsilon2 == 0 && a.zeta == 0};
  TupleRunOptions opt;
  opt.n_steps = a.steps;
  opt.n_traj = a.traj;
  opt.master_seed = a.seed;
  opt.shard = parse_shard(a.shard);
  opt.policy = policy;
  opt.source_site = a.source_site;
  opt.dft = dft_options(a.common);
  opt.interpolate = !a.common.no_interpolate;
  opt.keep_samples = a.keep_samples;
  opt.mem_limit_bytes = a.common.mem_limit;

  if (!a.dump_circuit.empty()) {
    const LatticeSpec lat = build_lattice(t.n);
    const CouplingParams p =
        make_params(t.beta_h, t.dt, opt.n_steps, lat, opt.source_site);
    Circuit ideal = build_evolution_circuit(lat, p, false);
    const bool noisy = t.epsilon2 > 0 || t.zeta > 0;
    write_text_file(a.dump_circuit,
                    to_text(noisy ? compile_noisy(ideal,
                                                  noise_from_epsilon2(
                                                      t.epsilon2, t.zeta))
                                        .base
                                  : ideal));
    std::printf("circuit written to %s\n", a.dump_circuit.c_str());
  }

  const TupleOutcome oc = run_tuple(t, opt);
  const std::string file = write_record_files(oc.record, a.common.out_dir);
  append_manifest(manifest_path(a.common.out_dir),
                  manifest_ok_entry(oc.record, file));

  std::printf("key: %s\n", oc.record.key.c_str());
  std::printf("record: %s/%s\n", a.common.out_dir.c_str(), file.c_str());
  std::printf("trajectories: %llu  threads: %d  wall: %.2fs\n",
              static_cast<unsigned long long>(
                  oc.record.series.n_traj_effective),
              oc.record.threads, oc.record.wall_time_s);
  if (opt.shard.total > 1) {
    std::printf("shard %llu/%llu: raw samples retained; analysis happens "
                "after merge\n",
                static_cast<unsigned long long>(opt.shard.index),
                static_cast<unsigned long long>(opt.shard.total));
    return 0;
  }
  print_mass_line(oc.record);
  return oc.no_signal ? 4 : 0;
}

// ---- sweep ----

struct SweepArgs {
  CommonArgs common;
  std::string config_path;
  bool dry_run = false;
  CLI::Option* oout = nullptr;
};

int cmd_sweep(SweepArgs& a) {
  apply_threads(a.common.threads);
  SweepConfig cfg = load_config(a.config_path);
  if (*a.oout) cfg.out_dir = a.common.out_dir;

  const std::vector<SweepTuple> tuples = expand_tuples(cfg);
  std::size_t baselines = 0;
  for (const auto& t : tuples) baselines += t.baseline ? 1 : 0;
  std::printf("sweep: %zu tuples (%zu noisy + %zu noiseless baselines) -> %s\n",
              tuples.size(), tuples.size() - baselines, baselines,
              cfg.out_dir.c_str());
  if (a.dry_run) {
    for (const auto& t : tuples)
      std::printf("  n=%d beta_h=%g dt=%g epsilon2=%g zeta=%g%s\n", t.n,
                  t.beta_h, t.dt, t.epsilon2, t.zeta,
                  t.baseline ? "  [baseline]" : "");
    return 0;
  }

  TupleRunOptions opt = options_from_config(cfg);
  opt.dft = dft_options(a.common);
  opt.interpolate = !a.common.no_interpolate;
  opt.mem_limit_bytes = a.common.mem_limit;

  std::set<std::string> ok_keys;
  for (const json& e : read_manifest(manifest_path(cfg.out_dir)))
    if (e.value("status", "") == "ok" && e.contains("key"))
      ok_keys.insert(e["key"].get<std::string>());

  std::map<std::string, double> baseline_mass;
  int ran = 0, skipped = 0, failed = 0, no_signal = 0;
  for (const SweepTuple& t : tuples) {
    const std::string key = planned_key(t, opt);
    const std::string path = cfg.out_dir + "/" + key + ".json";
    if (ok_keys.count(key) && std::filesystem::exists(path)) {
      skipped++;
      if (t.baseline) {
        try {
          const ResultRecord r = read_record(path);
          if (r.has_mass) baseline_mass[key] = r.mass.mass;
        } catch (const std::exception&) {
          // fsck reports unreadable records; the sweep just loses pairing.
        }
      }
      std::printf("[skip] %s\n", key.c_str());
      continue;
    }
    try {
      TupleOutcome oc = run_tuple(t, opt);
      if (t.baseline) {
        if (oc.record.has_mass) baseline_mass[key] = oc.record.mass.mass;
      } else {
        SweepTuple base = t;
        base.epsilon2 = 0;
        base.zeta = 0;
        base.baseline = true;
        const std::string bkey = planned_key(base, opt);
        const auto it = baseline_mass.find(bkey);
        if (it != baseline_mass.end() && oc.record.has_mass &&
            it->second > 0) {
          oc.record.has_rel_err = true;
          oc.record.rel_err_pct =
              relative_mass_error(oc.record.mass.mass, it->second);
          oc.record.baseline_key = bkey;
        }
      }
      const std::string file = write_record_files(oc.record, cfg.out_dir);
      append_manifest(manifest_path(cfg.out_dir),
                      manifest_ok_entry(oc.record, file));
      ok_keys.insert(key);
      ran++;
      if (oc.no_signal) no_signal++;
      std::printf("[ok]   %s  n=%d beta_h=%g eps2=%g zeta=%g%s\n", key.c_str(),
                  t.n, t.beta_h, t.epsilon2, t.zeta,
                  oc.no_signal ? "  (no spectral signal)" : "");
    } catch (const std::exception& e) {
      failed++;
      append_manifest(manifest_path(cfg.out_dir),
                      manifest_error_entry(t, key, e.what()));
      std::printf("[fail] %s  %s\n", key.c_str(), e.what());
    }
  }
  std::printf("sweep done: %d ran, %d skipped, %d failed, %d without signal\n",
              ran, skipped, failed, no_signal);
  return failed > 0 ? 4 : 0;
}

// ---- merge ----

struct MergeArgs {
  CommonArgs common;
  std::vector<std::string> files;
  bool keep_samples = false;
};

int cmd_merge(MergeArgs& a) {
  std::vector<EnsembleResult> shards;
  std::string policy = "source";
  for (const std::string& f : a.files) {
    const ResultRecord r = read_record(f);
    if (r.trajectories.empty())
      throw ConfigError("record " + f +
                        " carries no per-trajectory samples; rerun the shard "
                        "with samples retained");
    EnsembleResult e;
    e.params = r.params;
    e.shard = r.shard;
    e.partial = r.partial;
    e.trajectories = r.trajectories;
    e.series = r.series;
    shards.push_back(std::move(e));
    policy = r.site_policy;
  }
  EnsembleResult merged = merge_shards(shards);

  ResultRecord r;
  r.kind = "merged";
  r.params = merged.params;
  r.shard = merged.shard;
  r.partial = merged.partial;
  r.site_policy = policy;
  r.threads = configured_threads();
  r.series = merged.series;
  r.keep_samples = a.keep_samples;
  if (a.keep_samples) r.trajectories = std::move(merged.trajectories);
  r.key = tuple_key(r.params, r.shard, r.site_policy);
  const bool signal = analyze_record(r, dft_options(a.common),
                                     !a.common.no_interpolate);

  const std::string file = write_record_files(r, a.common.out_dir);
  append_manifest(manifest_path(a.common.out_dir),
                  manifest_ok_entry(r, file));
  std::printf("merged %zu shards -> %s/%s\n", a.files.size(),
              a.common.out_dir.c_str(), file.c_str());
  std::printf("n_traj_effective: %llu%s\n",
              static_cast<unsigned long long>(r.series.n_traj_effective),
              r.partial ? "  (partial shard cover)" : "");
  print_mass_line(r);
  return signal ? 0 : 4;
}

// ---- analyze ----

struct AnalyzeArgs {
  CommonArgs common;
  std::string file;
  std::string baseline;
  int site = -1;
  double match_beta_e = 0;
  double match_beta_h = 0;
};

int cmd_analyze(AnalyzeArgs& a) {
  ResultRecord r = read_record(a.file);
  const int site = a.site < 0 ? r.params.source_site : a.site;

  r.spectrum = dft(r.series, site, dft_options(a.common));
  r.has_spectrum = true;
  bool signal = true;
  try {
    r.mass = extract_mass(r.spectrum, !a.common.no_interpolate);
    r.has_mass = true;
  } catch (const NoSignalError& e) {
    r.has_mass = false;
    signal = false;
    std::printf("no signal: %s\n", e.what());
  }

  if (!a.baseline.empty() && r.has_mass) {
    const ResultRecord base = read_record(a.baseline);
    if (!base.has_mass)
      throw ConfigError("baseline record has no extracted mass: " +
                        a.baseline);
    r.has_rel_err = true;
    r.rel_err_pct = relative_mass_error(r.mass.mass, base.mass.mass);
    r.baseline_key = base.key;
  }

  if (a.match_beta_e > 0) {
    const double bh = a.match_beta_h > 0 ? a.match_beta_h : r.params.beta_h;
    const XiRoot root = match_couplings(a.match_beta_e, bh);
    r.has_xi = true;
    r.xi_anisotropy = root.xi;
    r.xi_multiple_roots = root.multiple_roots;
    std::printf("xi_anisotropy: %.9g%s  (beta_e=%g, beta_h=%g)\n", root.xi,
                root.multiple_roots ? "  [multiple roots; smallest kept]" : "",
                a.match_beta_e, bh);
  }

  write_record(r, a.file);
  const std::string stem = a.file.substr(0, a.file.rfind(".json"));
  write_text_file(stem + ".spectrum.csv", spectrum_to_csv(r.spectrum));
  std::printf("updated %s (spectrum site %d)\n", a.file.c_str(), site);
  print_mass_line(r);
  return signal ? 0 : 4;
}

// ---- oracle ----

struct OracleArgs {
  CommonArgs common;
  int n = 2;
  double beta_h = 1.6;
  double dt = 0.25;
  double epsilon2 = 0;
  double zeta = 0;
  int steps = 10;
  int source_site = -1;
  std::string sites = "source";
};

int cmd_oracle(OracleArgs& a) {
  apply_threads(a.common.threads);
  const LatticeSpec lat = build_lattice(a.n);
  const CouplingParams p =
      make_params(a.beta_h, a.dt, a.steps, lat, a.source_site);
  const SitePolicy policy = parse_site_policy(a.sites);
  const std::vector<int> sites = record_sites(lat, p.source_site, policy);
  std::vector<double> times;
  for (int k = 0; k <= a.steps; ++k) times.push_back(k * a.dt);

  const bool noisy = a.epsilon2 > 0 || a.zeta > 0;
  ResultRecord r;
  r.kind = "oracle";
  if (noisy) {
    // Exact channel evolution of the compiled circuit on the cross operator.
    const NoiseModel model = noise_from_epsilon2(a.epsilon2, a.zeta);
    const NoisyCircuit nc =
        compile_noisy(build_evolution_circuit(lat, p, false), model);
    const DensityEvolution ev =
        evolve_density_matrix(nc, make_cross_density(lat.n_sites,
                                                     p.source_site),
                              sites, p.dt, p.source_site);
    r.series = ev.series;
    TrajectoryPlan plan;
    plan.n_traj = 0;
    plan.master_seed = 0;
    plan.record_sites = sites;
    r.params = snapshot_params(lat, p, model, plan);
  } else {
    // Continuous-time exact correlator from the dense Hamiltonian.
    const ExactCorrelator ec = exact_correlator(lat, p, times, sites);
    r.series = ec.series;
    TrajectoryPlan plan;
    plan.n_traj = 0;
    plan.master_seed = 0;
    plan.record_sites = sites;
    r.params = snapshot_params(lat, p, NoiseModel{}, plan);
  }
  r.site_policy = site_policy_name(policy);
  r.threads = configured_threads();
  r.key = tuple_key(r.params, r.shard, r.site_policy) + "-oracle";
  const bool signal = analyze_record(r, dft_options(a.common),
                                     !a.common.no_interpolate);

  const std::string file = write_record_files(r, a.common.out_dir);
  append_manifest(manifest_path(a.common.out_dir),
                  manifest_ok_entry(r, file));
  std::printf("oracle (%s): %s/%s\n",
              noisy ? "density-matrix channel" : "exact spectral",
              a.common.out_dir.c_str(), file.c_str());
  print_mass_line(r);
  return signal ? 0 : 4;
}

// ---- bench ----

struct BenchArgs {
  CommonArgs common;
  std::vector<int> sizes = {3, 4};
  int steps = 20;
  std::uint64_t traj = 3;
  bool noiseless = false;
  bool no_scaling = false;
};

int cmd_bench(BenchArgs& a) {
  apply_threads(a.common.threads);
  std::printf("threads: %d  precision: complex<double>\n",
              configured_threads());
  if (!a.no_scaling) {
    const GateScaling g = measure_gate_scaling();
    std::printf(
        "gate apply: %dq %.3e s, %dq %.3e s, ratio %.1f (2^4 = 16 expected)\n",
        g.small_qubits, g.small_s, g.large_qubits, g.large_s, g.ratio);
  }
  std::printf("%3s %7s %6s %9s %9s %10s %22s\n", "n", "qubits", "mode",
              "1q/step", "2q/step", "sec", "sec/100-step-traj");
  for (int n : a.sizes) {
    const BenchRow row =
        bench_grid(n, !a.noiseless, a.steps, a.traj, a.common.mem_limit);
    std::printf("%3d %7d %6s %9llu %9llu %10.3f %22.4f\n", row.n, row.qubits,
                row.noisy ? "noisy" : "ideal",
                static_cast<unsigned long long>(row.gates_1q),
                static_cast<unsigned long long>(row.gates_2q), row.seconds,
                row.sec_per_100step_traj);
  }
  return 0;
}

// ---- gatecount ----

struct GatecountArgs {
  std::vector<int> sizes = {3, 4, 5, 6};
  bool noisy = false;
};

int cmd_gatecount(GatecountArgs& a) {
  if (a.noisy)
    std::printf("%3s %7s %9s %9s %12s %8s\n", "n", "qubits", "1q/step",
                "2q/step", "sqiswap", "uzz");
  else
    std::printf("%3s %7s %9s %9s\n", "n", "qubits", "1q/step", "2q/step");
  for (int n : a.sizes) {
    const LatticeSpec lat = build_lattice(n);
    const CouplingParams p = make_params(1.6, 0.25, 1, lat);
    Circuit step = build_trotter_step(lat, p);
    if (a.noisy) {
      const GateCounts c =
          count_gates(compile_noisy(step, noise_from_epsilon2(5e-3, 1e5)).base);
      std::printf("%3d %7d %9zu %9zu %12zu %8zu\n", n, lat.n_sites,
                  c.one_qubit, c.two_qubit,
                  c.by_name.count("sqiswap") ? c.by_name.at("sqiswap") : 0,
                  c.by_name.count("uzz") ? c.by_name.at("uzz") : 0);
    } else {
      const GateCounts c = count_gates(step);
      std::printf("%3d %7d %9zu %9zu\n", n, lat.n_sites, c.one_qubit,
                  c.two_qubit);
    }
  }
  if (!a.noisy)
    std::printf(
        "note: counts are per Trotter step; tallies that fold the one-off "
        "source-excitation X gate into the first step quote one more "
        "one-qubit gate (e.g. 18 instead of 17 for the 3x3 grid).\n");
  return 0;
}

// ---- fsck ----

int cmd_fsck(const std::string& out_dir) {
  const FsckReport rep = fsck_output_dir(out_dir);
  for (const std::string& p : rep.problems)
    std::printf("problem: %s\n", p.c_str());
  std::printf("fsck %s: %d manifest entries, %d record files, %zu problems\n",
              out_dir.c_str(), rep.entries, rep.records, rep.problems.size());
  return rep.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trotterized circuit simulator for the dual representation of "
               "(2+1)d Z2 lattice gauge theory"};
  app.set_version_flag("--version", kVersionString);
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* s_sim = app.add_subcommand(
      "simulate", "Run one parameter tuple and write a result record");
  s_sim->add_option("--config", sim.config_path,
                    "Config file supplying defaults");
  sim.on = s_sim->add_option("-n,--n", sim.n, "Grid side length")
               ->capture_default_str();
  sim.obeta = s_sim->add_option("--beta-h", sim.beta_h, "Coupling beta_H")
                  ->capture_default_str();
  sim.odt =
      s_sim->add_option("--dt", sim.dt, "Trotter step")->capture_default_str();
  s_sim->add_option("--epsilon2", sim.epsilon2,
                    "Two-qubit depolarizing strength (epsilon1 = epsilon2/10)")
      ->capture_default_str();
  s_sim->add_option("--zeta", sim.zeta, "Crosstalk strength (1/s)")
      ->capture_default_str();
  sim.osteps = s_sim->add_option("--steps", sim.steps, "Trotter steps")
                   ->capture_default_str();
  sim.otraj = s_sim->add_option("--traj", sim.traj, "Trajectories")
                  ->capture_default_str();
  sim.oseed = s_sim->add_option("--seed", sim.seed, "Master seed")
                  ->capture_default_str();
  sim.osource =
      s_sim->add_option("--source-site", sim.source_site,
                        "Source site index (-1 = center)");
  sim.osites = s_sim->add_option("--sites", sim.sites,
                                 "Recorded sites: source|symmetry|all")
                   ->check(CLI::IsMember({"source", "symmetry", "all"}))
                   ->capture_default_str();
  s_sim->add_option("--shard", sim.shard, "Shard I/N of the trajectory range")
      ->capture_default_str();
  s_sim->add_flag("--keep-samples", sim.keep_samples,
                  "Retain per-trajectory samples in the record");
  s_sim->add_option("--dump-circuit", sim.dump_circuit,
                    "Also write the executed circuit as text");
  add_common(s_sim, &sim.common, "results");
  sim.oout = s_sim->get_option("--out");
  add_analysis_flags(s_sim, &sim.common);

  SweepArgs swp;
  CLI::App* s_swp = app.add_subcommand(
      "sweep", "Run the full parameter grid from a config file (resumable)");
  s_swp->add_option("--config", swp.config_path, "Sweep config file");
  s_swp->add_flag("--dry-run", swp.dry_run, "List tuples without running");
  add_common(s_swp, &swp.common, "results");
  swp.oout = s_swp->get_option("--out");
  add_analysis_flags(s_swp, &swp.common);

  MergeArgs mrg;
  CLI::App* s_mrg = app.add_subcommand(
      "merge", "Merge shard records into one analyzed record");
  s_mrg->add_option("files", mrg.files, "Shard record JSON files")
      ->required()
      ->expected(-1);
  s_mrg->add_flag("--keep-samples", mrg.keep_samples,
                  "Retain per-trajectory samples in the merged record");
  add_common(s_mrg, &mrg.common, "results");
  add_analysis_flags(s_mrg, &mrg.common);

  AnalyzeArgs anl;
  CLI::App* s_anl = app.add_subcommand(
      "analyze", "Recompute spectrum and mass for an existing record");
  s_anl->add_option("file", anl.file, "Record JSON file")->required();
  s_anl->add_option("--site", anl.site,
                    "Correlator site to analyze (-1 = source)");
  s_anl->add_option("--baseline", anl.baseline,
                    "Noiseless record for relative-error comparison");
  s_anl->add_option("--match-beta-e", anl.match_beta_e,
                    "Also solve the coupling-matching root for this beta_E");
  s_anl->add_option("--match-beta-h", anl.match_beta_h,
                    "beta_H for --match-beta-e (default: record's beta_H)");
  add_analysis_flags(s_anl, &anl.common);

  OracleArgs orc;
  CLI::App* s_orc = app.add_subcommand(
      "oracle", "Exact small-system reference record (dense methods)");
  s_orc->add_option("-n,--n", orc.n, "Grid side length")
      ->capture_default_str();
  s_orc->add_option("--beta-h", orc.beta_h, "Coupling beta_H")
      ->capture_default_str();
  s_orc->add_option("--dt", orc.dt, "Sample spacing / Trotter step")
      ->capture_default_str();
  s_orc->add_option("--epsilon2", orc.epsilon2,
                    "Two-qubit depolarizing strength")
      ->capture_default_str();
  s_orc->add_option("--zeta", orc.zeta, "Crosstalk strength (1/s)")
      ->capture_default_str();
  s_orc->add_option("--steps", orc.steps, "Number of samples after t = 0")
      ->capture_default_str();
  s_orc->add_option("--source-site", orc.source_site,
                    "Source site index (-1 = center)");
  s_orc->add_option("--sites", orc.sites,
                    "Recorded sites: source|symmetry|all")
      ->check(CLI::IsMember({"source", "symmetry", "all"}))
      ->capture_default_str();
  add_common(s_orc, &orc.common, "results");
  add_analysis_flags(s_orc, &orc.common);

  BenchArgs bch;
  CLI::App* s_bch = app.add_subcommand(
      "bench", "Trajectory throughput and per-gate scaling benchmarks");
  s_bch->add_option("--sizes", bch.sizes, "Grid sizes to benchmark")
      ->capture_default_str();
  s_bch->add_option("--steps", bch.steps, "Trotter steps per trajectory")
      ->capture_default_str();
  s_bch->add_option("--traj", bch.traj, "Trajectories per size")
      ->capture_default_str();
  s_bch->add_flag("--noiseless", bch.noiseless,
                  "Benchmark the native-gate circuit instead of the "
                  "decomposed noisy one");
  s_bch->add_flag("--no-scaling", bch.no_scaling,
                  "Skip the 16/20-qubit per-gate scaling measurement");
  add_common(s_bch, &bch.common, "results");

  GatecountArgs gct;
  CLI::App* s_gct =
      app.add_subcommand("gatecount", "Per-Trotter-step gate counts");
  s_gct->add_option("-n,--n", gct.sizes, "Grid sizes")->capture_default_str();
  s_gct->add_flag("--noisy", gct.noisy,
                  "Count the hardware-native decomposition with crosstalk "
                  "insertions");

  std::string fsck_dir = "results";
  CLI::App* s_fsck = app.add_subcommand(
      "fsck", "Verify manifest/record consistency in an output directory");
  s_fsck->add_option("--out", fsck_dir, "Output directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (*s_sim) return cmd_simulate(sim);
    if (*s_swp) return cmd_sweep(swp);
    if (*s_mrg) return cmd_merge(mrg);
    if (*s_anl) return cmd_analyze(anl);
    if (*s_orc) return cmd_oracle(orc);
    if (*s_bch) return cmd_bench(bch);
    if (*s_gct) return cmd_gatecount(gct);
    if (*s_fsck) return cmd_fsck(fsck_dir);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "record error: %s\n", e.what());
    return 2;
  } catch (const MemoryLimitError& e) {
    std::fprintf(stderr, "refusing: %s\n", e.what());
    return 3;
  } catch (const SizeLimitError& e) {
    std::fprintf(stderr, "refusing: %s\n", e.what());
    return 3;
  } catch (const NoSignalError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 4;
  } catch (const NoRootError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
