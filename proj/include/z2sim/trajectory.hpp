// Copyright 2026 The z2sim Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

// http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "z2sim/noise.hpp"
#include "z2sim/trajectory_types.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace z2sim {

struct MemoryLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Worker cap: Z2SIM_THREADS if set, else hardware parallelism.
inline int configured_threads() {
  if (const char* env = std::getenv("Z2SIM_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Two statevectors per worker, 16 bytes per amplitude, plus slack for the
// compiled circuit and accumulators.
inline std::uint64_t ensemble_memory_bytes(int n_qubits, int workers) {
  return static_cast<std::uint64_t>(workers) * 2ull *
             (std::uint64_t{1} << n_qubits) * 16ull +
         (std::uint64_t{64} << 20);
}

inline void check_memory_budget(int n_qubits, int workers,
                                std::uint64_t limit_bytes) {
  if (limit_bytes == 0) return;
  const std::uint64_t need = ensemble_memory_bytes(n_qubits, workers);
  if (need > limit_bytes)
    throw MemoryLimitError(
        "statevector pair for " + std::to_string(n_qubits) + " qubits needs " +
        std::to_string(need) + " bytes (2 x 2^" + std::to_string(n_qubits) +
        " x 16 per worker), over the " + std::to_string(limit_bytes) +
        "-byte budget");
}

namespace detail {

// Noisy evolution of the two correlator branches with shared Pauli draws.
// psi1 starts from |0...0> and psi2 from X_source|0...0> (preparation is
// noiseless); each insertion consumes exactly one uniform and the sampled
// string hits both branches, which realizes the channel as a mixture of
// unitaries on the cross term. Records <psi1|X_i|psi2> at every step
// boundary plus t = 0.
inline TrajectorySamples run_trajectory_impl(const NoisyCircuit& nc,
                                             int source_site,
                                             const std::vector<int>& sites,
                                             std::uint64_t seed,
                                             std::uint64_t index) {
  TrajectorySamples out;
  out.index = index;
  out.values.resize(sites.size());

  StateVector psi1 = make_zero_state(nc.base.n_qubits);
  StateVector psi2 = make_zero_state(nc.base.n_qubits);
  apply_pauli(psi2, 1, source_site);

  auto record = [&] {
    for (std::size_t si = 0; si < sites.size(); ++si)
      out.values[si].push_back(pauli_x_cross_term(psi1, psi2, sites[si]));
  };

  RngStream rng(seed);
  record();
  std::size_t ins = 0;
  std::size_t next_boundary = 0;
  const auto& bounds = nc.base.step_boundaries;
  // Insertions are keyed by moment ordinal; compiled circuits hold one gate
  // per moment so the two notions coincide. Ideal circuits (no insertions)
  // run through the same walk.
  for (std::size_t gi = 0; gi < nc.base.moments.size(); ++gi) {
    for (const Gate& g : nc.base.moments[gi]) {
      apply_gate(psi1, g);
      apply_gate(psi2, g);
    }
    while (ins < nc.insertions.size() &&
           nc.insertions[ins].after_gate == gi) {
      const ChannelInsertion& ci = nc.insertions[ins];
      const std::size_t j =
          depol_index_from_uniform(ci.arity, ci.epsilon, rng.uniform());
      for (int t = 0; t < ci.arity; ++t) {
        const int label = static_cast<int>((j >> (2 * t)) & 3);
        if (label == 0) continue;
        apply_pauli(psi1, label, ci.targets[t]);
        apply_pauli(psi2, label, ci.targets[t]);
      }
      ins++;
    }
    if (next_boundary < bounds.size() && gi + 1 == bounds[next_boundary]) {
      record();
      next_boundary++;
    }
  }
  return out;
}

}  // namespace detail

inline TrajectorySamples run_trajectory(const NoisyCircuit& nc,
                                        const CouplingParams& p,
                                        const std::vector<int>& sites,
                                        std::uint64_t seed,
                                        std::uint64_t index = 0) {
  return detail::run_trajectory_impl(nc, p.source_site, sites, seed, index);
}

// Mean and two-pass sample standard error over trajectories, reduced in
// ascending global index order. The reduction order is part of the contract:
// shard merges must match unsharded runs bit for bit.
inline CorrelatorSeries reduce_trajectories(
    const std::vector<TrajectorySamples>& trajectories, int source_site,
    const std::vector<int>& sites, const std::vector<double>& times) {
  CorrelatorSeries s;
  s.source_site = source_site;
  s.sites = sites;
  s.times = times;
  const std::size_t n = trajectories.size();
  const std::size_t nt = times.size();
  s.n_traj_effective = n;
  s.stderr_defined = n >= 2;
  s.values.assign(sites.size(), std::vector<cdouble>(nt, cdouble{0, 0}));
  s.stderr_re.assign(sites.size(), std::vector<double>(nt, 0.0));
  s.stderr_im.assign(sites.size(), std::vector<double>(nt, 0.0));
  if (n == 0) return s;
  for (std::size_t si = 0; si < sites.size(); ++si) {
    for (std::size_t k = 0; k < nt; ++k) {
      cdouble mean{0, 0};
      for (const TrajectorySamples& t : trajectories) mean += t.values[si][k];
      mean /= static_cast<double>(n);
      s.values[si][k] = mean;
      if (n >= 2) {
        double vr = 0, vi = 0;
        for (const TrajectorySamples& t : trajectories) {
          const cdouble d = t.values[si][k] - mean;
          vr += d.real() * d.real();
          vi += d.imag() * d.imag();
        }
        const double denom = static_cast<double>(n - 1) * static_cast<double>(n);
        s.stderr_re[si][k] = std::sqrt(vr / denom);
        s.stderr_im[si][k] = std::sqrt(vi / denom);
      }
    }
  }
  return s;
}

inline void validate(const TrajectoryPlan& plan) {
  if (plan.n_traj < 1)
    throw std::invalid_argument("plan: n_traj must be >= 1");
  if (plan.shard.total < 1 || plan.shard.index >= plan.shard.total)
    throw std::invalid_argument("plan: shard index/total invalid");
  if (plan.record_sites.empty())
    throw std::invalid_argument("plan: record_sites empty");
}

inline RunParams snapshot_params(const LatticeSpec& lat,
                                 const CouplingParams& p,
                                 const NoiseModel& noise,
                                 const TrajectoryPlan& plan) {
  RunParams r;
  r.n = lat.n;
  r.beta_h = p.beta_h;
  r.dt = p.dt;
  r.n_steps = p.n_steps;
  r.source_site = p.source_site;
  r.epsilon1 = noise.epsilon1;
  r.epsilon2 = noise.epsilon2;
  r.zeta = noise.zeta;
  r.t_gate = noise.t_gate;
  r.master_seed = plan.master_seed;
  r.n_traj = plan.n_traj;
  r.sites = plan.record_sites;
  return r;
}

// Runs this shard's slice of the trajectory index range: global indices
// k = shard.index, shard.index + total, ... below n_traj. Seeds depend only
// on (master_seed, k), so any shard layout reproduces identical trajectories.
inline EnsembleResult run_ensemble(const NoisyCircuit& nc,
                                   const LatticeSpec& lat,
                                   const CouplingParams& p,
                                   const TrajectoryPlan& plan,
                                   std::uint64_t mem_limit_bytes = 0) {
  validate(plan);
  const int workers = configured_threads();
  check_memory_budget(nc.base.n_qubits, workers, mem_limit_bytes);

  std::vector<std::uint64_t> indices;
  for (std::uint64_t k = plan.shard.index; k < plan.n_traj;
       k += plan.shard.total)
    indices.push_back(k);

  EnsembleResult out;
  out.params = snapshot_params(lat, p, nc.noise, plan);
  out.shard = plan.shard;
  out.trajectories.resize(indices.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(indices.size()); ++i) {
    const std::uint64_t k = indices[static_cast<std::size_t>(i)];
    out.trajectories[static_cast<std::size_t>(i)] =
        detail::run_trajectory_impl(nc, p.source_site, plan.record_sites,
                                    trajectory_seed(plan.master_seed, k), k);
  }

  std::vector<double> times;
  for (int k = 0; k <= p.n_steps; ++k) times.push_back(k * p.dt);
  out.series = reduce_trajectories(out.trajectories, p.source_site,
                                   plan.record_sites, times);
  return out;
}

namespace detail {

inline void require_equal(bool ok, const std::string& field) {
  if (!ok)
    throw std::invalid_argument("merge_shards: parameter mismatch in " + field);
}

}  // namespace detail

// Pool shard results into the series an unsharded run would have produced.
// Shards must agree on every parameter and jointly cover distinct indices;
// an incomplete cover merges with `partial` set instead of failing.
inline EnsembleResult merge_shards(const std::vector<EnsembleResult>& shards) {
  if (shards.empty())
    throw std::invalid_argument("merge_shards: no shards given");
  const RunParams& ref = shards[0].params;
  for (const EnsembleResult& s : shards) {
    const RunParams& q = s.params;
    detail::require_equal(q.n == ref.n, "n");
    detail::require_equal(q.beta_h == ref.beta_h, "beta_h");
    detail::require_equal(q.dt == ref.dt, "dt");
    detail::require_equal(q.n_steps == ref.n_steps, "n_steps");
    detail::require_equal(q.source_site == ref.source_site, "source_site");
    detail::require_equal(q.epsilon1 == ref.epsilon1, "epsilon1");
    detail::require_equal(q.epsilon2 == ref.epsilon2, "epsilon2");
    detail::require_equal(q.zeta == ref.zeta, "zeta_crosstalk");
    detail::require_equal(q.t_gate == ref.t_gate, "t_gate");
    detail::require_equal(q.master_seed == ref.master_seed, "master_seed");
    detail::require_equal(q.n_traj == ref.n_traj, "n_traj");
    detail::require_equal(q.sites == ref.sites, "record_sites");
    detail::require_equal(s.shard.total == shards[0].shard.total,
                          "shard.total");
  }
  std::vector<bool> seen(shards[0].shard.total, false);
  EnsembleResult out;
  out.params = ref;
  out.shard = {0, 1};
  for (const EnsembleResult& s : shards) {
    if (seen[s.shard.index])
      throw std::invalid_argument("merge_shards: duplicate shard index " +
                                  std::to_string(s.shard.index));
    seen[s.shard.index] = true;
    for (const TrajectorySamples& t : s.trajectories)
      out.trajectories.push_back(t);
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) out.partial = true;

  std::sort(out.trajectories.begin(), out.trajectories.end(),
            [](const TrajectorySamples& a, const TrajectorySamples& b) {
              return a.index < b.index;
            });
  for (std::size_t i = 1; i < out.trajectories.size(); ++i)
    if (out.trajectories[i].index == out.trajectories[i - 1].index)
      throw std::invalid_argument("merge_shards: duplicate trajectory index " +
                                  std::to_string(out.trajectories[i].index));

  std::vector<double> times;
  if (!shards[0].series.times.empty()) times = shards[0].series.times;
  out.series = reduce_trajectories(out.trajectories, ref.source_site,
                                   ref.sites, times);
  return out;
}

}  // namespace z2sim
