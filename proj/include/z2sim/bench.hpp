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

#include <chrono>
#include <cstdint>

#include "z2sim/sweep.hpp"

namespace z2sim {

namespace detail {

inline double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Seconds per single-qubit gate application on an n-qubit state, best of
// three timed passes, averaged over a cycle of target qubits so memory
// stride effects are represented evenly.
inline double time_gate_apply_s(int n_qubits, int reps) {
  StateVector psi = make_zero_state(n_qubits);
  for (int q = 0; q < n_qubits; ++q)
    apply_gate(psi, gate_rx(q, 0.3));  // warm the state and the code path
  double best = 1e300;
  for (int pass = 0; pass < 3; ++pass) {
    const double t0 = now_s();
    for (int r = 0; r < reps; ++r)
      apply_gate(psi, gate_rx(r % n_qubits, 0.3));
    const double dt = (now_s() - t0) / reps;
    if (dt < best) best = dt;
  }
  return best;
}

}  // namespace detail

// Per-gate apply times on two state sizes; the ratio tracks the 2^n cost
// scaling of dense statevector updates (16x expected for 16 -> 20 qubits,
// modulo cache effects).
struct GateScaling {
  int small_qubits = 16;
  int large_qubits = 20;
  double small_s = 0;
  double large_s = 0;
  double ratio = 0;
};

inline GateScaling measure_gate_scaling(int small_qubits = 16,
                                        int large_qubits = 20) {
  GateScaling g;
  g.small_qubits = small_qubits;
  g.large_qubits = large_qubits;
  g.small_s = detail::time_gate_apply_s(small_qubits, 192);
  g.large_s = detail::time_gate_apply_s(large_qubits, 24);
  g.ratio = g.large_s / g.small_s;
  return g;
}

// One benchmark row: a real trajectory workload at the given size,
// normalized to seconds per 100-Trotter-step trajectory.
struct BenchRow {
  int n = 0;
  int qubits = 0;
  bool noisy = false;
  int steps = 0;
  std::uint64_t traj = 0;
  std::uint64_t gates_1q = 0;  // per Trotter step
  std::uint64_t gates_2q = 0;  // per Trotter step
  double seconds = 0;
  double sec_per_100step_traj = 0;
};

inline BenchRow bench_grid(int n, bool noisy, int steps, std::uint64_t traj,
                           std::uint64_t mem_limit_bytes = 0) {
  const LatticeSpec lat = build_lattice(n);
  const CouplingParams p = make_params(1.6, 0.25, steps, lat);
  NoisyCircuit nc;
  if (noisy) {
    nc = compile_noisy(build_evolution_circuit(lat, p, false),
                       noise_from_epsilon2(5e-3, 1e5));
  } else {
    nc.base = build_evolution_circuit(lat, p, false);
  }

  BenchRow row;
  row.n = n;
  row.qubits = lat.n_sites;
  row.noisy = noisy;
  row.steps = steps;
  row.traj = traj;
  const Circuit step = build_trotter_step(lat, p);
  GateCounts counts = count_gates(noisy ? compile_noisy(
                                              step, noise_from_epsilon2(
                                                        5e-3, 1e5))
                                              .base
                                        : step);
  row.gates_1q = counts.one_qubit;
  row.gates_2q = counts.two_qubit;

  TrajectoryPlan plan;
  plan.n_traj = traj;
  plan.master_seed = 7;
  plan.record_sites = {p.source_site};

  const double t0 = detail::now_s();
  run_ensemble(nc, lat, p, plan, mem_limit_bytes);
  row.seconds = detail::now_s() - t0;
  row.sec_per_100step_traj =
      row.seconds * (100.0 / steps) / static_cast<double>(traj);
  return row;
}

}  // namespace z2sim
