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

#include <cstdint>
#include <vector>

#include "z2sim/circuit.hpp"
#include "z2sim/rng.hpp"
#include "z2sim/trotter.hpp"

namespace z2sim {

struct NoiseModel {
  double epsilon1 = 0.0;  // depolarizing strength after each 1q gate
  double epsilon2 = 0.0;  // depolarizing strength after each logical 2q gate
  double zeta = 0.0;      // crosstalk interaction strength, 1/s
  double t_gate = 1e-8;   // sqrt(iSWAP) duration, s

  bool depolarizing() const { return epsilon1 > 0 || epsilon2 > 0; }
};

inline void validate(const NoiseModel& m) {
  if (m.epsilon1 < 0 || m.epsilon1 > 1 || m.epsilon2 < 0 || m.epsilon2 > 1)
    throw std::invalid_argument("noise: epsilon out of [0,1]");
  if (m.zeta < 0) throw std::invalid_argument("noise: zeta must be >= 0");
  if (!(m.t_gate > 0)) throw std::invalid_argument("noise: t_gate must be > 0");
}

// Standard strength split between the two depolarizing channels.
inline NoiseModel noise_from_epsilon2(double epsilon2, double zeta = 0.0,
                                      double t_gate = 1e-8) {
  NoiseModel m;
  m.epsilon2 = epsilon2;
  m.epsilon1 = epsilon2 / 10.0;
  m.zeta = zeta;
  m.t_gate = t_gate;
  validate(m);
  return m;
}

// Per-target Pauli labels: 0 = I, 1 = X, 2 = Y, 3 = Z.
struct PauliString {
  int n_targets = 0;
  std::array<std::uint8_t, 2> labels{};
  std::array<int, 2> targets{};

  bool identity() const {
    for (int i = 0; i < n_targets; ++i)
      if (labels[i] != 0) return false;
    return true;
  }
};

// Depolarizing pmf over 4^n Pauli strings, identity first. The flat index
// encodes base-4 digits, first target in the low digit.
inline std::vector<double> depol_pmf(int n, double epsilon) {
  if (n != 1 && n != 2) throw std::invalid_argument("depol_pmf: n must be 1 or 2");
  if (epsilon < 0 || epsilon > 1)
    throw std::invalid_argument("depol_pmf: epsilon out of [0,1]");
  const std::size_t size = n == 1 ? 4 : 16;
  const double q = 1.0 / static_cast<double>(size);  // 4^{-n}, exact
  std::vector<double> p(size, q * epsilon);
  p[0] = 1.0 - (1.0 - q) * epsilon;
  return p;
}

namespace detail {

// Map one uniform draw to a Pauli-string index under depol_pmf(n, eps).
// Exactly one draw is consumed per insertion regardless of outcome, keeping
// downstream draws aligned across noise strengths.
inline std::size_t depol_index_from_uniform(int n, double epsilon, double u) {
  const std::size_t size = n == 1 ? 4 : 16;
  const double q = 1.0 / static_cast<double>(size);
  const double p0 = 1.0 - (1.0 - q) * epsilon;
  if (u < p0 || epsilon <= 0) return 0;
  const double each = q * epsilon;
  std::size_t j = 1 + static_cast<std::size_t>((u - p0) / each);
  return j < size ? j : size - 1;
}

}  // namespace detail

inline PauliString sample_pauli(int n, double epsilon, RngStream& rng) {
  if (n != 1 && n != 2) throw std::invalid_argument("sample_pauli: n must be 1 or 2");
  const std::size_t j = detail::depol_index_from_uniform(n, epsilon, rng.uniform());
  PauliString s;
  s.n_targets = n;
  s.labels[0] = static_cast<std::uint8_t>(j & 3);
  if (n == 2) s.labels[1] = static_cast<std::uint8_t>((j >> 2) & 3);
  return s;
}

// 4x4 crosstalk matrix diag(1, 1, 1, e^{-i 2 pi zeta T}).
inline Gate uzz_matrix(double zeta, double t_gate, int a = 0, int b = 1) {
  return gate_uzz_crosstalk(a, b, zeta, t_gate);
}

// A depolarizing sampling point firing after base gate `after_gate`.
struct ChannelInsertion {
  std::size_t after_gate;
  int arity;
  std::array<int, 2> targets;
  double epsilon;
};

// Hardware-native circuit: one gate per moment (every 2q gate is sqrt(iSWAP)
// or U_ZZ) plus the ordered channel insertion schedule. step_boundaries on
// `base` are in gate ordinals since moments hold one gate each.
struct NoisyCircuit {
  Circuit base;
  std::vector<ChannelInsertion> insertions;
  NoiseModel noise;

  std::size_t gate_count() const { return base.moments.size(); }
};

// Compile an ideal circuit (gate set {RX, RY, RZ, X, ZZ}) to native form:
// each ZZ becomes its 4-sqrt(iSWAP) decomposition with U_ZZ prepended before
// every sqrt(iSWAP); a 1q depolarizing insertion follows every native
// single-qubit gate (decomposition locals included) and one 2q insertion
// follows each logical ZZ block. Zero-strength insertions are dropped so
// noiseless compilations consume no random draws. Deterministic.
inline NoisyCircuit compile_noisy(const Circuit& ideal, const NoiseModel& model) {
  validate(ideal);
  validate(model);
  NoisyCircuit nc;
  nc.noise = model;
  nc.base.n_qubits = ideal.n_qubits;

  auto push_gate = [&nc](const Gate& g) {
    nc.base.moments.push_back({g});
    return nc.base.moments.size() - 1;
  };
  auto push_1q = [&](const Gate& g) {
    const std::size_t at = push_gate(g);
    if (model.epsilon1 > 0)
      nc.insertions.push_back({at, 1, {g.targets[0], -1}, model.epsilon1});
  };

  std::size_t next_cut = 0;
  for (std::size_t mi = 0; mi < ideal.moments.size(); ++mi) {
    for (const Gate& g : ideal.moments[mi]) {
      switch (g.kind) {
        case GateKind::kX:
        case GateKind::kRx:
        case GateKind::kRy:
        case GateKind::kRz:
          push_1q(g);
          break;
        case GateKind::kZz: {
          const int a = g.targets[0], b = g.targets[1];
          std::size_t last = 0;
          for (const Gate& native : decompose_zz_to_sqiswap(a, b, g.param)) {
            if (native.arity == 2) {
              push_gate(gate_uzz_crosstalk(a, b, model.zeta, model.t_gate));
              last = push_gate(native);
            } else {
              push_1q(native);
              last = nc.base.moments.size() - 1;
            }
          }
          if (model.epsilon2 > 0)
            nc.insertions.push_back({last, 2, {a, b}, model.epsilon2});
          break;
        }
        default:
          throw std::invalid_argument("compile_noisy: unsupported gate kind");
      }
    }
    if (next_cut < ideal.step_boundaries.size() &&
        mi + 1 == ideal.step_boundaries[next_cut]) {
      nc.base.step_boundaries.push_back(nc.base.moments.size());
      next_cut++;
    }
  }
  return nc;
}

}  // namespace z2sim
