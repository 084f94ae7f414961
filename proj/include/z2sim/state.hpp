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
#include <stdexcept>
#include <vector>

#include "z2sim/gates.hpp"

namespace z2sim {

using index_t = std::uint64_t;

// Amplitudes are little-endian: qubit q is bit q of the amplitude index.
struct StateVector {
  int n_qubits = 0;
  std::vector<cdouble> amp;

  index_t dim() const { return index_t{1} << n_qubits; }
};

// Parallelize kernels only past this size; below it thread startup dominates.
inline constexpr index_t kParallelThreshold = index_t{1} << 14;

inline StateVector make_zero_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 30)
    throw std::invalid_argument("state: qubit count out of range [1,30]");
  StateVector s;
  s.n_qubits = n_qubits;
  s.amp.assign(index_t{1} << n_qubits, cdouble{0, 0});
  s.amp[0] = 1.0;
  return s;
}

inline StateVector make_basis_state(int n_qubits, index_t basis) {
  StateVector s = make_zero_state(n_qubits);
  if (basis >= s.dim())
    throw std::out_of_range("state: basis index exceeds dimension");
  s.amp[0] = 0.0;
  s.amp[basis] = 1.0;
  return s;
}

namespace detail {

inline void apply_1q(StateVector& s, const Gate& g) {
  const int q = g.targets[0];
  const index_t mask = index_t{1} << q;
  const index_t low = mask - 1;
  const index_t pairs = s.dim() >> 1;
  const cdouble m00 = g.m[0], m01 = g.m[1], m10 = g.m[2], m11 = g.m[3];
  cdouble* a = s.amp.data();
#pragma omp parallel for schedule(static) if (pairs >= kParallelThreshold)
  for (std::int64_t h = 0; h < static_cast<std::int64_t>(pairs); ++h) {
    const index_t i0 = ((static_cast<index_t>(h) & ~low) << 1) |
                       (static_cast<index_t>(h) & low);
    const index_t i1 = i0 | mask;
    const cdouble a0 = a[i0], a1 = a[i1];
    a[i0] = m00 * a0 + m01 * a1;
    a[i1] = m10 * a0 + m11 * a1;
  }
}

inline void apply_2q(StateVector& s, const Gate& g) {
  const int t0 = g.targets[0], t1 = g.targets[1];
  const index_t m0 = index_t{1} << t0;  // low bit of the local basis
  const index_t m1 = index_t{1} << t1;
  const int qmin = t0 < t1 ? t0 : t1, qmax = t0 < t1 ? t1 : t0;
  const index_t min_mask = index_t{1} << qmin;
  const index_t max_mask = index_t{1} << (qmax - 1);
  const index_t lo = min_mask - 1;
  const index_t mid = (max_mask - 1) ^ lo;
  const index_t hi = ~(max_mask - 1);
  const index_t blocks = s.dim() >> 2;
  cdouble* a = s.amp.data();
  const std::array<cdouble, 16>& m = g.m;
#pragma omp parallel for schedule(static) if (blocks >= kParallelThreshold)
  for (std::int64_t hh = 0; hh < static_cast<std::int64_t>(blocks); ++hh) {
    const index_t h = static_cast<index_t>(hh);
    const index_t base = ((h & hi) << 2) | ((h & mid) << 1) | (h & lo);
    const index_t idx[4] = {base, base | m0, base | m1, base | m0 | m1};
    const cdouble v0 = a[idx[0]], v1 = a[idx[1]], v2 = a[idx[2]],
                  v3 = a[idx[3]];
    a[idx[0]] = m[0] * v0 + m[1] * v1 + m[2] * v2 + m[3] * v3;
    a[idx[1]] = m[4] * v0 + m[5] * v1 + m[6] * v2 + m[7] * v3;
    a[idx[2]] = m[8] * v0 + m[9] * v1 + m[10] * v2 + m[11] * v3;
    a[idx[3]] = m[12] * v0 + m[13] * v1 + m[14] * v2 + m[15] * v3;
  }
}

}  // namespace detail

inline void apply_gate(StateVector& s, const Gate& g) {
  if (g.targets[0] < 0 || g.targets[0] >= s.n_qubits ||
      (g.arity == 2 &&
       (g.targets[1] < 0 || g.targets[1] >= s.n_qubits ||
        g.targets[1] == g.targets[0])))
    throw std::out_of_range("apply_gate: target out of range");
  if (g.arity == 1)
    detail::apply_1q(s, g);
  else
    detail::apply_2q(s, g);
}

// Pauli fast paths; label 1 = X, 2 = Y, 3 = Z (0 = identity, a no-op).
inline void apply_pauli(StateVector& s, int label, int q) {
  if (label == 0) return;
  if (q < 0 || q >= s.n_qubits)
    throw std::out_of_range("apply_pauli: target out of range");
  const index_t mask = index_t{1} << q;
  const index_t low = mask - 1;
  const index_t pairs = s.dim() >> 1;
  cdouble* a = s.amp.data();
  switch (label) {
    case 1:
#pragma omp parallel for schedule(static) if (pairs >= kParallelThreshold)
      for (std::int64_t h = 0; h < static_cast<std::int64_t>(pairs); ++h) {
        const index_t i0 = ((static_cast<index_t>(h) & ~low) << 1) |
                           (static_cast<index_t>(h) & low);
        std::swap(a[i0], a[i0 | mask]);
      }
      break;
    case 2:
#pragma omp parallel for schedule(static) if (pairs >= kParallelThreshold)
      for (std::int64_t h = 0; h < static_cast<std::int64_t>(pairs); ++h) {
        const index_t i0 = ((static_cast<index_t>(h) & ~low) << 1) |
                           (static_cast<index_t>(h) & low);
        const index_t i1 = i0 | mask;
        const cdouble a0 = a[i0];
        a[i0] = cdouble{0, -1} * a[i1];  // Y = [[0,-i],[i,0]]
        a[i1] = cdouble{0, 1} * a0;
      }
      break;
    case 3:
#pragma omp parallel for schedule(static) if (pairs >= kParallelThreshold)
      for (std::int64_t h = 0; h < static_cast<std::int64_t>(pairs); ++h) {
        const index_t i1 = (((static_cast<index_t>(h) & ~low) << 1) |
                            (static_cast<index_t>(h) & low)) |
                           mask;
        a[i1] = -a[i1];
      }
      break;
    default:
      throw std::invalid_argument("apply_pauli: label must be 0..3");
  }
}

// Serial fixed-order reductions: results must not depend on thread count.

inline double norm_sq(const StateVector& s) {
  double acc = 0.0;
  for (const cdouble& v : s.amp)
    acc += v.real() * v.real() + v.imag() * v.imag();
  return acc;
}

inline cdouble inner_product(const StateVector& bra, const StateVector& ket) {
  if (bra.n_qubits != ket.n_qubits)
    throw std::invalid_argument("inner_product: qubit count mismatch");
  cdouble acc{0, 0};
  for (index_t i = 0; i < bra.dim(); ++i)
    acc += std::conj(bra.amp[i]) * ket.amp[i];
  return acc;
}

// <bra| X_site |ket> without materializing X|ket>: X_site permutes basis
// states by flipping bit `site`, so pair amplitudes directly.
inline cdouble pauli_x_cross_term(const StateVector& bra,
                                  const StateVector& ket, int site) {
  if (bra.n_qubits != ket.n_qubits)
    throw std::invalid_argument("pauli_x_cross_term: qubit count mismatch");
  if (site < 0 || site >= bra.n_qubits)
    throw std::out_of_range("pauli_x_cross_term: site out of range");
  const index_t mask = index_t{1} << site;
  cdouble acc{0, 0};
  for (index_t i = 0; i < bra.dim(); ++i)
    acc += std::conj(bra.amp[i]) * ket.amp[i ^ mask];
  return acc;
}

}  // namespace z2sim
