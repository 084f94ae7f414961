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
#include <vector>

#include "z2sim/circuit.hpp"

namespace z2sim {

namespace detail {

// An open run of gates whose combined support fits on at most two qubits.
// q1 == -1 while the cluster is still single-qubit; q0 < q1 otherwise, and
// matrices always use the canonical (low bit = q0) target order.
struct FusionCluster {
  int q0 = -1, q1 = -1;
  std::array<cdouble, 16> m{};

  bool single() const { return q1 < 0; }

  std::array<cdouble, 4> m2() const { return {m[0], m[1], m[2], m[3]}; }

  void widen(int other_qubit) {
    const int a = q0;
    const int p = std::min(a, other_qubit), q = std::max(a, other_qubit);
    m = mat2_embed(m2(), a == p ? 0 : 1);
    q0 = p;
    q1 = q;
  }

  // Gate matrix in this cluster's canonical target order.
  std::array<cdouble, 16> canon(const Gate& g) const {
    if (g.arity == 1) return mat2_embed({g.m[0], g.m[1], g.m[2], g.m[3]},
                                        g.targets[0] == q0 ? 0 : 1);
    std::array<cdouble, 16> gm;
    for (int i = 0; i < 16; ++i) gm[i] = g.m[i];
    return g.targets[0] == q0 ? gm : mat4_swap_targets(gm);
  }
};

inline Gate emit_cluster(const FusionCluster& c) {
  if (c.single()) return gate_fused1(c.q0, c.m2());
  return gate_fused2(c.q0, c.q1, c.m);
}

// Greedy left-to-right fusion of one gate run. Clusters own disjoint qubit
// sets, so emitting a closed cluster ahead of still-open ones is sound.
inline void fuse_run(const std::vector<Gate>& gates, Circuit& out) {
  std::vector<FusionCluster> open;
  std::vector<int> owner;  // qubit -> index into `open`, or -1
  owner.assign(out.n_qubits, -1);

  auto close = [&](int ci) {
    out.moments.push_back({emit_cluster(open[ci])});
    for (int q : {open[ci].q0, open[ci].q1})
      if (q >= 0) owner[q] = -1;
    // Swap-erase; fix the moved cluster's ownership entries.
    open[ci] = open.back();
    open.pop_back();
    if (ci < static_cast<int>(open.size()))
      for (int q : {open[ci].q0, open[ci].q1})
        if (q >= 0) owner[q] = ci;
  };

  for (const Gate& g : gates) {
    int ca = owner[g.targets[0]];
    int cb = g.arity == 2 ? owner[g.targets[1]] : -1;

    if (g.arity == 1) {
      if (ca < 0) {
        FusionCluster c;
        c.q0 = g.targets[0];
        c.m[0] = g.m[0]; c.m[1] = g.m[1]; c.m[2] = g.m[2]; c.m[3] = g.m[3];
        owner[c.q0] = static_cast<int>(open.size());
        open.push_back(c);
      } else if (open[ca].single()) {
        std::array<cdouble, 4> prod =
            mat2_mul({g.m[0], g.m[1], g.m[2], g.m[3]}, open[ca].m2());
        open[ca].m = {};
        for (int i = 0; i < 4; ++i) open[ca].m[i] = prod[i];
      } else {
        open[ca].m = mat4_mul(open[ca].canon(g), open[ca].m);
      }
      continue;
    }

    // Two-qubit gate. Combined support of g plus any touched clusters must
    // stay within {targets}, otherwise the blockers are flushed first.
    const int a = g.targets[0], b = g.targets[1];
    auto fits = [&](int ci) {
      if (ci < 0) return true;
      const FusionCluster& c = open[ci];
      for (int q : {c.q0, c.q1})
        if (q >= 0 && q != a && q != b) return false;
      return true;
    };
    if (!fits(ca)) {
      close(ca);
      ca = owner[a];
      cb = owner[b];
    }
    if (!fits(cb)) {
      close(cb);
      ca = owner[a];
      cb = owner[b];
    }

    if (ca < 0 && cb < 0) {
      FusionCluster c;
      c.q0 = std::min(a, b);
      c.q1 = std::max(a, b);
      c.m = c.canon(g);
      owner[a] = owner[b] = static_cast<int>(open.size());
      open.push_back(c);
      continue;
    }
    if (ca >= 0 && cb >= 0 && ca != cb) {
      // Two disjoint single-qubit clusters; merge into one pair cluster.
      FusionCluster& pa = open[ca];
      FusionCluster& pb = open[cb];
      const int p = std::min(a, b), q = std::max(a, b);
      std::array<cdouble, 16> pre =
          mat4_mul(mat2_embed(pa.m2(), pa.q0 == p ? 0 : 1),
                   mat2_embed(pb.m2(), pb.q0 == p ? 0 : 1));
      const int keep = std::min(ca, cb), drop = std::max(ca, cb);
      open[keep].q0 = p;
      open[keep].q1 = q;
      open[keep].m = pre;
      open[keep].m = mat4_mul(open[keep].canon(g), open[keep].m);
      // Remove `drop` without emitting it (its action is absorbed).
      owner[a] = owner[b] = keep;
      open[drop] = open.back();
      open.pop_back();
      if (drop < static_cast<int>(open.size()))
        for (int qq : {open[drop].q0, open[drop].q1})
          if (qq >= 0) owner[qq] = drop;
      continue;
    }
    const int ci = ca >= 0 ? ca : cb;
    FusionCluster& c = open[ci];
    if (c.single()) c.widen(c.q0 == a ? b : a);
    c.m = mat4_mul(c.canon(g), c.m);
    owner[a] = owner[b] = ci;
  }

  // Remaining clusters are pairwise disjoint; emission order is free.
  while (!open.empty()) close(0);
}

}  // namespace detail

// Fuse adjacent gates with overlapping supports into dense one- and
// two-qubit products. Step boundaries are respected: fusion never crosses
// them, so recording points keep their meaning. The result has equal unitary
// action on every input state.
inline Circuit fuse(const Circuit& c) {
  validate(c);
  Circuit out;
  out.n_qubits = c.n_qubits;
  std::vector<std::size_t> cuts = c.step_boundaries;
  if (cuts.empty() || cuts.back() != c.moments.size())
    cuts.push_back(c.moments.size());
  std::size_t start = 0;
  for (std::size_t si = 0; si < cuts.size(); ++si) {
    std::vector<Gate> run;
    for (std::size_t mi = start; mi < cuts[si]; ++mi)
      for (const Gate& g : c.moments[mi]) run.push_back(g);
    detail::fuse_run(run, out);
    if (si < c.step_boundaries.size())
      out.step_boundaries.push_back(out.moments.size());
    start = cuts[si];
  }
  return out;
}

}  // namespace z2sim
