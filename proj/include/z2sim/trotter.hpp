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

#include "z2sim/circuit.hpp"
#include "z2sim/lattice.hpp"

namespace z2sim {

// One first-order Trotter step of H = -J sum_bonds ZZ - Gamma sum_sites X
// - J sum_boundary m Z, as six layers: a global RX layer, a boundary RZ
// layer, then the four bond matchings. exp(-i h dt) for a term with negative
// coefficient flips the rotation sign, hence the negative angles below.
inline Circuit build_trotter_step(const LatticeSpec& lat,
                                  const CouplingParams& p) {
  Circuit c;
  c.n_qubits = lat.n_sites;

  Moment rx_layer;
  for (int s = 0; s < lat.n_sites; ++s)
    rx_layer.push_back(gate_rx(s, -2.0 * p.gamma * p.dt));
  c.moments.push_back(std::move(rx_layer));

  Moment rz_layer;
  for (int s = 0; s < lat.n_sites; ++s)
    if (lat.boundary_mass[s] > 0)
      rz_layer.push_back(gate_rz(s, -2.0 * p.j * lat.boundary_mass[s] * p.dt));
  if (!rz_layer.empty()) c.moments.push_back(std::move(rz_layer));

  for (BondClass cls : {BondClass::kHEven, BondClass::kHOdd,
                        BondClass::kVEven, BondClass::kVOdd}) {
    Moment layer;
    for (const Bond& b : bonds_of_class(lat, cls))
      layer.push_back(gate_zz(b.a, b.b, -p.j * p.dt));
    if (!layer.empty()) c.moments.push_back(std::move(layer));
  }

  c.step_boundaries = {c.moments.size()};
  return c;
}

// n_steps repetitions of the step circuit, with optional X preparation of the
// source site ahead of the first step. Step boundaries exclude the prep
// moment, so recording points line up with t = k*dt.
inline Circuit build_evolution_circuit(const LatticeSpec& lat,
                                       const CouplingParams& p,
                                       bool with_source) {
  Circuit step = build_trotter_step(lat, p);
  Circuit c;
  c.n_qubits = lat.n_sites;
  if (with_source) c.moments.push_back({gate_x(p.source_site)});
  for (int k = 0; k < p.n_steps; ++k) {
    for (const Moment& m : step.moments) c.moments.push_back(m);
    c.step_boundaries.push_back(c.moments.size());
  }
  return c;
}

// ---- hardware-native decomposition ----
//
// Native set: {sqrt(iSWAP), RX, RY, RZ, X}. Building blocks, as operator
// identities (application order is right to left):
//   H = e^{i pi/2} RY(pi/2) RZ(pi)
//   S = e^{i pi/4} RZ(pi/2)
//   exp(i pi/4 XX) = X_c . sqiswap . X_c . sqiswap
//   CZ = e^{-i pi/4} (S x S)(H x H) exp(i pi/4 XX) (H x H)
//   CNOT = (I x H) CZ (I x H)
//   ZZ(a) = CNOT . RZ(2a) on target . CNOT        (exact, no phase)
// Each CNOT costs 2 sqrt(iSWAP) + 16 locals; each ZZ costs 4 + 33.

namespace detail {

inline void emit_h(std::vector<Gate>& out, int q) {
  out.push_back(gate_rz(q, kPi));
  out.push_back(gate_ry(q, kPi / 2));
}

inline void emit_cnot(std::vector<Gate>& out, int c, int t) {
  emit_h(out, t);
  emit_h(out, c);
  emit_h(out, t);
  out.push_back(gate_sqrt_iswap(c, t));
  out.push_back(gate_x(c));
  out.push_back(gate_sqrt_iswap(c, t));
  out.push_back(gate_x(c));
  emit_h(out, c);
  emit_h(out, t);
  out.push_back(gate_rz(c, kPi / 2));  // S on both
  out.push_back(gate_rz(t, kPi / 2));
  emit_h(out, t);
}

}  // namespace detail

// Gate list whose ordered product equals exp(-i alpha Z(a) Z(b)) up to a
// deterministic global phase: 4 sqrt(iSWAP) plus 33 local gates.
inline std::vector<Gate> decompose_zz_to_sqiswap(int a, int b, double alpha) {
  std::vector<Gate> out;
  detail::emit_cnot(out, a, b);
  out.push_back(gate_rz(b, 2.0 * alpha));
  detail::emit_cnot(out, a, b);
  return out;
}

inline std::vector<Gate> decompose_zz_to_sqiswap(double alpha) {
  return decompose_zz_to_sqiswap(0, 1, alpha);
}

}  // namespace z2sim
