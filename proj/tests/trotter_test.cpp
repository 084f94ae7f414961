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

#include "z2sim/trotter.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace z2sim {
namespace {

using testref::Mat;

TEST(TrotterTest, StepLayerStructure) {
  const LatticeSpec lat = build_lattice(3);
  const CouplingParams p = make_params(1.6, 0.25, 1, lat);
  const Circuit step = build_trotter_step(lat, p);
  // transverse-field layer, boundary-mass layer, four bond matchings
  EXPECT_EQ(step.moments.size(), 6u);
  const GateCounts counts = count_gates(step);
  EXPECT_EQ(counts.by_name.at("rx"), 9u);
  EXPECT_EQ(counts.by_name.at("rz"), 8u);  // every site but the center
  EXPECT_EQ(counts.by_name.at("zz"), 12u);
  EXPECT_EQ(step.step_boundaries, std::vector<std::size_t>{6});
}

TEST(TrotterTest, NoiselessGateCountsAcrossSizes) {
  // two-qubit: 2n(n-1); one-qubit: n^2 + (boundary sites) = n^2 + 4n - 4.
  const std::vector<std::size_t> expect_2q = {12, 24, 40, 60};
  const std::vector<std::size_t> expect_1q = {17, 28, 41, 56};
  for (int n = 3; n <= 6; ++n) {
    const LatticeSpec lat = build_lattice(n);
    const CouplingParams p = make_params(1.6, 0.25, 1, lat);
    const GateCounts counts = count_gates(build_trotter_step(lat, p));
    EXPECT_EQ(counts.two_qubit, expect_2q[n - 3]) << "n=" << n;
    EXPECT_EQ(counts.one_qubit, expect_1q[n - 3]) << "n=" << n;
  }
}

TEST(TrotterTest, SingleSiteLatticeHasNoBondLayers) {
  const LatticeSpec lat = build_lattice(1);
  const CouplingParams p = make_params(1.6, 0.25, 1, lat);
  const Circuit step = build_trotter_step(lat, p);
  const GateCounts counts = count_gates(step);
  EXPECT_EQ(counts.two_qubit, 0u);
  EXPECT_EQ(counts.by_name.at("rx"), 1u);
  EXPECT_EQ(counts.by_name.at("rz"), 1u);
}

TEST(TrotterTest, AngleConventions) {
  const LatticeSpec lat = build_lattice(2);
  const CouplingParams p = make_params(1.6, 0.25, 1, lat);
  const Circuit step = build_trotter_step(lat, p);
  for (const Gate& g : step.moments[0])
    EXPECT_NEAR(g.param, -2.0 * p.gamma * p.dt, 1e-15);
  for (const Gate& g : step.moments[1])
    EXPECT_NEAR(g.param, -2.0 * p.j * 2 * p.dt, 1e-15);  // all masses are 2
  for (std::size_t m = 2; m < step.moments.size(); ++m)
    for (const Gate& g : step.moments[m])
      EXPECT_NEAR(g.param, -p.j * p.dt, 1e-15);
}

TEST(TrotterTest, StepApproximatesHamiltonianEvolution) {
  const LatticeSpec lat = build_lattice(2);
  const CouplingParams p1 = make_params(1.6, 0.1, 1, lat);
  const Mat h = testref::dense_hamiltonian_ref(lat, p1);

  auto step_error = [&](double dt) {
    const CouplingParams p = make_params(1.6, dt, 1, lat);
    const Mat u = testref::circuit_unitary_ref(build_trotter_step(lat, p));
    return testref::op_norm(u - testref::expm_minus_i(h, dt));
  };

  const double e1 = step_error(0.1);
  const double e2 = step_error(0.05);
  // First-order product formula: per-step error O(dt^2).
  EXPECT_GT(e1 / e2, 3.0);
  EXPECT_LT(e1 / e2, 5.0);
  EXPECT_LT(e2, 0.05);
}

TEST(TrotterTest, StepEvolvesForwardNotBackward) {
  // The circuit must approximate exp(-iH dt), not exp(+iH dt); the two
  // differ at O(dt) so the forward residual is far smaller.
  const LatticeSpec lat = build_lattice(2);
  const CouplingParams p = make_params(1.6, 0.05, 1, lat);
  const Mat h = testref::dense_hamiltonian_ref(lat, p);
  const Mat u = testref::circuit_unitary_ref(build_trotter_step(lat, p));
  const double forward = testref::op_norm(u - testref::expm_minus_i(h, p.dt));
  const double backward =
      testref::op_norm(u - testref::expm_minus_i(h, -p.dt));
  EXPECT_LT(forward, 0.1 * backward);
}

TEST(TrotterTest, EvolutionCircuitRepetitionAndBoundaries) {
  const LatticeSpec lat = build_lattice(3);
  const CouplingParams p = make_params(1.6, 0.25, 5, lat);
  const Circuit c = build_evolution_circuit(lat, p, false);
  ASSERT_EQ(c.step_boundaries.size(), 5u);
  const std::size_t per_step = c.moments.size() / 5;
  for (int k = 0; k < 5; ++k)
    EXPECT_EQ(c.step_boundaries[k], (k + 1) * per_step);
  validate(c);
}

TEST(TrotterTest, SourcePreparationGate) {
  const LatticeSpec lat = build_lattice(3);
  const CouplingParams p = make_params(1.6, 0.25, 2, lat);
  const Circuit c = build_evolution_circuit(lat, p, true);
  ASSERT_FALSE(c.moments.empty());
  ASSERT_EQ(c.moments[0].size(), 1u);
  EXPECT_EQ(c.moments[0][0].kind, GateKind::kX);
  EXPECT_EQ(c.moments[0][0].targets[0], p.source_site);
  // Boundaries exclude the preparation moment but stay aligned to steps.
  const Circuit bare = build_evolution_circuit(lat, p, false);
  ASSERT_EQ(c.step_boundaries.size(), bare.step_boundaries.size());
  for (std::size_t i = 0; i < c.step_boundaries.size(); ++i)
    EXPECT_EQ(c.step_boundaries[i], bare.step_boundaries[i] + 1);

  const CouplingParams p0 = make_params(1.6, 0.25, 0, lat);
  const Circuit only_x = build_evolution_circuit(lat, p0, true);
  EXPECT_EQ(count_gates(only_x).total(), 1u);
}

Circuit as_circuit(int n_qubits, const std::vector<Gate>& gates) {
  Circuit c;
  c.n_qubits = n_qubits;
  for (const Gate& g : gates) c.moments.push_back({g});
  return c;
}

TEST(TrotterTest, ZzDecompositionMatchesNativeGate) {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int trial = 0; trial < 25; ++trial) {
    const double alpha = ang(rng);
    const Circuit dec = as_circuit(2, decompose_zz_to_sqiswap(alpha));
    const Mat got = testref::circuit_unitary_ref(dec);
    const Mat expect = testref::gate_matrix(gate_zz(0, 1, alpha));
    EXPECT_LT(testref::phase_distance(got, expect), 1e-12) << "alpha " << alpha;
  }
}

TEST(TrotterTest, ZzDecompositionGateBudget) {
  const GateCounts counts =
      count_gates(as_circuit(2, decompose_zz_to_sqiswap(0.37)));
  EXPECT_EQ(counts.two_qubit, 4u);
  EXPECT_EQ(counts.by_name.at("sqiswap"), 4u);
  EXPECT_EQ(counts.one_qubit, 33u);
}

TEST(TrotterTest, ZzDecompositionArbitraryTargets) {
  const Circuit wide = as_circuit(3, decompose_zz_to_sqiswap(2, 0, 1.1));
  const Mat got = testref::circuit_unitary_ref(wide);
  Circuit native;
  native.n_qubits = 3;
  native.moments.push_back({gate_zz(2, 0, 1.1)});
  const Mat expect = testref::circuit_unitary_ref(native);
  EXPECT_LT(testref::phase_distance(got, expect), 1e-12);
}

}  // namespace
}  // namespace z2sim
