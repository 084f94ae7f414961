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

// Independent dense references for the test suite. Everything here is built
// from Kronecker products and Eigen matrix exponentials, deliberately
// avoiding the library's own stride kernels and bit-twiddled Hamiltonian
// assembly so the two implementations check each other.

#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "z2sim/circuit.hpp"
#include "z2sim/lattice.hpp"
#include "z2sim/state.hpp"

namespace z2sim::testref {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using z2sim::cdouble;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat pauli(int label) {
  Mat m(2, 2);
  switch (label) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cdouble(0, -1), cdouble(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Mat identity(int dim) { return Mat::Identity(dim, dim); }

// Little-endian embedding: amplitude index bit q is qubit q, so qubit 0
// varies fastest and sits rightmost in the Kronecker chain.
inline Mat embed1(const Mat& u, int q, int n_qubits) {
  const Eigen::Index lo = Eigen::Index{1} << q;
  const Eigen::Index hi = Eigen::Index{1} << (n_qubits - 1 - q);
  return kron(identity(hi), kron(u, identity(lo)));
}

// Arbitrary-target two-qubit embedding by explicit index algebra; the local
// basis index is bit(t0) + 2*bit(t1).
inline Mat embed2(const Mat& u4, int t0, int t1, int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  const Eigen::Index m0 = Eigen::Index{1} << t0;
  const Eigen::Index m1 = Eigen::Index{1} << t1;
  const Eigen::Index rest = ~(m0 | m1);
  Mat out = Mat::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      if ((i & rest) != (j & rest)) continue;
      const Eigen::Index li = ((i & m0) ? 1 : 0) + ((i & m1) ? 2 : 0);
      const Eigen::Index lj = ((j & m0) ? 1 : 0) + ((j & m1) ? 2 : 0);
      out(i, j) = u4(li, lj);
    }
  return out;
}

inline Mat gate_matrix(const Gate& g) {
  const int dim = g.arity == 1 ? 2 : 4;
  Mat m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = g.m[r * dim + c];
  return m;
}

inline Mat embed_gate(const Gate& g, int n_qubits) {
  if (g.arity == 1) return embed1(gate_matrix(g), g.targets[0], n_qubits);
  return embed2(gate_matrix(g), g.targets[0], g.targets[1], n_qubits);
}

// Reference circuit unitary: plain matrix product of embedded gates.
inline Mat circuit_unitary_ref(const Circuit& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.n_qubits;
  Mat u = identity(dim);
  for (const Moment& mom : c.moments)
    for (const Gate& g : mom) u = embed_gate(g, c.n_qubits) * u;
  return u;
}

inline Vec to_eigen(const StateVector& s) {
  Vec v(static_cast<Eigen::Index>(s.dim()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = s.amp[i];
  return v;
}

// Frobenius distance after aligning the global phase on b's largest entry.
// An upper bound on the 2-norm distance, so thresholds stay conservative.
inline double phase_distance(const Mat& a, const Mat& b) {
  Eigen::Index r = 0, c = 0;
  double best = -1;
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      if (std::abs(b(i, j)) > best) {
        best = std::abs(b(i, j));
        r = i;
        c = j;
      }
  if (best <= 0) return (a - b).norm();
  const cdouble phase = a(r, c) / b(r, c);
  const double mag = std::abs(phase);
  if (mag == 0) return (a - b).norm();
  return (a - (phase / mag) * b).norm();
}

inline double op_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

inline Mat expm_minus_i(const Mat& h, double t) {
  Mat a = cdouble(0, -1) * t * h;
  return a.exp();
}

// Independent circuit-frame Hamiltonian: sum of Kronecker-embedded terms,
// H = -J sum_bonds Z Z - Gamma sum_sites X - J sum_sites m(site) Z.
inline Mat dense_hamiltonian_ref(const LatticeSpec& lat,
                                 const CouplingParams& p) {
  const Eigen::Index dim = Eigen::Index{1} << lat.n_sites;
  Mat h = Mat::Zero(dim, dim);
  for (const Bond& b : lat.bonds) {
    Mat zz = kron(pauli(3), pauli(3));
    h -= p.j * embed2(zz, b.a, b.b, lat.n_sites);
  }
  for (int s = 0; s < lat.n_sites; ++s) {
    h -= p.gamma * embed1(pauli(1), s, lat.n_sites);
    if (lat.boundary_mass[s] != 0)
      h -= p.j * lat.boundary_mass[s] * embed1(pauli(3), s, lat.n_sites);
  }
  return h;
}

// Deterministic random circuits over the builder's ideal gate set.
inline Circuit random_circuit(int n_qubits, int n_moments, std::uint64_t seed,
                              bool with_boundaries = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  Circuit c;
  c.n_qubits = n_qubits;
  for (int m = 0; m < n_moments; ++m) {
    Moment mom;
    const int kind = static_cast<int>(rng() % 5);
    const int q = static_cast<int>(rng() % n_qubits);
    switch (kind) {
      case 0: mom.push_back(gate_rx(q, angle(rng))); break;
      case 1: mom.push_back(gate_ry(q, angle(rng))); break;
      case 2: mom.push_back(gate_rz(q, angle(rng))); break;
      case 3: mom.push_back(gate_x(q)); break;
      default: {
        if (n_qubits < 2) {
          mom.push_back(gate_rx(q, angle(rng)));
          break;
        }
        int q2 = static_cast<int>(rng() % n_qubits);
        while (q2 == q) q2 = static_cast<int>(rng() % n_qubits);
        mom.push_back(gate_zz(q, q2, angle(rng)));
        break;
      }
    }
    c.moments.push_back(std::move(mom));
    if (with_boundaries && m % 4 == 3)
      c.step_boundaries.push_back(c.moments.size());
  }
  return c;
}

}  // namespace z2sim::testref
