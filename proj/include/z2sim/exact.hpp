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

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <vector>

#include "z2sim/noise.hpp"
#include "z2sim/trajectory_types.hpp"

namespace z2sim {

// Raised when a dense reference computation would exceed its size cap.
struct SizeLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kDenseHamiltonianLimit = 14;
inline constexpr int kDenseUnitaryLimit = 10;
inline constexpr int kDensityMatrixLimit = 7;

// Pauli frame of the dense Hamiltonian. The two frames are Hadamard
// conjugates of each other and share a spectrum:
//   kCircuit: -J sum ZZ - Gamma sum X - J sum m Z   (what the circuit runs)
//   kDual:    -J sum XX - Gamma sum Z - J sum m X
enum class Frame { kCircuit, kDual };

struct DenseHamiltonian {
  int n_qubits = 0;
  Eigen::MatrixXcd h;
  Eigen::VectorXd evals;   // ascending
  Eigen::MatrixXcd evecs;  // columns, aligned with evals
};

namespace detail {

// H += coeff * prod_i P(label_i, qubit_i), labels restricted to X and Z.
inline void add_pauli_term(Eigen::MatrixXcd& h, double coeff,
                           const std::vector<std::pair<int, char>>& factors) {
  const Eigen::Index dim = h.rows();
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index row = col;
    double phase = 1.0;
    for (const auto& [q, label] : factors) {
      if (label == 'X')
        row ^= Eigen::Index{1} << q;
      else
        phase *= (col >> q) & 1 ? -1.0 : 1.0;
    }
    h(row, col) += coeff * phase;
  }
}

}  // namespace detail

inline DenseHamiltonian build_hamiltonian(const LatticeSpec& lat,
                                          const CouplingParams& p,
                                          Frame frame = Frame::kCircuit) {
  if (lat.n_sites > kDenseHamiltonianLimit)
    throw SizeLimitError("build_hamiltonian: dense limit is 14 qubits");
  const char bond_label = frame == Frame::kCircuit ? 'Z' : 'X';
  const char field_label = frame == Frame::kCircuit ? 'X' : 'Z';
  DenseHamiltonian dh;
  dh.n_qubits = lat.n_sites;
  const Eigen::Index dim = Eigen::Index{1} << lat.n_sites;
  dh.h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const Bond& b : lat.bonds)
    detail::add_pauli_term(dh.h, -p.j,
                           {{b.a, bond_label}, {b.b, bond_label}});
  for (int s = 0; s < lat.n_sites; ++s) {
    detail::add_pauli_term(dh.h, -p.gamma, {{s, field_label}});
    if (lat.boundary_mass[s] > 0)
      detail::add_pauli_term(dh.h, -p.j * lat.boundary_mass[s],
                             {{s, bond_label}});
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dh.h);
  dh.evals = solver.eigenvalues();
  dh.evecs = solver.eigenvectors();
  return dh;
}

// exp(-i H t) from the stored eigendecomposition.
inline Eigen::MatrixXcd evolution_operator(const DenseHamiltonian& dh,
                                           double t) {
  Eigen::VectorXcd phases(dh.evals.size());
  for (Eigen::Index k = 0; k < dh.evals.size(); ++k)
    phases(k) = std::polar(1.0, -dh.evals(k) * t);
  return dh.evecs * phases.asDiagonal() * dh.evecs.adjoint();
}

// Exact correlator C_{i,s}(t) = <Omega| e^{iHt} X_i e^{-iHt} X_s |Omega>
// with |Omega> = |0...0>, expanded over the eigenbasis. amplitudes[si](k, m)
// holds A_{i,s}(E_k, E_m) so the frequency content (E_k - E_m) is exposed.
struct ExactCorrelator {
  CorrelatorSeries series;
  std::vector<Eigen::MatrixXcd> amplitudes;  // aligned with series.sites
  Eigen::VectorXd evals;
};

inline ExactCorrelator exact_correlator(const LatticeSpec& lat,
                                        const CouplingParams& p,
                                        const std::vector<double>& times,
                                        const std::vector<int>& sites,
                                        Frame frame = Frame::kCircuit) {
  DenseHamiltonian dh = build_hamiltonian(lat, p, frame);
  const Eigen::Index dim = dh.h.rows();
  ExactCorrelator out;
  out.evals = dh.evals;
  out.series.source_site = p.source_site;
  out.series.sites = sites;
  out.series.times = times;
  out.series.n_traj_effective = 0;
  out.series.stderr_defined = false;

  // ghat_k = <E_k|Omega>;  what_m = <E_m|X_s|Omega>.
  const Eigen::Index src_mask = Eigen::Index{1} << p.source_site;
  Eigen::VectorXcd ghat = dh.evecs.row(0).adjoint();
  Eigen::VectorXcd what = dh.evecs.row(src_mask).adjoint();

  out.series.values.resize(sites.size());
  for (std::size_t si = 0; si < sites.size(); ++si) {
    const Eigen::Index mask = Eigen::Index{1} << sites[si];
    // xi(k, m) = <E_k|X_i|E_m>: X_i permutes rows of evecs.
    Eigen::MatrixXcd permuted(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      permuted.row(r) = dh.evecs.row(r ^ mask);
    Eigen::MatrixXcd xi = dh.evecs.adjoint() * permuted;
    Eigen::MatrixXcd amp(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
      for (Eigen::Index m = 0; m < dim; ++m)
        amp(k, m) = std::conj(ghat(k)) * xi(k, m) * what(m);
    out.amplitudes.push_back(amp);

    out.series.values[si].resize(times.size());
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      const double t = times[ti];
      cdouble c{0, 0};
      for (Eigen::Index k = 0; k < dim; ++k)
        for (Eigen::Index m = 0; m < dim; ++m)
          c += amp(k, m) * std::polar(1.0, (dh.evals(k) - dh.evals(m)) * t);
      out.series.values[si][ti] = c;
    }
  }
  return out;
}

// Dominant non-DC frequency of an exact correlator: amplitudes grouped by
// quantized E_k - E_m, largest |complex sum| wins.
inline double dominant_exact_frequency(const ExactCorrelator& ec,
                                       std::size_t site_index = 0,
                                       double dc_tol = 1e-9) {
  const Eigen::MatrixXcd& amp = ec.amplitudes.at(site_index);
  std::map<long long, cdouble> groups;
  const Eigen::Index dim = amp.rows();
  for (Eigen::Index k = 0; k < dim; ++k)
    for (Eigen::Index m = 0; m < dim; ++m) {
      const double w = ec.evals(k) - ec.evals(m);
      groups[std::llround(w * 1e9)] += amp(k, m);
    }
  double best_w = 0, best_mag = -1;
  for (const auto& [key, sum] : groups) {
    const double w = static_cast<double>(key) * 1e-9;
    if (std::abs(w) <= dc_tol) continue;
    if (std::abs(sum) > best_mag) {
      best_mag = std::abs(sum);
      best_w = std::abs(w);
    }
  }
  if (best_mag < 0)
    throw std::runtime_error("dominant_exact_frequency: no non-DC component");
  return best_w;
}

// Ordered product of the circuit's embedded gate matrices.
inline Eigen::MatrixXcd dense_circuit_unitary(const Circuit& c) {
  if (c.n_qubits > kDenseUnitaryLimit)
    throw SizeLimitError("dense_circuit_unitary: dense limit is 10 qubits");
  validate(c);
  const index_t dim = index_t{1} << c.n_qubits;
  Eigen::MatrixXcd u(dim, dim);
  for (index_t col = 0; col < dim; ++col) {
    StateVector sv = make_basis_state(c.n_qubits, col);
    apply_circuit(sv, c);
    for (index_t r = 0; r < dim; ++r) u(r, col) = sv.amp[r];
  }
  return u;
}

// ---- step-unitary eigenphase analysis ----

// Frequencies present in the Trotterized correlator <0|(U^k)^dag X_i U^k X_s|0>
// as a function of t = k*dt: eigenphase differences of U folded to
// (-pi/dt, pi/dt], weighted by the same sandwich amplitudes as the continuous
// case. Returns the dominant non-DC |frequency|.
inline double dominant_step_frequency(const Eigen::MatrixXcd& u_step,
                                      double dt, int site, int source,
                                      double dc_tol = 1e-9) {
  const Eigen::Index dim = u_step.rows();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u_step);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dominant_step_frequency: eigensolver failed");
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  const Eigen::VectorXcd& lam = solver.eigenvalues();

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v);
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(dim);
  e0(0) = 1.0;
  Eigen::VectorXcd es = Eigen::VectorXcd::Zero(dim);
  es(Eigen::Index{1} << source) = 1.0;
  Eigen::VectorXcd p = lu.solve(e0);
  Eigen::VectorXcd q = lu.solve(es);

  const Eigen::Index mask = Eigen::Index{1} << site;
  Eigen::MatrixXcd permuted(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) permuted.row(r) = v.row(r ^ mask);
  Eigen::MatrixXcd g = v.adjoint() * permuted;

  // Component (a,b) evolves as e^{i (theta_b - theta_a) k}; in time units the
  // signed frequency is (theta_b - theta_a)/dt, already in (-pi/dt, pi/dt]
  // up to the branch of arg().
  std::map<long long, cdouble> groups;
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index b = 0; b < dim; ++b) {
      double w = std::arg(lam(b) * std::conj(lam(a))) / dt;
      groups[std::llround(w * 1e9)] += std::conj(p(a)) * g(a, b) * q(b);
    }
  double best_w = 0, best_mag = -1;
  for (const auto& [key, sum] : groups) {
    const double w = static_cast<double>(key) * 1e-9;
    if (std::abs(w) <= dc_tol) continue;
    if (std::abs(sum) > best_mag) {
      best_mag = std::abs(sum);
      best_w = std::abs(w);
    }
  }
  if (best_mag < 0)
    throw std::runtime_error("dominant_step_frequency: no non-DC component");
  return best_w;
}

// ---- density-matrix channel evolution ----

struct DensityMatrix {
  int n_qubits = 0;
  Eigen::MatrixXcd rho;
};

inline DensityMatrix make_density(const StateVector& psi) {
  DensityMatrix d;
  d.n_qubits = psi.n_qubits;
  Eigen::Map<const Eigen::VectorXcd> v(psi.amp.data(),
                                       static_cast<Eigen::Index>(psi.dim()));
  d.rho = v * v.adjoint();
  return d;
}

// The cross operator X_source|0...0><0...0| whose channel evolution yields
// the trajectory ensemble's correlator means exactly. Non-Hermitian by
// design.
inline DensityMatrix make_cross_density(int n_qubits, int source_site) {
  DensityMatrix d;
  d.n_qubits = n_qubits;
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  d.rho = Eigen::MatrixXcd::Zero(dim, dim);
  d.rho(Eigen::Index{1} << source_site, 0) = 1.0;
  return d;
}

namespace detail {

inline void apply_gate_columns(Eigen::MatrixXcd& m, const Gate& g,
                               int n_qubits) {
  StateVector scratch;
  scratch.n_qubits = n_qubits;
  const Eigen::Index dim = m.rows();
  scratch.amp.resize(dim);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (Eigen::Index r = 0; r < dim; ++r) scratch.amp[r] = m(r, col);
    apply_gate(scratch, g);
    for (Eigen::Index r = 0; r < dim; ++r) m(r, col) = scratch.amp[r];
  }
}

inline void apply_pauli_columns(Eigen::MatrixXcd& m, int label, int q,
                                int n_qubits) {
  StateVector scratch;
  scratch.n_qubits = n_qubits;
  const Eigen::Index dim = m.rows();
  scratch.amp.resize(dim);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (Eigen::Index r = 0; r < dim; ++r) scratch.amp[r] = m(r, col);
    apply_pauli(scratch, label, q);
    for (Eigen::Index r = 0; r < dim; ++r) m(r, col) = scratch.amp[r];
  }
}

}  // namespace detail

// rho -> U rho U^dag. Works for non-Hermitian rho as well (the correlator
// oracle feeds X_s|0><0|).
inline void apply_gate_dm(DensityMatrix& d, const Gate& g) {
  detail::apply_gate_columns(d.rho, g, d.n_qubits);  // U rho
  d.rho.adjointInPlace();
  detail::apply_gate_columns(d.rho, g, d.n_qubits);  // U (U rho)^dag
  d.rho.adjointInPlace();                            // = U rho U^dag
}

// Exact depolarizing channel on the given targets, via the operator sum over
// all Pauli strings.
inline void apply_depol_dm(DensityMatrix& d, int arity,
                           const std::array<int, 2>& targets, double epsilon) {
  const std::vector<double> pmf = depol_pmf(arity, epsilon);
  Eigen::MatrixXcd acc = pmf[0] * d.rho;
  for (std::size_t j = 1; j < pmf.size(); ++j) {
    Eigen::MatrixXcd term = d.rho;
    for (int t = 0; t < arity; ++t) {
      const int label = static_cast<int>((j >> (2 * t)) & 3);
      if (label == 0) continue;
      detail::apply_pauli_columns(term, label, targets[t], d.n_qubits);
      term.adjointInPlace();
      detail::apply_pauli_columns(term, label, targets[t], d.n_qubits);
      term.adjointInPlace();
    }
    acc += pmf[j] * term;
  }
  d.rho = std::move(acc);
}

struct DensityEvolution {
  CorrelatorSeries series;  // Tr[X_i rho] after each step (t = 0 included)
  DensityMatrix final_state;
};

// Walk a compiled noisy circuit exactly: gates as unitary conjugation,
// insertions as the exact channel, in the same order the trajectory runner
// fires them. rho0 may be non-Hermitian.
inline DensityEvolution evolve_density_matrix(const NoisyCircuit& nc,
                                              const DensityMatrix& rho0,
                                              const std::vector<int>& sites,
                                              double dt, int source_site) {
  if (rho0.n_qubits > kDensityMatrixLimit)
    throw SizeLimitError("evolve_density_matrix: dense limit is 7 qubits");
  if (rho0.n_qubits != nc.base.n_qubits)
    throw std::invalid_argument("evolve_density_matrix: qubit count mismatch");
  DensityEvolution out;
  out.final_state = rho0;
  DensityMatrix& d = out.final_state;

  CorrelatorSeries& series = out.series;
  series.source_site = source_site;
  series.sites = sites;
  series.n_traj_effective = 0;
  series.stderr_defined = false;
  series.values.resize(sites.size());

  auto record = [&](int k) {
    series.times.push_back(k * dt);
    for (std::size_t si = 0; si < sites.size(); ++si) {
      const Eigen::Index mask = Eigen::Index{1} << sites[si];
      cdouble tr{0, 0};
      for (Eigen::Index b = 0; b < d.rho.rows(); ++b)
        tr += d.rho(b ^ mask, b);
      series.values[si].push_back(tr);
    }
  };

  record(0);
  std::size_t ins = 0;
  std::size_t next_boundary = 0;
  int step = 0;
  const auto& bounds = nc.base.step_boundaries;
  for (std::size_t gi = 0; gi < nc.base.moments.size(); ++gi) {
    for (const Gate& g : nc.base.moments[gi]) apply_gate_dm(d, g);
    while (ins < nc.insertions.size() &&
           nc.insertions[ins].after_gate == gi) {
      const ChannelInsertion& ci = nc.insertions[ins];
      apply_depol_dm(d, ci.arity, ci.targets, ci.epsilon);
      ins++;
    }
    if (next_boundary < bounds.size() && gi + 1 == bounds[next_boundary]) {
      record(++step);
      next_boundary++;
    }
  }
  return out;
}

}  // namespace z2sim
