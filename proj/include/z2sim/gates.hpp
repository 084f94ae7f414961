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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace z2sim {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class GateKind {
  kX,
  kRx,
  kRy,
  kRz,
  kZz,          // exp(-i a Z0 Z1)
  kSqrtIswap,
  kUzz,         // diag(1,1,1,e^{i phi})
  kFused1,      // product of single-qubit gates
  kFused2,      // product of gates on a fixed qubit pair
};

// Dense gate. Matrices are row-major in the computational basis of the
// targets; for two-qubit gates the local basis index is bit(t0) + 2*bit(t1),
// i.e. the first listed target is the low bit. Single-qubit gates use m[0..3].
struct Gate {
  GateKind kind;
  int arity;
  std::array<int, 2> targets;  // targets[1] == -1 for single-qubit gates
  double param;                // angle or phase; 0 when not applicable
  std::array<cdouble, 16> m;
};

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::kX: return "x";
    case GateKind::kRx: return "rx";
    case GateKind::kRy: return "ry";
    case GateKind::kRz: return "rz";
    case GateKind::kZz: return "zz";
    case GateKind::kSqrtIswap: return "sqiswap";
    case GateKind::kUzz: return "uzz";
    case GateKind::kFused1: return "fused1";
    case GateKind::kFused2: return "fused2";
  }
  return "?";
}

namespace detail {

inline Gate make_1q(GateKind kind, int q, double param,
                    cdouble m00, cdouble m01, cdouble m10, cdouble m11) {
  Gate g{};
  g.kind = kind;
  g.arity = 1;
  g.targets = {q, -1};
  g.param = param;
  g.m[0] = m00; g.m[1] = m01; g.m[2] = m10; g.m[3] = m11;
  return g;
}

}  // namespace detail

inline Gate gate_x(int q) {
  return detail::make_1q(GateKind::kX, q, 0.0, 0.0, 1.0, 1.0, 0.0);
}

// RX(t) = exp(-i t X / 2)
inline Gate gate_rx(int q, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return detail::make_1q(GateKind::kRx, q, theta,
                         {c, 0}, {0, -s}, {0, -s}, {c, 0});
}

// RY(t) = exp(-i t Y / 2)
inline Gate gate_ry(int q, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return detail::make_1q(GateKind::kRy, q, theta,
                         {c, 0}, {-s, 0}, {s, 0}, {c, 0});
}

// RZ(t) = exp(-i t Z / 2) = diag(e^{-it/2}, e^{it/2})
inline Gate gate_rz(int q, double theta) {
  return detail::make_1q(GateKind::kRz, q, theta,
                         std::polar(1.0, -theta / 2), 0.0,
                         0.0, std::polar(1.0, theta / 2));
}

// exp(-i a Z(t0) Z(t1)) = diag(e^{-ia}, e^{ia}, e^{ia}, e^{-ia})
inline Gate gate_zz(int a, int b, double alpha) {
  Gate g{};
  g.kind = GateKind::kZz;
  g.arity = 2;
  g.targets = {a, b};
  g.param = alpha;
  const cdouble d = std::polar(1.0, -alpha), u = std::polar(1.0, alpha);
  g.m.fill(cdouble{0, 0});
  g.m[0] = d; g.m[5] = u; g.m[10] = u; g.m[15] = d;
  return g;
}

// sqrt(iSWAP): identity on |00>,|11>; [[1,i],[i,1]]/sqrt(2) on the
// {|01>,|10>} block. Symmetric under target exchange.
inline Gate gate_sqrt_iswap(int a, int b) {
  Gate g{};
  g.kind = GateKind::kSqrtIswap;
  g.arity = 2;
  g.targets = {a, b};
  g.param = 0.0;
  const double r = 1.0 / std::sqrt(2.0);
  g.m.fill(cdouble{0, 0});
  g.m[0] = 1.0;
  g.m[5] = r;       g.m[6] = {0, r};
  g.m[9] = {0, r};  g.m[10] = r;
  g.m[15] = 1.0;
  return g;
}

// diag(1,1,1,e^{i phi})
inline Gate gate_uzz(int a, int b, double phi) {
  Gate g{};
  g.kind = GateKind::kUzz;
  g.arity = 2;
  g.targets = {a, b};
  g.param = phi;
  g.m.fill(cdouble{0, 0});
  g.m[0] = 1.0; g.m[5] = 1.0; g.m[10] = 1.0;
  g.m[15] = std::polar(1.0, phi);
  return g;
}

// Crosstalk phase accumulated alongside an entangling pulse of duration
// t_gate seconds at detuning strength zeta (Hz): phi = -2 pi zeta t_gate.
inline Gate gate_uzz_crosstalk(int a, int b, double zeta, double t_gate) {
  return gate_uzz(a, b, -2.0 * kPi * zeta * t_gate);
}

inline Gate gate_fused1(int q, const std::array<cdouble, 4>& m) {
  Gate g{};
  g.kind = GateKind::kFused1;
  g.arity = 1;
  g.targets = {q, -1};
  g.param = 0.0;
  for (int i = 0; i < 4; ++i) g.m[i] = m[i];
  return g;
}

inline Gate gate_fused2(int a, int b, const std::array<cdouble, 16>& m) {
  Gate g{};
  g.kind = GateKind::kFused2;
  g.arity = 2;
  g.targets = {a, b};
  g.param = 0.0;
  g.m = m;
  return g;
}

// ---- small dense helpers (row-major fixed-size matrices) ----

inline std::array<cdouble, 4> mat2_mul(const std::array<cdouble, 4>& a,
                                       const std::array<cdouble, 4>& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline std::array<cdouble, 16> mat4_mul(const std::array<cdouble, 16>& a,
                                        const std::array<cdouble, 16>& b) {
  std::array<cdouble, 16> r{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const cdouble aik = a[4 * i + k];
      if (aik == cdouble{0, 0}) continue;
      for (int j = 0; j < 4; ++j) r[4 * i + j] += aik * b[4 * k + j];
    }
  return r;
}

// Lift a single-qubit matrix to the pair basis; slot 0 is the low bit.
inline std::array<cdouble, 16> mat2_embed(const std::array<cdouble, 4>& m,
                                          int slot) {
  std::array<cdouble, 16> r{};
  for (int row = 0; row < 4; ++row)
    for (int col = 0; col < 4; ++col) {
      const int rb = (row >> slot) & 1, cb = (col >> slot) & 1;
      const int ro = row & ~(1 << slot), co = col & ~(1 << slot);
      if (ro == co) r[4 * row + col] = m[2 * rb + cb];
    }
  return r;
}

// Exchange the roles of the two targets: local index (b0,b1) -> (b1,b0).
inline std::array<cdouble, 16> mat4_swap_targets(
    const std::array<cdouble, 16>& m) {
  auto sw = [](int i) { return ((i & 1) << 1) | ((i >> 1) & 1); };
  std::array<cdouble, 16> r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[4 * i + j] = m[4 * sw(i) + sw(j)];
  return r;
}

// Max-norm deviation of G^dagger G from identity.
inline double unitarity_defect(const Gate& g) {
  const int d = (g.arity == 1) ? 2 : 4;
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cdouble s{0, 0};
      for (int k = 0; k < d; ++k)
        s += std::conj(g.m[d * k + i]) * g.m[d * k + j];
      if (i == j) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  return worst;
}

inline bool is_unitary(const Gate& g, double tol = 1e-12) {
  return unitarity_defect(g) <= tol;
}

}  // namespace z2sim
