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

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "z2sim/state.hpp"

namespace z2sim {

// Gates within one moment act on pairwise disjoint qubits, so their
// application order is irrelevant up to rounding.
using Moment = std::vector<Gate>;

struct Circuit {
  int n_qubits = 0;
  std::vector<Moment> moments;
  // Cumulative moment counts marking the end of each Trotter step; empty for
  // circuits without step structure. Strictly increasing, last entry equals
  // moments.size() when the circuit is exactly a whole number of steps.
  std::vector<std::size_t> step_boundaries;
};

struct GateCounts {
  std::size_t one_qubit = 0;
  std::size_t two_qubit = 0;
  std::map<std::string, std::size_t> by_name;

  std::size_t total() const { return one_qubit + two_qubit; }
};

inline void validate(const Circuit& c) {
  if (c.n_qubits < 1)
    throw std::invalid_argument("circuit: n_qubits must be positive");
  for (const Moment& mom : c.moments) {
    std::vector<bool> used(c.n_qubits, false);
    for (const Gate& g : mom) {
      for (int k = 0; k < g.arity; ++k) {
        const int t = g.targets[k];
        if (t < 0 || t >= c.n_qubits)
          throw std::out_of_range("circuit: gate target out of range");
        if (used[t])
          throw std::invalid_argument("circuit: moment reuses a qubit");
        used[t] = true;
      }
      if (g.arity == 2 && g.targets[0] == g.targets[1])
        throw std::invalid_argument("circuit: two-qubit gate needs distinct targets");
    }
  }
  std::size_t prev = 0;
  for (std::size_t b : c.step_boundaries) {
    if (b <= prev || b > c.moments.size())
      throw std::invalid_argument("circuit: step boundaries not increasing");
    prev = b;
  }
}

inline void apply_circuit(StateVector& s, const Circuit& c) {
  for (const Moment& mom : c.moments)
    for (const Gate& g : mom) apply_gate(s, g);
}

inline std::vector<Gate> flatten(const Circuit& c) {
  std::vector<Gate> out;
  for (const Moment& mom : c.moments)
    for (const Gate& g : mom) out.push_back(g);
  return out;
}

inline GateCounts count_gates(const Circuit& c) {
  GateCounts n;
  for (const Moment& mom : c.moments)
    for (const Gate& g : mom) {
      (g.arity == 1 ? n.one_qubit : n.two_qubit)++;
      n.by_name[gate_name(g.kind)]++;
    }
  return n;
}

// ---- text serialization (one gate per line; round-trips exactly) ----

inline std::string to_text(const Circuit& c) {
  std::ostringstream out;
  char buf[64];
  out << "# z2sim circuit v1\n";
  out << "qubits " << c.n_qubits << "\n";
  if (!c.step_boundaries.empty()) {
    out << "steps";
    for (std::size_t b : c.step_boundaries) out << ' ' << b;
    out << "\n";
  }
  for (const Moment& mom : c.moments) {
    out << "moment\n";
    for (const Gate& g : mom) {
      out << gate_name(g.kind);
      for (int k = 0; k < g.arity; ++k) out << ' ' << g.targets[k];
      switch (g.kind) {
        case GateKind::kRx:
        case GateKind::kRy:
        case GateKind::kRz:
        case GateKind::kZz:
        case GateKind::kUzz:
          std::snprintf(buf, sizeof buf, " %.17g", g.param);
          out << buf;
          break;
        case GateKind::kFused1:
        case GateKind::kFused2: {
          const int d = g.arity == 1 ? 4 : 16;
          for (int i = 0; i < d; ++i) {
            std::snprintf(buf, sizeof buf, " %.17g %.17g", g.m[i].real(),
                          g.m[i].imag());
            out << buf;
          }
          break;
        }
        default:
          break;
      }
      out << "\n";
    }
  }
  return out.str();
}

inline Circuit from_text(const std::string& text) {
  Circuit c;
  std::istringstream in(text);
  std::string line;
  bool have_qubits = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "qubits") {
      ls >> c.n_qubits;
      have_qubits = true;
    } else if (tok == "steps") {
      std::size_t b;
      while (ls >> b) c.step_boundaries.push_back(b);
    } else if (tok == "moment") {
      c.moments.emplace_back();
    } else {
      if (!have_qubits || c.moments.empty())
        throw std::invalid_argument("circuit text: gate before header");
      int a = -1, b = -1;
      double p = 0;
      Gate g{};
      if (tok == "x") {
        ls >> a;
        g = gate_x(a);
      } else if (tok == "rx") {
        ls >> a >> p;
        g = gate_rx(a, p);
      } else if (tok == "ry") {
        ls >> a >> p;
        g = gate_ry(a, p);
      } else if (tok == "rz") {
        ls >> a >> p;
        g = gate_rz(a, p);
      } else if (tok == "zz") {
        ls >> a >> b >> p;
        g = gate_zz(a, b, p);
      } else if (tok == "sqiswap") {
        ls >> a >> b;
        g = gate_sqrt_iswap(a, b);
      } else if (tok == "uzz") {
        ls >> a >> b >> p;
        g = gate_uzz(a, b, p);
      } else if (tok == "fused1" || tok == "fused2") {
        const int arity = (tok == "fused2") ? 2 : 1;
        ls >> a;
        if (arity == 2) ls >> b;
        const int d = arity == 1 ? 4 : 16;
        std::array<cdouble, 16> m{};
        for (int i = 0; i < d; ++i) {
          double re, im;
          if (!(ls >> re >> im))
            throw std::invalid_argument("circuit text: truncated matrix");
          m[i] = {re, im};
        }
        if (arity == 1) {
          std::array<cdouble, 4> m2 = {m[0], m[1], m[2], m[3]};
          g = gate_fused1(a, m2);
        } else {
          g = gate_fused2(a, b, m);
        }
      } else {
        throw std::invalid_argument("circuit text: unknown gate '" + tok + "'");
      }
      if (ls.fail())
        throw std::invalid_argument("circuit text: malformed line '" + line + "'");
      c.moments.back().push_back(g);
    }
  }
  if (!have_qubits) throw std::invalid_argument("circuit text: missing qubits line");
  validate(c);
  return c;
}

}  // namespace z2sim
