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
#include <stdexcept>
#include <vector>

namespace z2sim {

// Bond sublattices. Horizontal bonds split by the column parity of their left
// endpoint, vertical bonds by the row parity of their top endpoint; each of
// the four lists is a matching (no shared sites within a list).
enum class BondClass { kHEven, kHOdd, kVEven, kVOdd };

struct Bond {
  int a, b;  // site indices, a < b
  BondClass cls;
};

// n x n grid of spins with open boundary. Sites are row-major: (r, c) maps to
// r*n + c. boundary_mass[s] counts missing neighbors capped at 2 (edges 1,
// corners 2; the 1x1 grid's lone site is treated as a corner).
struct LatticeSpec {
  int n = 0;
  int n_sites = 0;
  std::vector<Bond> bonds;
  std::vector<int> boundary_mass;

  int site(int r, int c) const { return r * n + c; }
};

inline LatticeSpec build_lattice(int n) {
  if (n < 1) throw std::invalid_argument("build_lattice: n must be >= 1");
  LatticeSpec lat;
  lat.n = n;
  lat.n_sites = n * n;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c + 1 < n; ++c)
      lat.bonds.push_back({lat.site(r, c), lat.site(r, c + 1),
                           c % 2 == 0 ? BondClass::kHEven : BondClass::kHOdd});
  for (int r = 0; r + 1 < n; ++r)
    for (int c = 0; c < n; ++c)
      lat.bonds.push_back({lat.site(r, c), lat.site(r + 1, c),
                           r % 2 == 0 ? BondClass::kVEven : BondClass::kVOdd});
  std::vector<int> degree(lat.n_sites, 0);
  for (const Bond& b : lat.bonds) {
    degree[b.a]++;
    degree[b.b]++;
  }
  lat.boundary_mass.resize(lat.n_sites);
  for (int s = 0; s < lat.n_sites; ++s)
    lat.boundary_mass[s] = std::min(4 - degree[s], 2);
  return lat;
}

inline std::vector<Bond> bonds_of_class(const LatticeSpec& lat, BondClass c) {
  std::vector<Bond> out;
  for (const Bond& b : lat.bonds)
    if (b.cls == c) out.push_back(b);
  return out;
}

inline int default_source_site(const LatticeSpec& lat) {
  return lat.site(lat.n / 2, lat.n / 2);
}

// Model couplings and evolution schedule. J*Gamma == 1 by construction.
struct CouplingParams {
  double beta_h = 0;
  double j = 0;
  double gamma = 0;
  double dt = 0;
  int n_steps = 0;
  int source_site = 0;
};

inline CouplingParams make_params(double beta_h, double dt, int n_steps,
                                  const LatticeSpec& lat,
                                  int source_site = -1) {
  if (!(beta_h > 0)) throw std::invalid_argument("params: beta_h must be > 0");
  if (!(dt > 0)) throw std::invalid_argument("params: dt must be > 0");
  if (n_steps < 0) throw std::invalid_argument("params: n_steps must be >= 0");
  CouplingParams p;
  p.beta_h = beta_h;
  p.j = 1.0 / beta_h;
  p.gamma = beta_h;
  p.dt = dt;
  p.n_steps = n_steps;
  p.source_site = source_site < 0 ? default_source_site(lat) : source_site;
  if (p.source_site >= lat.n_sites)
    throw std::out_of_range("params: source_site out of range");
  return p;
}

enum class SitePolicy { kSource, kSymmetry, kAll };

// Sites to record the correlator at. The symmetry-reduced list is the upper
// triangle (r <= c), the n(n+1)/2 representatives under the transpose
// reflection; that reflection fixes the source only when it lies on the main
// diagonal, so off-diagonal sources fall back to the full list.
inline std::vector<int> record_sites(const LatticeSpec& lat, int source,
                                     SitePolicy policy) {
  switch (policy) {
    case SitePolicy::kSource:
      return {source};
    case SitePolicy::kSymmetry: {
      const int r = source / lat.n, c = source % lat.n;
      if (r != c) break;
      std::vector<int> out;
      for (int i = 0; i < lat.n; ++i)
        for (int k = i; k < lat.n; ++k) out.push_back(lat.site(i, k));
      return out;
    }
    case SitePolicy::kAll:
      break;
  }
  std::vector<int> out(lat.n_sites);
  for (int s = 0; s < lat.n_sites; ++s) out[s] = s;
  return out;
}

}  // namespace z2sim
