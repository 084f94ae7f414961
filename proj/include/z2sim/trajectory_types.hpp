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

#include "z2sim/gates.hpp"
#include "z2sim/lattice.hpp"

namespace z2sim {

struct ShardSpec {
  std::uint64_t index = 0;
  std::uint64_t total = 1;
};

struct TrajectoryPlan {
  std::uint64_t n_traj = 1000;
  std::uint64_t master_seed = 0;
  ShardSpec shard;
  std::vector<int> record_sites;
};

// Correlator time series with ensemble statistics. values[si][k] is the mean
// of C_{sites[si], source}(times[k]); standard errors are per real/imaginary
// component and only meaningful when stderr_defined (>= 2 trajectories.
// Oracle-produced series set n_traj_effective = 0).
struct CorrelatorSeries {
  int source_site = 0;
  std::vector<int> sites;
  std::vector<double> times;
  std::vector<std::vector<cdouble>> values;
  std::vector<std::vector<double>> stderr_re;
  std::vector<std::vector<double>> stderr_im;
  std::uint64_t n_traj_effective = 0;
  bool stderr_defined = false;
};

// One trajectory's raw samples, values[si][k], kept so that shard merging can
// reproduce the unsharded reduction bit for bit.
struct TrajectorySamples {
  std::uint64_t index = 0;
  std::vector<std::vector<cdouble>> values;
};

// Parameter snapshot carried by every ensemble result; shard merging demands
// exact equality field by field.
struct RunParams {
  int n = 0;
  double beta_h = 0;
  double dt = 0;
  int n_steps = 0;
  int source_site = 0;
  double epsilon1 = 0;
  double epsilon2 = 0;
  double zeta = 0;
  double t_gate = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t n_traj = 0;
  std::vector<int> sites;
};

struct EnsembleResult {
  RunParams params;
  ShardSpec shard;
  bool partial = false;  // set when merged from an incomplete shard cover
  std::vector<TrajectorySamples> trajectories;  // ascending global index
  CorrelatorSeries series;
};

}  // namespace z2sim
