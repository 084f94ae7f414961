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
#include <random>

namespace z2sim {

// splitmix64 step. Used to derive independent per-trajectory seeds from a
// single master seed; the generator state advances by the golden-ratio
// increment so distinct inputs never collide on short ranges.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed for trajectory `index` under `master_seed`. Depends only on the two
// arguments, so any sharding of the index range reproduces the same streams.
inline std::uint64_t trajectory_seed(std::uint64_t master_seed,
                                     std::uint64_t index) {
  std::uint64_t s = master_seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  return splitmix64(s);
}

// Deterministic uniform stream. mt19937_64 has an identical sequence on every
// platform, and the [0,1) mapping below uses the top 53 bits only, so draws
// are bit-reproducible across compilers and architectures.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0,1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) by rejection; unbiased for any bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace z2sim
