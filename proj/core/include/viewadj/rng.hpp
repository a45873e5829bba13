// Copyright 2026 The viewadj Authors.
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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace viewadj {

/// mt19937_64 with fixed, platform-independent draw mappings.
///
/// std::uniform_*_distribution are implementation-defined, so draws are
/// mapped explicitly to keep artifacts reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return static_cast<std::size_t>(r % n);
  }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Independent child stream.
  Rng fork() { return Rng(engine_()); }

 private:
  std::mt19937_64 engine_;
};

/// FNV-1a of the id mixed with the base seed (splitmix64 finalizer); used to
/// derive per-item seeds so parallel generation stays deterministic.
std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view id);

}  // namespace viewadj
