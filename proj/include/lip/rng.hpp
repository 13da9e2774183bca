// Copyright 2026 The liprr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>

namespace lip {

// Counter-based deterministic randomness. Each draw is a pure function of
// (seed, draw_index), so releases are reproducible across runs and platforms
// and independent draws need no shared mutable state.

// SplitMix64 finalizer. Bijective on 64-bit values.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t draw_index) {
  const std::uint64_t bits = mix64(mix64(seed) ^ draw_index);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Index i minimal with u < cdf(i) where cdf is the running sum of probs.
// Floating point leftovers can leave the final cumulative sum slightly
// below u; the last index absorbs that case.
inline std::size_t inverse_cdf_index(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return probs.size() - 1;
}

}  // namespace lip
