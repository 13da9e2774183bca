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
#include <string>
#include <utility>
#include <vector>

#include "lip/pmf.hpp"
#include "lip/rng.hpp"

namespace lip_test {

// Deterministic uniform stream for property tests. Counter based so the
// sequence is identical on every platform; std:: distributions are not.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : seed_(seed) {}

  double uniform() { return lip::uniform01(seed_, counter_++); }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  // Integer in [lo, hi] inclusive.
  std::size_t uniform_index(std::size_t lo, std::size_t hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    auto off = static_cast<std::size_t>(uniform() * span);
    if (off > hi - lo) off = hi - lo;
    return lo + off;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Random prior with weights bounded away from zero so the corpus stays
// well conditioned.
inline lip::Pmf random_prior(TestRng& rng, std::size_t n) {
  std::vector<std::pair<std::string, double>> weighted;
  weighted.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    weighted.emplace_back("s" + std::to_string(i), rng.uniform(0.01, 1.0));
  }
  return lip::Pmf::from_weights(weighted);
}

// The five atom running example: priors 0.05, 0.05, 0.2, 0.3, 0.4.
inline lip::Pmf five_atom_prior() {
  return lip::Pmf::from_weights({{"1", 0.05},
                                 {"2", 0.05},
                                 {"3", 0.2},
                                 {"4", 0.3},
                                 {"5", 0.4}});
}

// Chi-square critical values at significance 1e-3 for 1..11 degrees of
// freedom.
inline double chi_square_crit(std::size_t dof) {
  static constexpr double kCrit[] = {10.828, 13.816, 16.266, 18.467,
                                     20.515, 22.458, 24.322, 26.125,
                                     27.877, 29.588, 31.264};
  return kCrit[dof - 1];
}

}  // namespace lip_test
