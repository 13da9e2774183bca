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

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lip/pmf.hpp"
#include "lip/rng.hpp"

namespace lip {

// Privacy budget. epsilon >= 0, delta in [0, 1].
struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;

  PrivacyParams() = default;
  PrivacyParams(double eps, double del) : epsilon(eps), delta(del) {
    if (!std::isfinite(epsilon) || epsilon < 0.0) {
      throw std::invalid_argument("privacy: epsilon must be >= 0 and finite");
    }
    if (!std::isfinite(delta) || delta < 0.0 || delta > 1.0) {
      throw std::invalid_argument("privacy: delta must be in [0, 1]");
    }
  }
};

inline constexpr double kEntryTolerance = 1e-12;
inline constexpr double kRowSumTolerance = 1e-9;

// A row-stochastic matrix mapping an input alphabet to an output alphabet.
// Row x holds Pr(Y = y | X = x) in output order. Entries lie in [0, 1]
// within kEntryTolerance and each row sums to 1 within kRowSumTolerance;
// entries are clamped to [0, 1] after validation so downstream sums stay
// in range.
class Channel {
 public:
  static Channel from_rows(std::vector<Symbol> inputs,
                           std::vector<Symbol> outputs,
                           std::vector<std::vector<double>> rows) {
    if (inputs.empty() || outputs.empty()) {
      throw std::invalid_argument("channel: empty alphabet");
    }
    if (rows.size() != inputs.size()) {
      throw std::invalid_argument("channel: row count does not match inputs");
    }
    check_unique(inputs, "input");
    check_unique(outputs, "output");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != outputs.size()) {
        throw std::invalid_argument("channel: row '" + inputs[r].label +
                                    "' has wrong width");
      }
      double sum = 0.0;
      for (double& q : rows[r]) {
        if (!std::isfinite(q) || q < -kEntryTolerance ||
            q > 1.0 + kEntryTolerance) {
          throw std::invalid_argument("channel: entry out of [0, 1] in row '" +
                                      inputs[r].label + "'");
        }
        q = std::min(1.0, std::max(0.0, q));
        sum += q;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw std::invalid_argument("channel: row '" + inputs[r].label +
                                    "' sums to " + std::to_string(sum));
      }
    }
    return Channel(std::move(inputs), std::move(outputs), std::move(rows));
  }

  const std::vector<Symbol>& inputs() const { return inputs_; }
  const std::vector<Symbol>& outputs() const { return outputs_; }
  std::size_t num_inputs() const { return inputs_.size(); }
  std::size_t num_outputs() const { return outputs_.size(); }

  std::span<const double> row(std::size_t x) const { return rows_[x]; }
  double at(std::size_t x, std::size_t y) const { return rows_[x][y]; }

  std::size_t input_index(const Symbol& s) const {
    return index_in(inputs_, s, "input");
  }
  std::size_t output_index(const Symbol& s) const {
    return index_in(outputs_, s, "output");
  }

 private:
  Channel(std::vector<Symbol> inputs, std::vector<Symbol> outputs,
          std::vector<std::vector<double>> rows)
      : inputs_(std::move(inputs)),
        outputs_(std::move(outputs)),
        rows_(std::move(rows)) {}

  static void check_unique(const std::vector<Symbol>& syms, const char* side) {
    for (std::size_t i = 0; i < syms.size(); ++i) {
      for (std::size_t j = i + 1; j < syms.size(); ++j) {
        if (syms[i] == syms[j]) {
          throw std::invalid_argument(std::string("channel: duplicate ") +
                                      side + " label '" + syms[i].label + "'");
        }
      }
    }
  }

  static std::size_t index_in(const std::vector<Symbol>& syms, const Symbol& s,
                              const char* side) {
    for (std::size_t i = 0; i < syms.size(); ++i) {
      if (syms[i] == s) return i;
    }
    throw std::invalid_argument(std::string("channel: unknown ") + side +
                                " symbol '" + s.label + "'");
  }

  std::vector<Symbol> inputs_;
  std::vector<Symbol> outputs_;
  std::vector<std::vector<double>> rows_;
};

// Prior-scaled randomized response over the prior's own alphabet:
//
//   q(y | x) = P(y) e^{-eps}              for y != x
//   q(x | x) = 1 - (1 - P(x)) e^{-eps}
//
// Off-diagonal mass is the prior shrunk by e^{-eps}; the diagonal takes the
// remainder, so each row sums to 1 exactly by construction. The remainder
// agrees with the closed form 1 - (1 - P(x)) e^{-eps} within 1e-12.
inline Channel build_channel(const Pmf& prior, double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw std::invalid_argument("channel: epsilon must be >= 0 and finite");
  }
  if (prior.degenerate()) {
    throw std::invalid_argument("channel: prior must have at least 2 atoms");
  }
  const double decay = std::exp(-epsilon);
  const std::size_t n = prior.size();
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    double off = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      rows[x][y] = prior.prob(y) * decay;
      off += rows[x][y];
    }
    rows[x][x] = 1.0 - off;
    assert(std::abs(rows[x][x] - (1.0 - (1.0 - prior.prob(x)) * decay)) <=
           1e-12);
  }
  return Channel::from_rows(prior.alphabet(), prior.alphabet(),
                            std::move(rows));
}

// Output distribution P_Y(y) = sum_x P(x) q(y | x). The prior's alphabet
// must equal the channel's input alphabet in the same order.
inline Pmf output_marginal(const Channel& channel, const Pmf& prior) {
  if (prior.size() != channel.num_inputs()) {
    throw std::invalid_argument("channel: prior size does not match inputs");
  }
  for (std::size_t x = 0; x < prior.size(); ++x) {
    if (prior.symbol(x) != channel.inputs()[x]) {
      throw std::invalid_argument("channel: prior alphabet does not match");
    }
  }
  std::vector<Atom> atoms;
  atoms.reserve(channel.num_outputs());
  for (std::size_t y = 0; y < channel.num_outputs(); ++y) {
    double mass = 0.0;
    for (std::size_t x = 0; x < prior.size(); ++x) {
      mass += prior.prob(x) * channel.at(x, y);
    }
    atoms.push_back(Atom{channel.outputs()[y], mass});
  }
  return Pmf::from_probabilities(std::move(atoms));
}

// Samples one released symbol for the given true input. Deterministic in
// (seed, draw_index); distinct draw indices give independent samples.
inline Symbol release(const Channel& channel, const Symbol& input,
                      std::uint64_t seed, std::uint64_t draw_index) {
  const std::size_t x = channel.input_index(input);
  const double u = uniform01(seed, draw_index);
  return channel.outputs()[inverse_cdf_index(channel.row(x), u)];
}

// Probability that the released symbol maps back to the truth under a
// caller-supplied decision rule g: input Symbol -> output Symbol.
// With the identity rule this is sum_x P(x) q(x | x).
template <typename MapFn>
double truthfulness(const Channel& channel, const Pmf& prior, MapFn&& g) {
  if (prior.size() != channel.num_inputs()) {
    throw std::invalid_argument("channel: prior size does not match inputs");
  }
  double total = 0.0;
  for (std::size_t x = 0; x < prior.size(); ++x) {
    const Symbol target = g(channel.inputs()[x]);
    total += prior.prob(x) * channel.at(x, channel.output_index(target));
  }
  return total;
}

inline double truthfulness(const Channel& channel, const Pmf& prior) {
  return truthfulness(channel, prior, [](const Symbol& s) { return s; });
}

}  // namespace lip
