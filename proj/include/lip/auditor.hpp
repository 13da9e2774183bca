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

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lip/channel.hpp"
#include "lip/pmf.hpp"

namespace lip {

// Exact verification of the two-sided guarantee
//
//   e^{-eps} Pr(Y in S_y | X in S_x) - delta
//     <= Pr(Y in S_y) <= e^{eps} Pr(Y in S_y | X in S_x) + delta
//
// over all event pairs. Conditionals on a set S_x are convex combinations
// of conditionals on its elements and both sides are linear in them, so
// the worst S_x is always a singleton. For a fixed input the worst S_y
// collects exactly the outputs whose per-output slack is positive, which
// turns the search into two positive-part sums per input.

inline constexpr double kAuditTolerance = 1e-9;

enum class Side {
  kLower,  // Pr(Y in S_y) >= e^{-eps} Pr(Y in S_y | x) - delta
  kUpper,  // Pr(Y in S_y) <= e^{eps} Pr(Y in S_y | x) + delta
};

struct AuditReport {
  double epsilon = 0.0;
  double requested_delta = 0.0;
  double min_delta = 0.0;          // smallest delta making epsilon hold
  Symbol worst_input;              // conditioning input attaining min_delta
  Side worst_side = Side::kLower;
  std::vector<Symbol> worst_event;  // outputs of the attaining S_y
  bool pass = false;               // min_delta <= requested_delta + tol
};

namespace detail {

// Output column masses under the prior; unlike output_marginal this allows
// all-zero columns, so arbitrary channels can be audited.
inline std::vector<double> raw_marginal(const Channel& channel,
                                        const Pmf& prior) {
  if (prior.size() != channel.num_inputs()) {
    throw std::invalid_argument("audit: prior size does not match inputs");
  }
  for (std::size_t x = 0; x < prior.size(); ++x) {
    if (prior.symbol(x) != channel.inputs()[x]) {
      throw std::invalid_argument("audit: prior alphabet does not match");
    }
  }
  std::vector<double> marginal(channel.num_outputs(), 0.0);
  for (std::size_t x = 0; x < prior.size(); ++x) {
    for (std::size_t y = 0; y < channel.num_outputs(); ++y) {
      marginal[y] += prior.prob(x) * channel.at(x, y);
    }
  }
  return marginal;
}

}  // namespace detail

// Smallest delta for which the channel satisfies the guarantee at eps,
// with the attaining input, side, and output event. Ties keep the first
// input in channel order and prefer the lower side.
inline AuditReport exact_min_delta(const Channel& channel, const Pmf& prior,
                                   double eps, double requested_delta = 0.0) {
  if (!std::isfinite(eps) || eps < 0.0) {
    throw std::invalid_argument("audit: epsilon must be >= 0 and finite");
  }
  if (!std::isfinite(requested_delta) || requested_delta < 0.0 ||
      requested_delta > 1.0) {
    throw std::invalid_argument("audit: delta must be in [0, 1]");
  }
  const std::vector<double> marginal = detail::raw_marginal(channel, prior);
  const double up = std::exp(eps);
  const double down = std::exp(-eps);

  AuditReport report;
  report.epsilon = eps;
  report.requested_delta = requested_delta;
  report.min_delta = 0.0;
  report.worst_input = channel.inputs()[0];
  report.worst_side = Side::kLower;

  for (std::size_t x = 0; x < channel.num_inputs(); ++x) {
    for (Side side : {Side::kLower, Side::kUpper}) {
      double total = 0.0;
      std::vector<Symbol> event;
      for (std::size_t y = 0; y < channel.num_outputs(); ++y) {
        const double slack = side == Side::kLower
                                 ? down * channel.at(x, y) - marginal[y]
                                 : marginal[y] - up * channel.at(x, y);
        if (slack > 0.0) {
          total += slack;
          event.push_back(channel.outputs()[y]);
        }
      }
      if (total > report.min_delta) {
        report.min_delta = total;
        report.worst_input = channel.inputs()[x];
        report.worst_side = side;
        report.worst_event = std::move(event);
      }
    }
  }
  report.pass = report.min_delta <= requested_delta + kAuditTolerance;
  return report;
}

// Smallest eps with a pure (delta = 0) guarantee: the largest absolute
// log ratio of a channel entry to its output mass. Entries that are zero
// against a positive output mass force +infinity; outputs with no mass at
// all constrain nothing.
inline double min_epsilon_empirical(const Channel& channel, const Pmf& prior) {
  const std::vector<double> marginal = detail::raw_marginal(channel, prior);
  double worst = 0.0;
  for (std::size_t x = 0; x < channel.num_inputs(); ++x) {
    for (std::size_t y = 0; y < channel.num_outputs(); ++y) {
      const double q = channel.at(x, y);
      if (q == 0.0 && marginal[y] == 0.0) continue;  // 0/0 reads as ratio 1
      if (q == 0.0 || marginal[y] == 0.0) {
        return std::numeric_limits<double>::infinity();
      }
      worst = std::max(worst, std::abs(std::log(q / marginal[y])));
    }
  }
  return worst;
}

// Builds the prior-scaled channel for (prior, params) and audits it
// against its own budget.
inline AuditReport audit_mechanism(const Pmf& prior,
                                   const PrivacyParams& params) {
  return exact_min_delta(build_channel(prior, params.epsilon), prior,
                         params.epsilon, params.delta);
}

}  // namespace lip
