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
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lip/channel.hpp"
#include "lip/feasibility.hpp"
#include "lip/pmf.hpp"

namespace lip {

// Merging the ell smallest atoms into one raises the minimum prior mass to
// min(sum of merged, next smallest), which loosens the delta bound. The
// merged symbol's label is the member labels joined with '+'.

// How to coarsen an alphabet: merge `members` (the ell smallest atoms in
// nondecreasing order) into `grouped_symbol`, leaving `reduced` with the
// grouped symbol first and the untouched atoms after it, still sorted.
// ell = |alphabet| merges everything; the resulting one atom plan is
// degenerate and only serializable, not usable as a mechanism.
struct GroupingPlan {
  Pmf original;
  std::size_t ell;
  std::vector<Symbol> members;
  Symbol grouped_symbol;
  Pmf reduced;

  bool degenerate() const { return reduced.degenerate(); }

  // Original symbol to its reduced-alphabet image.
  Symbol map(const Symbol& x) const {
    for (const Symbol& m : members) {
      if (m == x) return grouped_symbol;
    }
    if (!reduced.contains(x)) {
      throw std::invalid_argument("grouping: unknown symbol '" + x.label +
                                  "'");
    }
    return x;
  }
};

inline GroupingPlan group_plan(const Pmf& prior, std::size_t ell) {
  if (ell < 1 || ell > prior.size()) {
    throw std::invalid_argument("grouping: ell must be in [1, |alphabet|]");
  }
  const Pmf sorted = sort_nondecreasing(prior);
  std::vector<Symbol> members;
  members.reserve(ell);
  std::string joined;
  double mass = 0.0;
  for (std::size_t i = 0; i < ell; ++i) {
    members.push_back(sorted.symbol(i));
    if (i > 0) joined += '+';
    joined += sorted.symbol(i).label;
    mass += sorted.prob(i);
  }
  const Symbol grouped{joined};
  std::vector<Atom> atoms;
  atoms.reserve(sorted.size() - ell + 1);
  atoms.push_back(Atom{grouped, mass});
  for (std::size_t i = ell; i < sorted.size(); ++i) {
    if (sorted.symbol(i) == grouped) {
      throw std::invalid_argument("grouping: merged label '" + joined +
                                  "' collides with an existing label");
    }
    atoms.push_back(sorted.atoms()[i]);
  }
  return GroupingPlan{prior, ell, std::move(members), grouped,
                      Pmf::from_probabilities(std::move(atoms))};
}

// Minimum mass after merging: min of the merged mass and the next smallest
// surviving atom, which is exactly p_min of the reduced prior.
inline double p_min_grouped(const GroupingPlan& plan) {
  if (plan.degenerate()) {
    throw std::invalid_argument("grouping: plan merges the whole alphabet");
  }
  return p_min(plan.reduced);
}

// Mechanism over the original inputs that first coarsens to the reduced
// alphabet, then randomizes under the reduced prior. Row for x is the
// prior-scaled row of map(x): off the image P'(y') e^{-eps}, on the image
// the remainder. Merged inputs share identical rows, so the channel
// factors through the deterministic map.
inline Channel grouped_channel(const GroupingPlan& plan, double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw std::invalid_argument("grouping: epsilon must be >= 0 and finite");
  }
  if (plan.degenerate()) {
    throw std::invalid_argument("grouping: plan merges the whole alphabet");
  }
  const Pmf& reduced = plan.reduced;
  const double decay = std::exp(-epsilon);
  std::vector<std::vector<double>> rows;
  rows.reserve(plan.original.size());
  for (std::size_t x = 0; x < plan.original.size(); ++x) {
    const std::size_t image = reduced.index_of(plan.map(plan.original.symbol(x)));
    std::vector<double> row(reduced.size(), 0.0);
    double off = 0.0;
    for (std::size_t y = 0; y < reduced.size(); ++y) {
      if (y == image) continue;
      row[y] = reduced.prob(y) * decay;
      off += row[y];
    }
    row[image] = 1.0 - off;
    rows.push_back(std::move(row));
  }
  return Channel::from_rows(plan.original.alphabet(), reduced.alphabet(),
                            std::move(rows));
}

// Delta bound after grouping, evaluated at the raised minimum mass.
inline double delta_bound_grouped(const GroupingPlan& plan, double epsilon) {
  return delta_bound(p_min_grouped(plan), epsilon);
}

// Smallest ell whose grouped minimum mass reaches the threshold for
// (eps, delta); ell = 1 means the prior is feasible as is. The grouped
// minimum is nondecreasing in ell, so the first hit is the minimum. The
// total merge is excluded: it destroys all information.
inline std::optional<std::size_t> min_ell(const Pmf& prior,
                                          const PrivacyParams& params) {
  const double threshold = pmin_threshold(params.epsilon, params.delta);
  const Pmf sorted = sort_nondecreasing(prior);
  double prefix = 0.0;
  for (std::size_t ell = 1; ell < sorted.size(); ++ell) {
    prefix += sorted.prob(ell - 1);
    const double grouped_min = std::min(prefix, sorted.prob(ell));
    if (grouped_min >= threshold) return ell;
  }
  return std::nullopt;
}

}  // namespace lip
