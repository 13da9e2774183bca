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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace lip {

// One element of a finite alphabet. Labels are unique within an alphabet.
struct Symbol {
  std::string label;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct Atom {
  Symbol symbol;
  double prob = 0.0;
};

// What to do with zero-weight atoms on construction.
enum class ZeroPolicy {
  kReject,  // a zero weight is an error
  kDrop,    // zero weights are removed before normalization
};

// Total mass must match 1 within this tolerance.
inline constexpr double kMassTolerance = 1e-9;

// A validated discrete distribution over a finite labeled alphabet. Every
// atom probability is strictly positive and the total mass is 1 within
// kMassTolerance. Immutable after construction, safe to share across threads.
//
// A Pmf normally has at least two atoms. Single-atom instances can only be
// produced through from_probabilities (a fully merged alphabet) and are
// reported by degenerate().
class Pmf {
 public:
  // Builds a Pmf from nonnegative weights, normalizing by their sum. Weights
  // whose sum is already within kMassTolerance of 1 are kept verbatim so
  // that hand-specified priors retain their exact values.
  static Pmf from_weights(
      const std::vector<std::pair<std::string, double>>& weighted,
      ZeroPolicy policy = ZeroPolicy::kReject) {
    if (weighted.empty()) {
      throw std::invalid_argument("pmf: empty atom list");
    }
    std::vector<Atom> kept;
    kept.reserve(weighted.size());
    for (const auto& [label, weight] : weighted) {
      if (label.empty()) {
        throw std::invalid_argument("pmf: empty label");
      }
      if (!std::isfinite(weight) || weight < 0.0) {
        throw std::invalid_argument("pmf: weight of '" + label +
                                    "' is negative or not finite");
      }
      if (weight == 0.0) {
        if (policy == ZeroPolicy::kReject) {
          throw std::invalid_argument("pmf: zero weight for '" + label +
                                      "' (policy is reject)");
        }
        continue;
      }
      kept.push_back(Atom{Symbol{label}, weight});
    }
    if (kept.empty()) {
      throw std::invalid_argument("pmf: all weights are zero");
    }
    if (kept.size() < 2) {
      throw std::invalid_argument(
          "pmf: fewer than 2 atoms with positive weight");
    }
    check_unique_labels(kept);
    double sum = 0.0;
    for (const Atom& a : kept) sum += a.prob;
    if (std::abs(sum - 1.0) > kMassTolerance) {
      for (Atom& a : kept) a.prob /= sum;
    }
    return Pmf(std::move(kept));
  }

  // Accepts atoms that already satisfy the mass invariants; no
  // renormalization. Single-atom inputs are allowed here.
  static Pmf from_probabilities(std::vector<Atom> atoms) {
    if (atoms.empty()) {
      throw std::invalid_argument("pmf: empty atom list");
    }
    double sum = 0.0;
    for (const Atom& a : atoms) {
      if (a.symbol.label.empty()) {
        throw std::invalid_argument("pmf: empty label");
      }
      if (!std::isfinite(a.prob) || a.prob <= 0.0) {
        throw std::invalid_argument("pmf: probability of '" + a.symbol.label +
                                    "' is not in (0, 1]");
      }
      sum += a.prob;
    }
    if (std::abs(sum - 1.0) > kMassTolerance) {
      throw std::invalid_argument("pmf: probabilities sum to " +
                                  std::to_string(sum) + ", expected 1");
    }
    check_unique_labels(atoms);
    return Pmf(std::move(atoms));
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool degenerate() const { return atoms_.size() == 1; }

  const Symbol& symbol(std::size_t i) const { return atoms_[i].symbol; }
  double prob(std::size_t i) const { return atoms_[i].prob; }

  // Index of a symbol in atom order; throws if the symbol is unknown.
  std::size_t index_of(const Symbol& s) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (atoms_[i].symbol == s) return i;
    }
    throw std::invalid_argument("pmf: unknown symbol '" + s.label + "'");
  }

  bool contains(const Symbol& s) const {
    return std::any_of(atoms_.begin(), atoms_.end(),
                       [&s](const Atom& a) { return a.symbol == s; });
  }

  double prob_of(const Symbol& s) const { return atoms_[index_of(s)].prob; }

  std::vector<Symbol> alphabet() const {
    std::vector<Symbol> out;
    out.reserve(atoms_.size());
    for (const Atom& a : atoms_) out.push_back(a.symbol);
    return out;
  }

  friend bool operator==(const Pmf& a, const Pmf& b) {
    if (a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
      if (a.atoms_[i].symbol != b.atoms_[i].symbol ||
          a.atoms_[i].prob != b.atoms_[i].prob) {
        return false;
      }
    }
    return true;
  }

 private:
  explicit Pmf(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

  static void check_unique_labels(const std::vector<Atom>& atoms) {
    std::unordered_set<std::string> seen;
    for (const Atom& a : atoms) {
      if (!seen.insert(a.symbol.label).second) {
        throw std::invalid_argument("pmf: duplicate label '" + a.symbol.label +
                                    "'");
      }
    }
  }

  std::vector<Atom> atoms_;
};

// Smallest atom probability.
inline double p_min(const Pmf& pmf) {
  double m = pmf.prob(0);
  for (std::size_t i = 1; i < pmf.size(); ++i) m = std::min(m, pmf.prob(i));
  return m;
}

// Atoms reordered by probability ascending; ties keep their input order.
inline Pmf sort_nondecreasing(const Pmf& pmf) {
  std::vector<Atom> atoms = pmf.atoms();
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.prob < b.prob; });
  return Pmf::from_probabilities(std::move(atoms));
}

}  // namespace lip
