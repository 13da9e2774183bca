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
#include <span>
#include <stdexcept>
#include <vector>

#include "lip/channel.hpp"
#include "lip/pmf.hpp"

namespace lip {

// Feasibility analysis for the prior-scaled mechanism. Writing z = e^eps,
// a budget (eps, delta) is achievable at minimum prior mass p iff
//
//   (delta + p) z^2 - z + (1 - p) >= 0.
//
// The quadratic opens upward and is nonnegative at z = 1, so the feasible
// epsilons form either all of [0, inf) or two branches around an open gap
// whose ends are the roots of the quadratic.

namespace detail {

inline void check_p_min(double p) {
  if (!std::isfinite(p) || p <= 0.0 || p > 0.5) {
    throw std::invalid_argument("feasibility: p_min must be in (0, 0.5]");
  }
}

inline void check_p_unit(double p) {
  if (!std::isfinite(p) || p <= 0.0 || p >= 1.0) {
    throw std::invalid_argument("feasibility: p_min must be in (0, 1)");
  }
}

inline void check_epsilon(double eps) {
  if (!std::isfinite(eps) || eps < 0.0) {
    throw std::invalid_argument("feasibility: epsilon must be >= 0 and finite");
  }
}

inline void check_delta(double delta) {
  if (!std::isfinite(delta) || delta < 0.0 || delta > 1.0) {
    throw std::invalid_argument("feasibility: delta must be in [0, 1]");
  }
}

// Discriminant of the feasibility quadratic.
inline double discriminant(double p, double delta) {
  return 1.0 - 4.0 * (delta + p) * (1.0 - p);
}

}  // namespace detail

// Closed interval of epsilons; hi may be +infinity.
struct EpsilonInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double eps) const { return eps >= lo && eps <= hi; }
};

// Feasible epsilons for fixed (p_min, delta): a union of one or two closed
// intervals. Zero is always feasible; for delta = 0 and p_min < 1/2 the
// first interval is the single point {0}.
struct EpsilonRegion {
  std::vector<EpsilonInterval> intervals;
  bool includes_zero = true;

  bool contains(double eps) const {
    for (const EpsilonInterval& iv : intervals) {
      if (iv.contains(eps)) return true;
    }
    return false;
  }
};

// Smallest epsilon with a pure (delta = 0) guarantee besides epsilon = 0:
// log(1/p - 1), clamped at 0 for p >= 1/2 where every epsilon works.
inline double min_epsilon_pure(double p) {
  detail::check_p_unit(p);
  return std::max(0.0, std::log((1.0 - p) / p));
}

// Smallest delta achievable at (p_min, eps), clamped to [0, 1]. In terms
// of t = e^{-eps} the bound is t(1 - t) - p(1 - t^2), which stays finite
// for every eps >= 0. For p >= 1/2 the raw value is never positive.
inline double delta_bound(double p, double eps) {
  detail::check_p_unit(p);
  detail::check_epsilon(eps);
  const double t = std::exp(-eps);
  const double raw = t * (1.0 - t) - p * (1.0 - t * t);
  return std::min(1.0, std::max(0.0, raw));
}

// Ends of the infeasible gap in epsilon for fixed (p_min, delta). The low
// feasible branch is [0, low_branch_hi], the high one [high_branch_lo, inf).
// Both ends are NaN when there is no gap, and coincide when the gap has
// shrunk to a point.
struct GapBoundary {
  double low_branch_hi = std::numeric_limits<double>::quiet_NaN();
  double high_branch_lo = std::numeric_limits<double>::quiet_NaN();

  bool exists() const { return !std::isnan(low_branch_hi); }
};

inline GapBoundary infeasible_region_boundary(double p, double delta) {
  detail::check_p_min(p);
  detail::check_delta(delta);
  const double disc = detail::discriminant(p, delta);
  if (disc < 0.0) return GapBoundary{};
  if (delta == 0.0) {
    // Exact roots z = 1 and z = 1/p - 1; avoids sqrt rounding at the ends.
    const double hi = std::max(0.0, std::log((1.0 - p) / p));
    return GapBoundary{0.0, hi};
  }
  const double root = std::sqrt(disc);
  // Rationalized forms keep the smaller root away from cancellation.
  const double z_lo = 2.0 * (1.0 - p) / (1.0 + root);
  const double z_hi = (1.0 + root) / (2.0 * (delta + p));
  return GapBoundary{std::max(0.0, std::log(z_lo)),
                     std::max(0.0, std::log(z_hi))};
}

// Full feasible region for fixed (p_min, delta).
inline EpsilonRegion epsilon_range(double p, double delta) {
  const GapBoundary gap = infeasible_region_boundary(p, delta);
  constexpr double inf = std::numeric_limits<double>::infinity();
  EpsilonRegion region;
  region.includes_zero = true;
  if (!gap.exists() || gap.low_branch_hi == gap.high_branch_lo) {
    region.intervals.push_back(EpsilonInterval{0.0, inf});
    return region;
  }
  region.intervals.push_back(EpsilonInterval{0.0, gap.low_branch_hi});
  region.intervals.push_back(EpsilonInterval{gap.high_branch_lo, inf});
  return region;
}

// Smallest p_min for which (eps, delta) is achievable:
//
//   max(0, 1/(z + 1) - delta z^2 / (z^2 - 1)),  z = e^eps,
//
// obtained by solving the feasibility quadratic for p. Zero for eps = 0.
inline double pmin_threshold(double eps, double delta) {
  detail::check_epsilon(eps);
  detail::check_delta(delta);
  if (eps == 0.0) return 0.0;
  const double z = std::exp(eps);
  const double zz = z * z;
  const double correction =
      std::isinf(zz) ? delta : delta * zz / (zz - 1.0);
  const double base = std::isinf(z) ? 0.0 : 1.0 / (z + 1.0);
  return std::max(0.0, base - correction);
}

// Evenly spaced grid lo, lo + step, ..., capped at hi. Endpoints within
// half an ulp-scaled slack of hi are included.
inline std::vector<double> make_grid(double lo, double hi, double step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) ||
      step <= 0.0 || hi < lo) {
    throw std::invalid_argument("feasibility: bad grid lo:hi:step");
  }
  const double slack = step * 1e-9;
  const std::size_t count =
      static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    if (x > hi + slack) break;
    grid.push_back(std::min(x, hi));
  }
  return grid;
}

struct TradeoffPoint {
  double epsilon = 0.0;
  double delta_min = 0.0;
  double p_min = 0.0;
};

// delta_bound sampled over a grid of epsilons.
inline std::vector<TradeoffPoint> tradeoff_curve(
    double p, std::span<const double> epsilons) {
  detail::check_p_min(p);
  std::vector<TradeoffPoint> curve;
  curve.reserve(epsilons.size());
  for (double eps : epsilons) {
    curve.push_back(TradeoffPoint{eps, delta_bound(p, eps), p});
  }
  return curve;
}

struct BoundaryPoint {
  double p_min = 0.0;
  GapBoundary gap;
};

// Gap ends swept over a grid of p_min values at fixed delta.
inline std::vector<BoundaryPoint> infeasible_region_boundary(
    std::span<const double> pmin_grid, double delta) {
  std::vector<BoundaryPoint> points;
  points.reserve(pmin_grid.size());
  for (double p : pmin_grid) {
    points.push_back(BoundaryPoint{p, infeasible_region_boundary(p, delta)});
  }
  return points;
}

// True when (eps, delta) is achievable at minimum prior mass p.
inline bool feasible(double p, double eps, double delta) {
  detail::check_delta(delta);
  return delta >= delta_bound(p, eps);
}

}  // namespace lip
