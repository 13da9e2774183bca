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

// Release gate for the library and CLI. Prints one PASS or FAIL line per
// criterion and exits nonzero if any criterion fails. Tolerances are pinned
// here on purpose; loosening them is a release decision, not a test fix.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lip/lip.hpp"
#include "test_support.hpp"

namespace {

using lip_test::TestRng;
using lip_test::five_atom_prior;

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const char* bin = std::getenv("LIP_CLI_BIN");
  if (bin == nullptr) {
    std::fprintf(stderr, "LIP_CLI_BIN is not set\n");
    std::exit(2);
  }
  const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    std::fprintf(stderr, "popen failed\n");
    std::exit(2);
  }
  CliResult result;
  char buf[1 << 16];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
    result.out.append(buf, got);
  }
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_start = 0;
  bool header = true;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      if (i > line_start && !header) {
        std::vector<double> row;
        std::size_t start = line_start;
        for (std::size_t j = line_start; j <= i; ++j) {
          if (j == i || text[j] == ',') {
            row.push_back(
                std::strtod(text.substr(start, j - start).c_str(), nullptr));
            start = j + 1;
          }
        }
        rows.push_back(std::move(row));
      }
      header = false;
      line_start = i + 1;
    }
  }
  return rows;
}

// The two sided constraint as a scalar: positive iff (p, delta) admits eps.
double region_form(double p, double delta, double eps) {
  const double z = std::exp(eps);
  return (delta + p) * z * z - z + 1.0 - p;
}

// Root of region_form in [lo, lo + 1], located independently of the
// closed form solver.
double bisect_upper_root(double p, double delta, double lo) {
  double hi = lo + 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (region_form(p, delta, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool criterion_1() {
  const double got = lip::min_epsilon_pure(0.05);
  return std::abs(got - 2.9444389791664403) <= 1e-12 &&
         std::abs(got - 2.94) <= 0.005;
}

bool criterion_2() {
  const lip::Pmf five = five_atom_prior();
  const lip::GroupingPlan plan2 = lip::group_plan(five, 2);
  const lip::GroupingPlan plan3 = lip::group_plan(five, 3);
  if (lip::p_min_grouped(plan2) != 0.1) return false;
  if (lip::p_min_grouped(plan3) != 0.3) return false;
  const double thr2 = lip::min_epsilon_pure(lip::p_min_grouped(plan2));
  const double thr3 = lip::min_epsilon_pure(lip::p_min_grouped(plan3));
  return std::abs(thr2 - std::log(9.0)) <= 0.005 &&
         std::abs(thr3 - std::log(7.0 / 3.0)) <= 0.005;
}

bool criterion_3() {
  // Display values are printed truncated to two decimals, so the solved
  // endpoint must sit in [display, display + 0.01); an independent
  // bisection pins it to full precision.
  const struct {
    double p;
    double display;
  } cases[] = {{0.05, 2.75}, {0.1, 2.08}, {0.3, 0.78}};
  for (const auto& c : cases) {
    const lip::EpsilonRegion region = lip::epsilon_range(c.p, 0.01);
    if (region.intervals.size() != 2) return false;
    const double endpoint = region.intervals[1].lo;
    if (endpoint - c.display < 0.0 || endpoint - c.display >= 0.01) {
      return false;
    }
    const double root = bisect_upper_root(c.p, 0.01, c.display);
    if (std::abs(endpoint - root) > 1e-12) return false;
  }
  return true;
}

// Criteria 4 and 5 share one random corpus: the audited slack of the
// closed form channel against the literal bound, exact zero slack at the
// pure threshold, and marginal preservation.
bool criterion_4_5(bool* marginal_ok) {
  TestRng rng(2026);
  bool audit_ok = true;
  *marginal_ok = true;
  for (int trial = 0; trial < 500; ++trial) {
    const lip::Pmf prior =
        lip_test::random_prior(rng, rng.uniform_index(2, 12));
    const double eps = rng.uniform(0.0, 6.0);
    const lip::Channel ch = lip::build_channel(prior, eps);
    const double p = lip::p_min(prior);
    const double z = std::exp(eps);
    const double literal =
        std::max(0.0, (z - 1.0) * (1.0 - p * (z + 1.0)) / (z * z));
    const double got = lip::exact_min_delta(ch, prior, eps).min_delta;
    if (std::abs(got - literal) > 1e-9) audit_ok = false;

    const double eps0 = lip::min_epsilon_pure(p);
    const lip::Channel ch0 = lip::build_channel(prior, eps0);
    if (lip::exact_min_delta(ch0, prior, eps0).min_delta > 1e-12) {
      audit_ok = false;
    }

    const lip::Pmf marginal = lip::output_marginal(ch, prior);
    for (std::size_t i = 0; i < prior.size(); ++i) {
      if (std::abs(marginal.prob(i) - prior.prob(i)) > 1e-12) {
        *marginal_ok = false;
      }
    }
  }
  return audit_ok;
}

bool criterion_6() {
  TestRng rng(2027);
  const std::vector<double> grid = lip::make_grid(0.0, 8.0, 1e-3);
  for (int pair = 0; pair < 50; ++pair) {
    const double p = rng.uniform(0.01, 0.5);
    const double delta = pair % 5 == 0 ? 0.0 : rng.uniform(0.0, 0.3);
    const lip::EpsilonRegion region = lip::epsilon_range(p, delta);
    for (const double eps : grid) {
      const double g = region_form(p, delta, eps);
      const double z = std::exp(eps);
      const double scale = (delta + p) * z * z + z + 1.0 + p;
      if (std::abs(g) <= 1e-12 * scale) continue;  // boundary noise band
      if (region.contains(eps) != (g > 0.0)) return false;
    }
  }
  return true;
}

bool criterion_7() {
  const double pmins[] = {0.3, 0.1, 0.01};
  const double step = 1e-3;
  std::vector<std::vector<double>> deltas;
  for (const double p : pmins) {
    char cmd[64];
    std::snprintf(cmd, sizeof(cmd), "tradeoff --pmin %g --grid 0:6:%g", p,
                  step);
    const CliResult res = run_cli(cmd);
    if (res.exit_code != 0) return false;
    const auto rows = parse_csv_rows(res.out);
    if (rows.size() != 6001) return false;
    if (rows[0][0] != 0.0 || rows[0][1] != 0.0) return false;
    std::vector<double> curve;
    curve.reserve(rows.size());
    for (const auto& row : rows) curve.push_back(row[1]);

    // First zero after the low end brackets the pure threshold.
    const double threshold = std::log(1.0 / p - 1.0);
    std::size_t first_zero = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (curve[i] == 0.0) {
        first_zero = i;
        break;
      }
    }
    if (first_zero == 0) return false;
    if (std::abs(rows[first_zero][0] - threshold) > step + 1e-9) return false;
    deltas.push_back(std::move(curve));
  }
  // Smaller p_min demands at least as much delta everywhere.
  for (std::size_t i = 0; i < deltas[0].size(); ++i) {
    if (deltas[2][i] < deltas[1][i] || deltas[1][i] < deltas[0][i]) {
      return false;
    }
  }

  // Infeasible gaps shrink as delta grows.
  const double budget_deltas[] = {0.0, 0.01, 0.1};
  std::vector<std::vector<std::vector<double>>> sweeps;
  for (const double d : budget_deltas) {
    char cmd[80];
    std::snprintf(cmd, sizeof(cmd),
                  "tradeoff --boundary --grid 0.01:0.45:0.01 --delta %g", d);
    const CliResult res = run_cli(cmd);
    if (res.exit_code != 0) return false;
    auto rows = parse_csv_rows(res.out);
    if (rows.size() != 45) return false;
    sweeps.push_back(std::move(rows));
  }
  for (std::size_t d = 1; d < 3; ++d) {
    for (std::size_t r = 0; r < 45; ++r) {
      const auto& tight = sweeps[d - 1][r];
      const auto& loose = sweeps[d][r];
      if (std::isnan(loose[1])) continue;  // gap vanished, trivially nested
      if (std::isnan(tight[1])) return false;
      if (loose[1] < tight[1] || loose[2] > tight[2]) return false;
    }
  }
  return true;
}

bool criterion_8() {
  TestRng rng(2028);
  for (int trial = 0; trial < 200; ++trial) {
    const lip::Pmf prior = lip_test::random_prior(rng, rng.uniform_index(3, 9));
    const std::size_t ell = rng.uniform_index(1, prior.size() - 1);
    const double eps = rng.uniform(0.0, 4.0);
    const lip::GroupingPlan plan = lip::group_plan(prior, ell);
    const lip::Channel wide = lip::grouped_channel(plan, eps);
    const lip::Channel reduced = lip::build_channel(plan.reduced, eps);
    for (std::size_t i = 0; i < prior.size(); ++i) {
      const std::size_t r = reduced.input_index(plan.map(prior.symbol(i)));
      for (std::size_t j = 0; j < plan.reduced.size(); ++j) {
        if (std::abs(wide.at(i, j) - reduced.at(r, j)) > 1e-12) return false;
      }
    }
    const double audited =
        lip::exact_min_delta(reduced, plan.reduced, eps).min_delta;
    if (std::abs(audited - lip::delta_bound_grouped(plan, eps)) > 1e-9) {
      return false;
    }
  }
  return true;
}

bool criterion_9() {
  const std::filesystem::path prior_path =
      std::filesystem::temp_directory_path() /
      ("lip_acceptance_" + std::to_string(::getpid()) + ".csv");
  lip::atomic_write_file(prior_path, lip::pmf_to_csv(five_atom_prior()));
  const std::string cmd = "sample --prior " + prior_path.string() +
                          " --epsilon 0 --n 1000000 --seed 99";
  const CliResult first = run_cli(cmd);
  const CliResult second = run_cli(cmd);
  std::filesystem::remove(prior_path);
  if (first.exit_code != 0 || first.out != second.out) return false;

  // At eps = 0 the release ignores the input, so inputs and outputs are
  // both plain prior draws.
  std::map<std::string, long> in_counts;
  std::map<std::string, long> out_counts;
  long n = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= first.out.size(); ++i) {
    if (i == first.out.size() || first.out[i] == '\n') {
      if (i > start) {
        const std::string line = first.out.substr(start, i - start);
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) return false;
        ++in_counts[line.substr(0, comma)];
        ++out_counts[line.substr(comma + 1)];
        ++n;
      }
      start = i + 1;
    }
  }
  if (n != 1000000) return false;
  const lip::Pmf prior = five_atom_prior();
  for (const lip::Atom& a : prior.atoms()) {
    const double sigma = std::sqrt(a.prob * (1.0 - a.prob) / n);
    const double in_freq =
        static_cast<double>(in_counts[a.symbol.label]) / n;
    const double out_freq =
        static_cast<double>(out_counts[a.symbol.label]) / n;
    if (std::abs(in_freq - a.prob) > 3.0 * sigma) return false;
    if (std::abs(out_freq - a.prob) > 3.0 * sigma) return false;
  }
  return true;
}

}  // namespace

int main() {
  struct Entry {
    int index;
    const char* label;
    bool ok;
  };
  bool marginal_ok = false;
  const bool audit_ok = criterion_4_5(&marginal_ok);
  const Entry entries[] = {
      {1, "pure threshold for the five atom example", criterion_1()},
      {2, "grouped thresholds and exact merged minima", criterion_2()},
      {3, "upper branch endpoints match truncated displays", criterion_3()},
      {4, "audited slack equals the closed form bound", audit_ok},
      {5, "output marginal preserves the prior", marginal_ok},
      {6, "region membership tracks the quadratic sign", criterion_6()},
      {7, "tradeoff curves and gap boundaries are ordered", criterion_7()},
      {8, "grouped channel factorizes and audits tight", criterion_8()},
      {9, "sampling is deterministic and unbiased", criterion_9()},
  };
  bool all_ok = true;
  for (const Entry& e : entries) {
    std::printf("[%d] %s %s\n", e.index, e.ok ? "PASS" : "FAIL", e.label);
    all_ok = all_ok && e.ok;
  }
  return all_ok ? 0 : 1;
}
