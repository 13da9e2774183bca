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

// Command line front end for the lip library.
//
// Exit codes: 0 success, 1 negative verdict (infeasible budget or failed
// audit), 2 malformed input or usage, 3 out of domain arguments.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lip/lip.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;

void write_out(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  lip::atomic_write_file(out_path, content);
}

std::string dump(const nlohmann::ordered_json& obj) {
  return obj.dump(2) + "\n";
}

double jnum(double value) { return lip::json_number(value); }

// "lo:hi:step" with plain decimal fields.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ':') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 3) {
    throw lip::ParseError("grid: expected lo:hi:step, got '" + text + "'");
  }
  double values[3];
  for (int i = 0; i < 3; ++i) {
    const char* begin = parts[i].c_str();
    char* end = nullptr;
    values[i] = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
      throw lip::ParseError("grid: bad number '" + parts[i] + "'");
    }
  }
  return lip::make_grid(values[0], values[1], values[2]);
}

struct CommonArgs {
  std::string prior_path;
  std::string out_path;
  double epsilon = 0.0;
  double delta = 0.0;
};

int run_feasible(const CommonArgs& args, bool have_epsilon) {
  const lip::Pmf prior = lip::load_pmf(args.prior_path);
  const double p = lip::p_min(prior);

  nlohmann::ordered_json report;
  report["p_min"] = jnum(p);
  report["min_epsilon_pure"] = jnum(lip::min_epsilon_pure(p));
  if (!have_epsilon) {
    write_out(args.out_path, dump(report));
    return kExitOk;
  }

  const lip::PrivacyParams params(args.epsilon, args.delta);
  const double threshold = lip::pmin_threshold(params.epsilon, params.delta);
  const bool ok = p >= threshold;
  report["epsilon"] = jnum(params.epsilon);
  report["delta"] = jnum(params.delta);
  report["delta_min"] = jnum(lip::delta_bound(p, params.epsilon));
  report["pmin_threshold"] = jnum(threshold);
  report["feasible"] = ok;
  if (!ok) {
    if (const auto ell = lip::min_ell(prior, params)) {
      report["suggested_ell"] = *ell;
    }
  }
  write_out(args.out_path, dump(report));
  return ok ? kExitOk : kExitVerdict;
}

int run_region(double p, double delta, const std::string& out_path) {
  const lip::EpsilonRegion region = lip::epsilon_range(p, delta);
  nlohmann::ordered_json report;
  report["case"] = region.intervals.size() == 2 ? 1 : 2;
  report["includes_zero"] = region.includes_zero;
  nlohmann::ordered_json intervals = nlohmann::ordered_json::array();
  for (const lip::EpsilonInterval& iv : region.intervals) {
    nlohmann::ordered_json pair = nlohmann::ordered_json::array();
    pair.push_back(jnum(iv.lo));
    if (std::isinf(iv.hi)) {
      pair.push_back(nullptr);
    } else {
      pair.push_back(jnum(iv.hi));
    }
    intervals.push_back(std::move(pair));
  }
  report["intervals"] = std::move(intervals);
  write_out(out_path, dump(report));
  return kExitOk;
}

int run_tradeoff_curve(double p, const std::vector<double>& grid,
                       const std::string& out_path) {
  std::string csv = "epsilon,delta_min,p_min\n";
  for (const lip::TradeoffPoint& pt : lip::tradeoff_curve(p, grid)) {
    csv += lip::format_double(pt.epsilon);
    csv += ',';
    csv += lip::format_double(pt.delta_min);
    csv += ',';
    csv += lip::format_double(pt.p_min);
    csv += '\n';
  }
  write_out(out_path, csv);
  return kExitOk;
}

int run_tradeoff_boundary(const std::vector<double>& pmin_grid, double delta,
                          const std::string& out_path) {
  std::string csv = "p_min,eps_low_branch_hi,eps_high_branch_lo\n";
  for (const lip::BoundaryPoint& pt :
       lip::infeasible_region_boundary(pmin_grid, delta)) {
    csv += lip::format_double(pt.p_min);
    csv += ',';
    csv += lip::format_double(pt.gap.low_branch_hi);
    csv += ',';
    csv += lip::format_double(pt.gap.high_branch_lo);
    csv += '\n';
  }
  write_out(out_path, csv);
  return kExitOk;
}

int run_mechanize(const CommonArgs& args, const std::string& format) {
  const lip::Pmf prior = lip::load_pmf(args.prior_path);
  const lip::Channel channel = lip::build_channel(prior, args.epsilon);
  if (format == "json") {
    write_out(args.out_path, dump(lip::channel_to_json(channel)));
  } else {
    write_out(args.out_path, lip::channel_to_csv(channel));
  }
  return kExitOk;
}

int run_sample(const CommonArgs& args, std::optional<std::size_t> ell,
               std::uint64_t seed, std::uint64_t n) {
  const lip::Pmf prior = lip::load_pmf(args.prior_path);
  const lip::Channel channel =
      ell ? lip::grouped_channel(lip::group_plan(prior, *ell), args.epsilon)
          : lip::build_channel(prior, args.epsilon);
  std::vector<double> prior_probs;
  prior_probs.reserve(prior.size());
  for (const lip::Atom& a : prior.atoms()) prior_probs.push_back(a.prob);

  std::string csv;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::size_t x = lip::inverse_cdf_index(
        prior_probs, lip::uniform01(seed, 2 * i));
    const std::size_t y = lip::inverse_cdf_index(
        channel.row(x), lip::uniform01(seed, 2 * i + 1));
    csv += prior.symbol(x).label;
    csv += ',';
    csv += channel.outputs()[y].label;
    csv += '\n';
  }
  write_out(args.out_path, csv);
  return kExitOk;
}

nlohmann::ordered_json plan_to_json(const lip::GroupingPlan& plan) {
  nlohmann::ordered_json report;
  report["ell"] = plan.ell;
  nlohmann::ordered_json members = nlohmann::ordered_json::array();
  for (const lip::Symbol& m : plan.members) members.push_back(m.label);
  report["members"] = std::move(members);
  report["grouped_label"] = plan.grouped_symbol.label;
  report["reduced"] = lip::pmf_to_json(plan.reduced);
  return report;
}

int run_group(const CommonArgs& args, std::optional<std::size_t> ell) {
  const lip::Pmf prior = lip::load_pmf(args.prior_path);
  std::size_t chosen = 0;
  if (ell) {
    chosen = *ell;
  } else {
    const lip::PrivacyParams params(args.epsilon, args.delta);
    const auto found = lip::min_ell(prior, params);
    if (!found) {
      std::fprintf(stderr,
                   "group: no merge of the %zu smallest atoms reaches the "
                   "threshold for epsilon=%s delta=%s\n",
                   prior.size() - 1, lip::format_double(args.epsilon).c_str(),
                   lip::format_double(args.delta).c_str());
      return kExitVerdict;
    }
    chosen = *found;
  }
  const lip::GroupingPlan plan = lip::group_plan(prior, chosen);
  write_out(args.out_path, dump(plan_to_json(plan)));
  return kExitOk;
}

int run_audit(const CommonArgs& args, const std::string& channel_path) {
  const lip::Pmf prior = lip::load_pmf(args.prior_path);
  const lip::PrivacyParams params(args.epsilon, args.delta);
  const lip::Channel channel = channel_path.empty()
                                   ? lip::build_channel(prior, params.epsilon)
                                   : lip::load_channel(channel_path);
  const lip::AuditReport report =
      lip::exact_min_delta(channel, prior, params.epsilon, params.delta);
  const double eps_pure = lip::min_epsilon_empirical(channel, prior);

  nlohmann::ordered_json out;
  out["epsilon"] = jnum(report.epsilon);
  out["delta"] = jnum(report.requested_delta);
  out["min_delta"] = jnum(report.min_delta);
  if (std::isinf(eps_pure)) {
    out["min_epsilon_pure"] = nullptr;
  } else {
    out["min_epsilon_pure"] = jnum(eps_pure);
  }
  out["worst_input"] = report.worst_input.label;
  out["worst_side"] = report.worst_side == lip::Side::kLower ? "lower"
                                                             : "upper";
  nlohmann::ordered_json event = nlohmann::ordered_json::array();
  for (const lip::Symbol& y : report.worst_event) event.push_back(y.label);
  out["worst_event"] = std::move(event);
  out["pass"] = report.pass;
  write_out(args.out_path, dump(out));
  return report.pass ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context aware randomized response toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  double pmin_arg = 0.0;
  std::string grid_text;
  std::string format = "csv";
  std::string channel_path;
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  std::size_t ell_arg = 0;
  bool boundary = false;

  CLI::App* feasible = app.add_subcommand(
      "feasible", "Check whether a budget is achievable for a prior");
  feasible->add_option("--prior", args.prior_path, "Prior file (csv or json)")
      ->required();
  CLI::Option* feasible_eps = feasible->add_option(
      "--epsilon", args.epsilon, "Privacy parameter epsilon");
  feasible->add_option("--delta", args.delta, "Privacy parameter delta")
      ->needs(feasible_eps);
  feasible->add_option("--out", args.out_path, "Output file (default stdout)");

  CLI::App* region = app.add_subcommand(
      "region", "Feasible epsilon intervals for fixed delta");
  CLI::Option* region_pmin =
      region->add_option("--pmin", pmin_arg, "Minimum prior mass");
  CLI::Option* region_prior =
      region->add_option("--prior", args.prior_path, "Prior file");
  region_pmin->excludes(region_prior);
  region->add_option("--delta", args.delta, "Privacy parameter delta");
  region->add_option("--out", args.out_path, "Output file (default stdout)");

  CLI::App* tradeoff = app.add_subcommand(
      "tradeoff", "Sweep the epsilon-delta frontier");
  CLI::Option* tradeoff_pmin =
      tradeoff->add_option("--pmin", pmin_arg, "Minimum prior mass");
  CLI::Option* tradeoff_prior =
      tradeoff->add_option("--prior", args.prior_path, "Prior file");
  tradeoff_pmin->excludes(tradeoff_prior);
  tradeoff->add_option("--grid", grid_text, "Sweep grid lo:hi:step")
      ->required();
  tradeoff->add_flag("--boundary", boundary,
                     "Sweep p_min instead and emit the infeasible gap ends");
  tradeoff->add_option("--delta", args.delta,
                       "Privacy parameter delta (boundary mode)");
  tradeoff->add_option("--out", args.out_path, "Output file (default stdout)");

  CLI::App* mechanize = app.add_subcommand(
      "mechanize", "Emit the release channel for a prior and epsilon");
  mechanize->add_option("--prior", args.prior_path, "Prior file")->required();
  mechanize->add_option("--epsilon", args.epsilon, "Privacy parameter epsilon")
      ->required();
  mechanize->add_option("--format", format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  mechanize->add_option("--out", args.out_path, "Output file (default stdout)");

  CLI::App* sample = app.add_subcommand(
      "sample", "Draw released pairs input,output");
  sample->add_option("--prior", args.prior_path, "Prior file")->required();
  sample->add_option("--epsilon", args.epsilon, "Privacy parameter epsilon")
      ->required();
  sample->add_option("--n", n, "Number of draws")->required();
  sample->add_option("--seed", seed, "Deterministic seed");
  CLI::Option* sample_ell = sample->add_option(
      "--ell", ell_arg, "Sample through the grouped channel for this ell");
  sample->add_option("--out", args.out_path, "Output file (default stdout)");

  CLI::App* group = app.add_subcommand(
      "group", "Plan a merge of the smallest atoms");
  group->add_option("--prior", args.prior_path, "Prior file")->required();
  CLI::Option* group_ell =
      group->add_option("--ell", ell_arg, "Merge the ell smallest atoms");
  CLI::Option* group_eps = group->add_option(
      "--epsilon", args.epsilon, "Pick the smallest ell feasible at epsilon");
  group_ell->excludes(group_eps);
  group->add_option("--delta", args.delta, "Privacy parameter delta")
      ->needs(group_eps);
  group->add_option("--out", args.out_path, "Output file (default stdout)");

  CLI::App* audit = app.add_subcommand(
      "audit", "Exact smallest delta for a channel at epsilon");
  audit->add_option("--prior", args.prior_path, "Prior file")->required();
  audit->add_option("--epsilon", args.epsilon, "Privacy parameter epsilon")
      ->required();
  audit->add_option("--delta", args.delta, "Requested delta to audit against");
  audit->add_option("--channel", channel_path,
                    "Channel file to audit (default: built from the prior)");
  audit->add_option("--out", args.out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (feasible->parsed()) {
      return run_feasible(args, feasible_eps->count() > 0);
    }
    if (region->parsed()) {
      if (region_pmin->count() == 0 && region_prior->count() == 0) {
        std::fprintf(stderr, "region: need --pmin or --prior\n");
        return kExitParse;
      }
      const double p = region_pmin->count() > 0
                           ? pmin_arg
                           : lip::p_min(lip::load_pmf(args.prior_path));
      return run_region(p, args.delta, args.out_path);
    }
    if (tradeoff->parsed()) {
      const std::vector<double> grid = parse_grid(grid_text);
      if (boundary) {
        return run_tradeoff_boundary(grid, args.delta, args.out_path);
      }
      if (tradeoff_pmin->count() == 0 && tradeoff_prior->count() == 0) {
        std::fprintf(stderr, "tradeoff: need --pmin or --prior\n");
        return kExitParse;
      }
      const double p = tradeoff_pmin->count() > 0
                           ? pmin_arg
                           : lip::p_min(lip::load_pmf(args.prior_path));
      return run_tradeoff_curve(p, grid, args.out_path);
    }
    if (mechanize->parsed()) return run_mechanize(args, format);
    if (sample->parsed()) {
      std::optional<std::size_t> ell;
      if (sample_ell->count() > 0) ell = ell_arg;
      return run_sample(args, ell, seed, n);
    }
    if (group->parsed()) {
      if (group_ell->count() == 0 && group_eps->count() == 0) {
        std::fprintf(stderr, "group: need --ell or --epsilon\n");
        return kExitParse;
      }
      std::optional<std::size_t> ell;
      if (group_ell->count() > 0) ell = ell_arg;
      return run_group(args, ell);
    }
    if (audit->parsed()) return run_audit(args, channel_path);
  } catch (const lip::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  }
  return kExitOk;
}
