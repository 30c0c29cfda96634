#include "expmatch/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "expmatch/acceptance.hpp"
#include "expmatch/augment.hpp"
#include "expmatch/chain.hpp"
#include "expmatch/error.hpp"
#include "expmatch/graph.hpp"
#include "expmatch/greedy.hpp"
#include "expmatch/oracle.hpp"
#include "expmatch/spectral.hpp"

namespace expmatch {

namespace {

using nlohmann::ordered_json;

struct RunConfig {
  std::string subcommand;
  std::string family;
  int n = 0;
  int d = 0;
  std::string graph_path;
  std::optional<double> eps;
  double delta = 0.1;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  std::string out_path;
  std::optional<std::uint64_t> steps_override;
  std::vector<int> levels;
  std::optional<int> k;
  std::vector<int> criteria;
};

constexpr std::uint64_t kGraphStream = 0x6772617068ULL;

const std::vector<double> kExpanderThresholds = {1.0 / 11.0, 0.1, 0.2, 0.25, 1.0 / 3.0, 0.5, 0.75};

// Output helpers --------------------------------------------------------------

ordered_json graph_json(const Graph& g) {
  ordered_json j;
  j["num_vertices"] = g.num_vertices();
  j["num_edges"] = g.num_edges();
  j["hash"] = graph_fingerprint(g);
  return j;
}

ordered_json edges_json(std::span<const Edge> edges) {
  ordered_json j = ordered_json::array();
  for (const Edge& e : edges) j.push_back({e.u, e.v});
  return j;
}

ordered_json bigint_json(const BigInt& value) {
  if (value <= std::numeric_limits<std::uint64_t>::max()) return value.convert_to<std::uint64_t>();
  return value.str();
}

// Graph source ------------------------------------------------------------------

Graph build_graph(const RunConfig& c) {
  const bool from_family = !c.family.empty();
  const bool from_file = !c.graph_path.empty();
  if (from_family == from_file) throw ValidationError("give exactly one of --family or --graph");
  if (from_file) return load_graph(c.graph_path);
  if (c.family == "petersen") return build_petersen();
  if (c.n < 1) throw ValidationError("--n must be a positive integer (half the vertex count)");
  if (c.family == "complete") return build_complete(c.n);
  if (c.family == "cocktail") return build_cocktail_party(c.n);
  if (c.family == "random-regular") {
    if (c.d < 1) throw ValidationError("--family random-regular needs --d >= 1");
    return build_random_regular(c.n, c.d, derive_seed(c.seed, kGraphStream));
  }
  throw ValidationError("unknown family '" + c.family + "'; use complete, cocktail, random-regular or petersen");
}

void check_common(const RunConfig& c) {
  if (c.eps && !(*c.eps > 0.0 && *c.eps <= 1.0)) throw ValidationError("--eps must lie in (0, 1]");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ValidationError("--delta must lie in (0, 1)");
  if (c.budget && *c.budget == 0) throw ValidationError("--budget must be positive");
  if (c.steps_override && *c.steps_override == 0) throw ValidationError("--steps-override must be positive");
}

/// --eps if given, else sigma2 of the graph.
double resolve_eps(const RunConfig& c, const Graph& g) {
  if (c.eps) return *c.eps;
  const double s = spectrum(g).sigma2;
  if (!(s > 0.0)) throw ValidationError("sigma2 is 0; pass --eps explicitly");
  return std::min(s, 1.0);
}

void emit(const RunConfig& c, const ordered_json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (!c.out_path.empty()) {
    std::ofstream file(c.out_path);
    if (!file) throw ValidationError("cannot write report to '" + c.out_path + "'");
    file << text;
    if (!file) throw ValidationError("failed writing report to '" + c.out_path + "'");
  }
  out << text;
}

// Subcommands -------------------------------------------------------------------

int cmd_gen(const RunConfig& c, std::ostream& out) {
  const Graph g = build_graph(c);
  ordered_json report;
  report["graph"] = graph_json(g);
  if (c.out_path.empty()) {
    report["edges"] = edges_json(g.edges());
  } else {
    save_graph(g, c.out_path);
    report["path"] = c.out_path;
  }
  out << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_spectral(const RunConfig& c, std::ostream& out) {
  const Graph g = build_graph(c);
  const SpectralSummary s = spectrum(g);
  ordered_json report;
  report["graph"] = graph_json(g);
  report["sigma2"] = s.sigma2;
  report["lambda_min"] = s.lambda_min();
  report["lambda2"] = s.lambda2();
  report["lambda1"] = s.lambda1();
  report["degree"] = s.degree ? ordered_json(*s.degree) : ordered_json(nullptr);
  ordered_json thresholds = ordered_json::array();
  std::vector<double> grid = kExpanderThresholds;
  if (c.eps) grid.push_back(*c.eps);
  std::sort(grid.begin(), grid.end());
  for (double eps : grid) {
    if (eps < 1.0 && is_eps_expander(s, eps)) thresholds.push_back(eps);
  }
  report["is_expander_at"] = thresholds;
  emit(c, report, out);
  return kExitOk;
}

int cmd_sample(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Graph g = build_graph(c);
  const double eps = resolve_eps(c, g);
  SampleOptions opts;
  opts.steps_override = c.steps_override;
  opts.max_blocks = c.budget;
  err << "sample: " << g.num_vertices() << " vertices, eps " << eps << ", delta " << c.delta << "\n";
  const SampleResult r = sample_perfect_matching(g, eps, c.delta, c.seed, opts);
  ordered_json report;
  report["graph"] = graph_json(g);
  report["eps"] = eps;
  report["delta"] = c.delta;
  report["seed"] = c.seed;
  report["matching"] = edges_json(r.matching.edges());
  report["schedule"] = r.schedule;
  report["steps"] = r.steps;
  emit(c, report, out);
  return kExitOk;
}

int cmd_count(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Graph g = build_graph(c);
  const double eps = resolve_eps(c, g);
  CountOptions opts;
  opts.steps_override = c.steps_override;
  opts.levels = c.levels;
  if (c.budget) {
    opts.max_samples_per_level = *c.budget;
    opts.min_samples_per_level = std::min(opts.min_samples_per_level, *c.budget);
  }
  err << "count: " << g.num_vertices() << " vertices, eps " << eps << ", delta " << c.delta << "\n";
  const CountResult r = count_perfect_matchings(g, eps, c.delta, c.seed, opts);
  ordered_json report;
  report["graph"] = graph_json(g);
  report["eps"] = eps;
  report["delta"] = c.delta;
  report["seed"] = c.seed;
  report["estimate"] = r.estimate ? ordered_json(*r.estimate) : ordered_json(nullptr);
  ordered_json ratios = ordered_json::array();
  ordered_json levels = ordered_json::array();
  for (const RatioEstimate& e : r.per_level) {
    ratios.push_back(e.ratio);
    levels.push_back({{"level", e.level},
                      {"ratio", e.ratio},
                      {"lower_count", e.lower_count},
                      {"upper_count", e.upper_count},
                      {"steps", e.steps}});
  }
  report["per_level_ratios"] = ratios;
  report["levels"] = levels;
  report["steps"] = r.steps;
  if (!r.diagnostic.empty()) report["diagnostic"] = r.diagnostic;
  emit(c, report, out);
  return kExitOk;
}

int cmd_augment_demo(const RunConfig& c, std::ostream& out) {
  const Graph g = build_graph(c);
  const double eps = resolve_eps(c, g);
  const int n = g.half_order();
  const int k = c.k.value_or(n - 1);
  if (k < 0 || k >= n) throw ValidationError("--k must lie in [0, n-1] for augment-demo");

  Matching m(g.num_vertices());
  if (g.num_vertices() <= kOracleVertexCap) {
    Rng rng = make_rng(c.seed, 3);
    m = exact_uniform_sample(g, k, rng);
  } else {
    auto start = starting_matching(g, k, eps, derive_seed(c.seed, 3));
    if (!start) throw ValidationError("graph has no " + std::to_string(k) + "-matching");
    m = *start;
  }
  const int retries = c.budget ? static_cast<int>(std::min<std::uint64_t>(*c.budget, 1'000'000))
                               : default_max_retries();
  const AugmentResult r = find_augmenting_path(g, m, eps, derive_seed(c.seed, 4), retries);

  std::ostringstream lines;
  for (const RetryTrace& t : r.retries) {
    ordered_json j;
    j["retry"] = t.retry;
    j["seed"] = t.seed;
    j["left_layer_sizes"] = t.left_layer_sizes;
    j["right_layer_sizes"] = t.right_layer_sizes;
    j["left_shortfall"] = t.left_shortfall;
    j["right_shortfall"] = t.right_shortfall;
    j["outcome"] = t.outcome;
    j["path_length"] = t.path_length;
    lines << j.dump() << "\n";
  }
  ordered_json summary;
  summary["graph"] = graph_json(g);
  summary["eps"] = eps;
  summary["matching"] = edges_json(m.edges());
  summary["rho"] = r.rho.rho;
  summary["t"] = r.rho.t;
  summary["alpha"] = r.rho.alpha;
  summary["hypothesis_violated"] = r.rho.hypothesis_violated;
  summary["found"] = r.found();
  if (r.path) {
    summary["path"] = *r.path;
    summary["path_length"] = r.path->size() - 1;
    summary["valid"] = static_cast<bool>(is_augmenting_path(g, m, *r.path));
  } else {
    summary["path"] = nullptr;
  }
  lines << summary.dump() << "\n";
  if (!c.out_path.empty()) {
    std::ofstream file(c.out_path);
    if (!file) throw ValidationError("cannot write report to '" + c.out_path + "'");
    file << lines.str();
  }
  out << lines.str();
  return kExitOk;
}

int cmd_lower_bound(const RunConfig& c, std::ostream& out) {
  const Graph g = build_graph(c);
  const auto d = g.regular_degree();
  if (!d) throw ValidationError("lower-bound needs a regular graph");
  const double eps = resolve_eps(c, g);
  if (!(eps < 1.0)) throw ValidationError("lower-bound needs eps < 1");
  const int n = g.half_order();
  const LowerBoundReport b = evaluate_lower_bounds(n, *d, eps);
  const int k = c.k.value_or(b.k);
  if (k < 0 || k > n) throw ValidationError("--k must lie in [0, n]");
  const GreedyCount gc = count_distinct_greedy(g, k, eps, c.budget.value_or(10'000'000), c.seed);

  ordered_json report;
  report["graph"] = graph_json(g);
  report["n"] = n;
  report["d"] = *d;
  report["eps"] = eps;
  report["k"] = k;
  report["bounds"] = gc.bounds;
  report["num_sequences"] = gc.num_sequences;
  report["distinct"] = gc.distinct;
  report["sampled"] = gc.sampled;
  report["injective"] = gc.injective();
  report["log_bound_meps"] = b.log_meps;
  report["log_bound_meps_proof"] = b.log_meps_proof;
  report["log_bound_ratio"] = b.log_ratio;
  report["log_bound_pm"] = b.log_pm;
  report["pm_domain_ok"] = b.pm_domain_ok;
  if (g.num_vertices() <= kOracleVertexCap) {
    const MatchingCensus cen = census(g);
    report["oracle_m_k"] = bigint_json(cen.at(static_cast<std::size_t>(k)));
    report["oracle_m_n"] = bigint_json(cen.at(static_cast<std::size_t>(n)));
  } else {
    report["oracle_m_k"] = nullptr;
    report["oracle_m_n"] = nullptr;
  }
  emit(c, report, out);
  return kExitOk;
}

int cmd_counterexample(const RunConfig& c, std::ostream& out) {
  const Graph g = build_graph(c);
  const Graph h = pendant_augment(g);
  const PendantSpectralReport s = pendant_spectral_check(g);
  ordered_json report;
  report["graph"] = graph_json(g);
  report["augmented"] = graph_json(h);
  if (h.num_vertices() <= kOracleVertexCap) {
    const MatchingCensus cen = census(h);
    report["has_pm"] = cen.at(static_cast<std::size_t>(h.half_order())) > 0;
    report["matching_number"] = cen.matching_number();
  } else {
    report["has_pm"] = nullptr;
  }
  report["sigma2_base"] = s.sigma2_base;
  report["sigma2_augmented"] = s.sigma2_augmented;
  report["sigma2_bound"] = s.sigma2_bound;
  report["sigma2_bound_ok"] = s.sigma2_bound_ok;
  report["frobenius_sq"] = s.frobenius_sq;
  report["frobenius_within_5_over_d"] = s.frobenius_within_5_over_d;
  report["hoffman_wielandt_ok"] = s.hoffman_wielandt_ok;
  emit(c, report, out);
  return kExitOk;
}

int cmd_oracle(const RunConfig& c, std::ostream& out) {
  const Graph g = build_graph(c);
  const int cap = c.budget ? static_cast<int>(std::min<std::uint64_t>(*c.budget, 64)) : kOracleVertexCap;
  const MatchingCensus cen = census(g, cap);
  ordered_json report;
  report["graph"] = graph_json(g);
  ordered_json counts = ordered_json::array();
  for (const BigInt& v : cen.counts) counts.push_back(bigint_json(v));
  report["census"] = counts;
  report["matching_number"] = cen.matching_number();
  emit(c, report, out);
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  for (int id : c.criteria) {
    if (id < 1 || id > kNumCriteria) throw ValidationError("--criteria ids must lie in [1, " + std::to_string(kNumCriteria) + "]");
  }
  AcceptanceOptions opts;
  opts.only = c.criteria;
  opts.progress = &err;
  const auto results = run_acceptance(opts);
  ordered_json report;
  ordered_json list = ordered_json::array();
  bool all = true;
  for (const CriterionResult& r : results) {
    err << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << r.seconds << " s): " << r.detail
        << "\n";
    list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  report["criteria"] = list;
  report["passed"] = all;
  emit(c, report, out);
  return all ? kExitOk : kExitValidation;
}

// Parsing ---------------------------------------------------------------------

void add_graph_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--family", c.family, "Graph family: complete, cocktail, random-regular, petersen");
  sub->add_option("--n", c.n, "Half the vertex count");
  sub->add_option("--d", c.d, "Degree for random-regular");
  sub->add_option("--graph", c.graph_path, "Edge-list file");
  sub->add_option("--seed", c.seed, "Global seed");
  sub->add_option("--out", c.out_path, "Also write the report (gen: the graph) to this path");
}

void add_eps(CLI::App* sub, RunConfig& c) {
  sub->add_option("--eps", c.eps, "Expansion parameter; defaults to sigma2 of the graph");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Sampling and counting perfect matchings in spectral expanders", "expmatch"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a graph; writes the edge list to --out");
  add_graph_flags(gen, c);

  auto* spectral = app.add_subcommand("spectral", "Normalized-adjacency spectrum summary");
  add_graph_flags(spectral, c);
  add_eps(spectral, c);

  auto* sample = app.add_subcommand("sample", "Sample a perfect matching with the lazy matchings chain");
  add_graph_flags(sample, c);
  add_eps(sample, c);
  sample->add_option("--delta", c.delta, "Accuracy parameter in (0, 1)");
  sample->add_option("--steps-override", c.steps_override, "Steps per block instead of the schedule");
  sample->add_option("--budget", c.budget, "Maximum blocks of schedule steps (default 50*(1+R), R the ratio bound)");

  auto* count = app.add_subcommand("count", "Estimate the number of perfect matchings");
  add_graph_flags(count, c);
  add_eps(count, c);
  count->add_option("--delta", c.delta, "Accuracy parameter in (0, 1)");
  count->add_option("--steps-override", c.steps_override, "Samples per level instead of the formula");
  count->add_option("--levels", c.levels, "Only these levels k (estimate is then null)")->delimiter(',');
  count->add_option("--budget", c.budget, "Maximum samples per level (default 4000000)");

  auto* demo = app.add_subcommand("augment-demo", "Trace the randomized-bipartition path search");
  add_graph_flags(demo, c);
  add_eps(demo, c);
  demo->add_option("--k", c.k, "Size of the random starting matching (default n-1)");
  demo->add_option("--budget", c.budget, "Maximum retries (default 20)");

  auto* lower = app.add_subcommand("lower-bound", "Greedy valid-sequence count and closed-form bounds");
  add_graph_flags(lower, c);
  add_eps(lower, c);
  lower->add_option("--k", c.k, "Sequence length (default floor((1-eps)n))");
  lower->add_option("--budget", c.budget, "Maximum sequences to construct (default 10000000)");

  auto* counter = app.add_subcommand("counterexample", "Pendant augmentation with no perfect matching");
  add_graph_flags(counter, c);

  auto* oracle = app.add_subcommand("oracle", "Exact matching census m(0..n)");
  add_graph_flags(oracle, c);
  oracle->add_option("--budget", c.budget, "Vertex cap for the exhaustive count (default 32, max 64)");

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--criteria", c.criteria, "Only these criterion ids")->delimiter(',');
  verify->add_option("--out", c.out_path, "Also write the report to this path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  c.subcommand = app.get_subcommands().front()->get_name();
  try {
    check_common(c);
    if (c.subcommand == "gen") return cmd_gen(c, out);
    if (c.subcommand == "spectral") return cmd_spectral(c, out);
    if (c.subcommand == "sample") return cmd_sample(c, out, err);
    if (c.subcommand == "count") return cmd_count(c, out, err);
    if (c.subcommand == "augment-demo") return cmd_augment_demo(c, out);
    if (c.subcommand == "lower-bound") return cmd_lower_bound(c, out);
    if (c.subcommand == "counterexample") return cmd_counterexample(c, out);
    if (c.subcommand == "oracle") return cmd_oracle(c, out);
    if (c.subcommand == "verify") return cmd_verify(c, out, err);
    err << "error: unknown subcommand '" << c.subcommand << "'\n";
    return kExitValidation;
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace expmatch
