#include "expmatch/acceptance.hpp"

#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <unistd.h>

#include "expmatch/augment.hpp"
#include "expmatch/chain.hpp"
#include "expmatch/cli.hpp"
#include "expmatch/graph.hpp"
#include "expmatch/greedy.hpp"
#include "expmatch/oracle.hpp"
#include "expmatch/spectral.hpp"

namespace expmatch {

namespace {

constexpr std::uint64_t kSuiteSeed = 20240611;

/// Collects failures; the criterion passes iff none were recorded.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool passed() const { return failed_ == 0; }
  std::string detail() const {
    std::ostringstream os;
    os << checks_ - failed_ << "/" << checks_ << " checks";
    if (!notes_.empty()) os << "; " << notes_;
    for (const auto& f : failures_) os << "; FAILED " << f;
    return os.str();
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string fmt(double x, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << x;
  return os.str();
}

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

VertexSet random_subset(int num_vertices, Rng& rng) {
  std::vector<Vertex> all(static_cast<std::size_t>(num_vertices));
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  const auto size = std::uniform_int_distribution<int>(1, num_vertices)(rng);
  all.resize(static_cast<std::size_t>(size));
  return make_vertex_set(std::move(all));
}

struct NamedGraph {
  std::string name;
  Graph graph;
};

// 1 -----------------------------------------------------------------------------
void oracle_correctness(Checker& c) {
  for (int n = 2; n <= 7; ++n) {
    const MatchingCensus cen = census(build_complete(n));
    for (int k = 0; k <= n; ++k) {
      const BigInt expected = factorial(2 * n) / (BigInt(1) << k) / factorial(k) / factorial(2 * n - 2 * k);
      c.expect(cen.at(static_cast<std::size_t>(k)) == expected,
               "m_" + std::to_string(k) + "(K" + std::to_string(2 * n) + ") = " +
                   cen.at(static_cast<std::size_t>(k)).str() + " != " + expected.str());
    }
  }
}

// 2 -----------------------------------------------------------------------------
void spectral_correctness(Checker& c) {
  const double k12 = spectrum(build_complete(6)).sigma2;
  c.expect(std::abs(k12 - 1.0 / 11.0) <= 1e-8, "sigma2(K12) = " + fmt(k12, 17));
  const double cp = spectrum(build_cocktail_party(6)).sigma2;
  c.expect(std::abs(cp - 0.2) <= 1e-8, "sigma2(cocktail 6) = " + fmt(cp, 17));
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 5 + i;
    const int d = 3 + i % 4;
    const Graph g = build_random_regular(n, d, derive_seed(kSuiteSeed, 200 + static_cast<std::uint64_t>(i)));
    const auto ev = spectrum(g).eigenvalues;
    const double trace = std::accumulate(ev.begin(), ev.end(), 0.0);
    worst = std::max(worst, std::abs(trace));
    c.expect(std::abs(trace) <= 1e-8, "trace on random " + std::to_string(d) + "-regular n=" + std::to_string(n) +
                                          " is " + fmt(trace));
  }
  c.note("sigma2(K12) err " + fmt(std::abs(k12 - 1.0 / 11.0), 3) + ", max |trace| " + fmt(worst, 3));
}

// 3 -----------------------------------------------------------------------------
void mixing_and_tanner(Checker& c) {
  const std::vector<NamedGraph> graphs = {{"K12", build_complete(6)},
                                          {"K14", build_complete(7)},
                                          {"cocktail6", build_cocktail_party(6)},
                                          {"cocktail7", build_cocktail_party(7)}};
  Rng rng = make_rng(kSuiteSeed, 3);
  double min_eml = INFINITY;
  std::size_t corollary_draws = 0;
  for (const auto& [name, g] : graphs) {
    const double s2 = spectrum(g).sigma2;
    const double eps_n = s2 * g.half_order();
    for (int draw = 0; draw < 1000; ++draw) {
      const VertexSet s = random_subset(g.num_vertices(), rng);
      const VertexSet t = random_subset(g.num_vertices(), rng);
      const double slack = mixing_lemma_slack(g, s2, s, t);
      min_eml = std::min(min_eml, slack);
      c.expect(slack >= -kBoundSlack, name + " mixing slack " + fmt(slack));

      const VertexSet u = random_subset(g.num_vertices(), rng);
      const TannerCheck tc = tanner_lower_bound(g, s2, u);
      c.expect(tc.holds(), name + " Tanner |S|=" + std::to_string(u.size()));
      // Small sets exercise the corollary, which random sizes rarely hit.
      std::vector<Vertex> all(static_cast<std::size_t>(g.num_vertices()));
      std::iota(all.begin(), all.end(), 0);
      std::shuffle(all.begin(), all.end(), rng);
      const int small_max = std::max(1, static_cast<int>(std::floor(2.0 * eps_n + 1e-9)));
      all.resize(static_cast<std::size_t>(std::uniform_int_distribution<int>(1, small_max)(rng)));
      const TannerCheck small = tanner_lower_bound(g, s2, make_vertex_set(all));
      c.expect(small.holds() && small.corollary_holds() && small.corollary_holds_exclusive(), name + " Tanner corollary |S|=" + std::to_string(all.size()));
      corollary_draws += small.corollary_applies ? 1 : 0;
    }
  }
  c.note("min mixing slack " + fmt(min_eml) + ", corollary draws " + std::to_string(corollary_draws));
}

// 4 -----------------------------------------------------------------------------
void short_paths(Checker& c) {
  for (int n : {6, 7}) {
    const Graph g = build_complete(n);
    const double eps = spectrum(g).sigma2;
    c.expect(eps <= 1.0 / 11.0 + kBoundSlack, "sigma2 above 1/11");
    Rng rng = make_rng(kSuiteSeed, 40 + static_cast<std::uint64_t>(n));
    std::uint64_t min_margin = UINT64_MAX;
    for (int k = 0; k < n; ++k) {
      const int rho = rho_bound(eps, n, k).rho;
      const auto need = static_cast<std::uint64_t>((n - k + 1) / 2);
      for (int i = 0; i < 50; ++i) {
        const Matching m = exact_uniform_sample(g, k, rng);
        const ShortPathCount spc = count_short_augmenting_paths(g, m, rho);
        c.expect(!spc.partial && spc.count >= need, "K" + std::to_string(2 * n) + " k=" + std::to_string(k) +
                                                        " count " + std::to_string(spc.count) + " < " +
                                                        std::to_string(need));
        min_margin = std::min(min_margin, spc.count - std::min(spc.count, need));
      }
    }
    c.note("K" + std::to_string(2 * n) + " min surplus " + std::to_string(min_margin));
  }
}

// 5 -----------------------------------------------------------------------------
void ratio_bounds(Checker& c) {
  const Graph g = build_complete(6);
  const MatchingCensus cen = census(g);
  const int n = 6;
  const int d = 11;
  const double eps = 1.0 / 11.0;
  for (int k = 0; k < n; ++k) {
    // m(k)/m(k+1) <= 2(k+1)/(n-k) * d^((rho-1)/2), cross-multiplied in integers.
    const int rho = rho_bound(eps, n, k).rho;
    BigInt power = 1;
    for (int i = 0; i < (rho - 1) / 2; ++i) power *= d;
    const BigInt lhs = cen.at(static_cast<std::size_t>(k)) * (n - k);
    const BigInt rhs = 2 * (k + 1) * power * cen.at(static_cast<std::size_t>(k + 1));
    c.expect(lhs <= rhs, "k=" + std::to_string(k) + " ratio exceeds bound");
    const double bound = ratio_bound(eps, n, k, d);
    const BigInt exact_bound = 2 * (k + 1) * power;
    c.expect(bound * (n - k) == exact_bound.convert_to<double>(), "k=" + std::to_string(k) + " closed form mismatch");
  }
  const BigInt m5 = cen.at(5);
  const BigInt m6 = cen.at(6);
  c.expect(m5 == 6 * m6, "m(5)/m(6) != 6 (" + m5.str() + "/" + m6.str() + ")");
  c.expect(ratio_bound(eps, n, 5, d) == 1452.0, "ratio_bound(1/11, 6, 5, 11) = " + fmt(ratio_bound(eps, n, 5, d)));
  c.note("m(5)/m(6) = 6, bound " + fmt(ratio_bound(eps, n, 5, d)));
}

// 6 -----------------------------------------------------------------------------
void layered_algorithm(Checker& c) {
  for (int n : {6, 7}) {
    const Graph g = build_complete(n);
    const double eps = spectrum(g).sigma2;
    Rng rng = make_rng(kSuiteSeed, 60 + static_cast<std::uint64_t>(n));
    int max_retries_used = 0;
    for (int i = 0; i < 500; ++i) {
      const int k = std::uniform_int_distribution<int>(0, n - 1)(rng);
      const Matching m = exact_uniform_sample(g, k, rng);
      const AugmentResult r = find_augmenting_path(g, m, eps, derive_seed(kSuiteSeed, 6000 + i + 1000 * n), 20);
      c.expect(r.found(), "no path on K" + std::to_string(2 * n) + " k=" + std::to_string(k));
      if (!r.found()) continue;
      max_retries_used = std::max(max_retries_used, static_cast<int>(r.retries.size()));
      c.expect(static_cast<bool>(is_augmenting_path(g, m, *r.path)), "invalid path");
      c.expect(static_cast<int>(r.path->size()) - 1 <= r.rho.rho, "path longer than rho");
    }
    const int trials = 1000;
    int successes = 0;
    for (int i = 0; i < trials; ++i) {
      const int k = std::uniform_int_distribution<int>(0, n - 1)(rng);
      const Matching m = exact_uniform_sample(g, k, rng);
      std::vector<Vertex> path;
      augmenting_trial(g, m, rho_bound(eps, n, k), eps, derive_seed(kSuiteSeed, 70000 + i + 10000 * n), &path);
      successes += path.empty() ? 0 : 1;
    }
    // One-sided 95% Clopper-Pearson lower bound on the success probability.
    const double lower = boost::math::binomial_distribution<>::find_lower_bound_on_p(trials, successes, 0.05);
    c.expect(lower > 0.5, "K" + std::to_string(2 * n) + " success lower bound " + fmt(lower));
    c.note("K" + std::to_string(2 * n) + ": max retries " + std::to_string(max_retries_used) + ", trial success " +
           std::to_string(successes) + "/" + std::to_string(trials) + " (95% lower " + fmt(lower, 4) + ")");
  }
}

// 7 -----------------------------------------------------------------------------
void stationarity(Checker& c) {
  const Graph k4 = build_complete(2);
  const double edge_prob = 0.5 / static_cast<double>(k4.num_edges());
  for (int level = 0; level < k4.half_order(); ++level) {
    std::vector<Matching> states = enumerate_matchings(k4, level);
    const auto upper = enumerate_matchings(k4, level + 1);
    states.insert(states.end(), upper.begin(), upper.end());
    const std::size_t s = states.size();
    std::vector<double> p(s * s, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
      p[i * s + i] += 0.5;
      for (const Edge& e : k4.edges()) {
        ChainState st(states[i], level);
        st.apply_move(e);
        const Matching next = st.matching(k4);
        const auto j = static_cast<std::size_t>(std::find(states.begin(), states.end(), next) - states.begin());
        c.expect(j < s, "move left the state space");
        if (j < s) p[i * s + j] += edge_prob;
      }
    }
    double residual = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < s; ++i) col += p[i * s + j] / static_cast<double>(s);
      residual = std::max(residual, std::abs(col - 1.0 / static_cast<double>(s)));
    }
    c.expect(residual < 1e-12, "K4 level " + std::to_string(level) + " residual " + fmt(residual));
    c.note("K4 level " + std::to_string(level) + " residual " + fmt(residual, 3));
  }

  const std::vector<std::pair<NamedGraph, int>> cases = {{{"K4", k4}, 30000}, {{"Petersen", build_petersen()}, 60000}};
  for (const auto& [ng, count] : cases) {
    const double eps = spectrum(ng.graph).sigma2;
    std::vector<Matching> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      samples.push_back(
          sample_perfect_matching(ng.graph, eps, 0.1, derive_seed(kSuiteSeed, 700000 + static_cast<std::uint64_t>(i)))
              .matching);
    }
    const double tv = tv_distance(empirical_distribution(samples), ng.graph, ng.graph.half_order());
    c.expect(tv < 0.02, ng.name + " TV " + fmt(tv));
    c.note(ng.name + " TV " + fmt(tv, 4) + " over " + std::to_string(count));
  }
}

// 8 -----------------------------------------------------------------------------
void counting(Checker& c, std::ostream* progress) {
  const std::vector<std::pair<NamedGraph, double>> cases = {{{"K4", build_complete(2)}, 3.0},
                                                            {{"K6", build_complete(3)}, 15.0},
                                                            {{"K12", build_complete(6)}, 10395.0},
                                                            {{"Petersen", build_petersen()}, 6.0}};
  for (const auto& [ng, truth] : cases) {
    const double eps = spectrum(ng.graph).sigma2;
    int good = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const CountResult r = count_perfect_matchings(ng.graph, eps, 0.1, seed);
      const double rel = std::abs(r.estimate.value_or(0.0) - truth) / truth;
      worst = std::max(worst, rel);
      good += rel <= 0.1 ? 1 : 0;
    }
    c.expect(good >= 8, ng.name + " only " + std::to_string(good) + "/10 within 10%");
    c.note(ng.name + " " + std::to_string(good) + "/10, worst " + fmt(100 * worst, 3) + "%");
    if (progress) *progress << "  count " << ng.name << ": " << good << "/10 within 10%\n";
  }
}

// 9 -----------------------------------------------------------------------------
void greedy_sequences(Checker& c) {
  for (int n : {2, 3, 4, 6}) {
    const Graph g = build_complete(n);
    const int d = 2 * n - 1;
    const double eps = 1.0 / d;
    const MatchingCensus cen = census(g);
    const int k_max = evaluate_lower_bounds(n, d, eps).k;
    for (int k = 1; k <= k_max; ++k) {
      const GreedyCount gc = count_distinct_greedy(g, k, eps);
      const std::string tag = "K" + std::to_string(2 * n) + " k=" + std::to_string(k);
      c.expect(!gc.sampled, tag + " enumeration was sampled");
      c.expect(gc.injective(), tag + " collisions: " + std::to_string(gc.num_sequences - gc.distinct));
      c.expect(BigInt(gc.distinct) <= cen.at(static_cast<std::size_t>(k)), tag + " distinct exceeds m(k)");
    }
  }
  const double pm = lower_bound_pm(6, 11, 1.0 / 11.0);
  c.expect(std::abs(pm - 0.062) < 0.0005, "pm bound " + fmt(pm) + " not ~0.062");
  c.expect(pm <= 10395.0, "pm bound exceeds m(6)");
  c.note("pm bound(6, 11, 1/11) = " + fmt(pm, 4));
}

// 10 ----------------------------------------------------------------------------
void counterexample(Checker& c) {
  const std::vector<NamedGraph> bases = {{"K4", build_complete(2)},
                                         {"K6", build_complete(3)},
                                         {"K12", build_complete(6)},
                                         {"random 3-regular n=5", build_random_regular(5, 3, derive_seed(kSuiteSeed, 10))}};
  for (const auto& [name, g] : bases) {
    const Graph h = pendant_augment(g);
    const MatchingCensus cen = census(h);
    c.expect(cen.at(static_cast<std::size_t>(h.half_order())) == 0, name + " augmented graph has a perfect matching");
    const PendantSpectralReport r = pendant_spectral_check(g);
    c.expect(r.sigma2_bound_ok, name + " sigma2(H) " + fmt(r.sigma2_augmented) + " > " + fmt(r.sigma2_bound));
    c.expect(r.hoffman_wielandt_ok, name + " Hoffman-Wielandt fails");
    c.note(name + ": sigma2 " + fmt(r.sigma2_base, 4) + " -> " + fmt(r.sigma2_augmented, 4) + " (bound " +
           fmt(r.sigma2_bound, 4) + ")");
  }
}

// 11 ----------------------------------------------------------------------------
void determinism(Checker& c) {
  const auto dir = std::filesystem::temp_directory_path() / ("expmatch-det-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string gen_path = (dir / "graph.txt").string();
  const std::vector<std::vector<std::string>> commands = {
      {"gen", "--family", "random-regular", "--n", "8", "--d", "3", "--seed", "5", "--out", gen_path},
      {"spectral", "--family", "cocktail", "--n", "6"},
      {"sample", "--family", "complete", "--n", "3", "--seed", "3"},
      {"count", "--family", "complete", "--n", "3", "--seed", "7", "--budget", "50000"},
      {"augment-demo", "--family", "complete", "--n", "6", "--seed", "11"},
      {"lower-bound", "--family", "complete", "--n", "6", "--eps", "0.0909090909090909"},
      {"counterexample", "--family", "complete", "--n", "6"},
      {"oracle", "--family", "complete", "--n", "6"},
      {"verify", "--criteria", "5"},
  };
  auto read_file = [](const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const auto& args : commands) {
    std::string outputs[2];
    int codes[2];
    for (int run = 0; run < 2; ++run) {
      std::ostringstream out;
      std::ostringstream err;
      codes[run] = run_cli(args, out, err);
      outputs[run] = out.str();
      if (args.front() == "gen") outputs[run] += read_file(gen_path);
    }
    c.expect(codes[0] == 0, args.front() + " exited with " + std::to_string(codes[0]));
    c.expect(codes[0] == codes[1] && outputs[0] == outputs[1], args.front() + " output differs between runs");
  }
  std::filesystem::remove_all(dir);
  c.note(std::to_string(commands.size()) + " subcommands compared");
}

const std::vector<std::pair<std::string, std::function<void(Checker&, std::ostream*)>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<void(Checker&, std::ostream*)>>> list = {
      {"oracle census of K_2n matches closed form", [](Checker& c, std::ostream*) { oracle_correctness(c); }},
      {"spectral values and eigenvalue traces", [](Checker& c, std::ostream*) { spectral_correctness(c); }},
      {"mixing lemma and Tanner bounds", [](Checker& c, std::ostream*) { mixing_and_tanner(c); }},
      {"short augmenting paths are plentiful", [](Checker& c, std::ostream*) { short_paths(c); }},
      {"oracle ratios below ratio_bound", [](Checker& c, std::ostream*) { ratio_bounds(c); }},
      {"randomized-bipartition path search", [](Checker& c, std::ostream*) { layered_algorithm(c); }},
      {"chain stationarity and sampler TV", [](Checker& c, std::ostream*) { stationarity(c); }},
      {"approximate counting within 10%", counting},
      {"greedy sequences are injective", [](Checker& c, std::ostream*) { greedy_sequences(c); }},
      {"pendant counterexample", [](Checker& c, std::ostream*) { counterexample(c); }},
      {"CLI determinism", [](Checker& c, std::ostream*) { determinism(c); }},
  };
  return list;
}

}  // namespace

CriterionResult run_criterion(int id, std::ostream* progress) {
  const auto& list = criteria();
  if (id < 1 || id > static_cast<int>(list.size())) throw std::out_of_range("no criterion " + std::to_string(id));
  const auto& [name, body] = list[static_cast<std::size_t>(id - 1)];
  if (progress) *progress << "running [" << id << "] " << name << "\n";
  const auto start = std::chrono::steady_clock::now();
  Checker checker;
  CriterionResult result{id, name, false, "", 0.0};
  try {
    body(checker, progress);
    result.passed = checker.passed();
    result.detail = checker.detail();
  } catch (const std::exception& e) {
    result.detail = checker.detail() + "; exception: " + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<int> ids = options.only;
  if (ids.empty()) {
    for (int i = 1; i <= kNumCriteria; ++i) ids.push_back(i);
  }
  std::vector<CriterionResult> results;
  for (int id : ids) results.push_back(run_criterion(id, options.progress));
  return results;
}

}  // namespace expmatch
