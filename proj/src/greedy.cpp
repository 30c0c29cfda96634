#include "expmatch/greedy.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "expmatch/error.hpp"
#include "expmatch/rng.hpp"

namespace expmatch {

int valid_bound(int n, int d, double eps, int i) {
  if (n < 1 || d < 1) throw ValidationError("valid_bound needs n >= 1 and d >= 1");
  if (i < 1) throw ValidationError("sequence index starts at 1");
  const double raw = d * (static_cast<double>(n - i + 1) / n - eps);
  // raw is often integral in exact arithmetic (e.g. 11 * (1 - 1/11)).
  const int bound = static_cast<int>(std::ceil(raw - 1e-9));
  if (bound <= 0) {
    throw ValidationError("empty valid range at i = " + std::to_string(i) + " (k too large for n = " +
                          std::to_string(n) + ", d = " + std::to_string(d) + ", eps = " + std::to_string(eps) + ")");
  }
  return bound;
}

std::vector<int> valid_bounds(int n, int d, double eps, int k) {
  std::vector<int> out;
  for (int i = 1; i <= k; ++i) out.push_back(valid_bound(n, d, eps, i));
  return out;
}

Matching construct_matching(const Graph& g, std::span<const int> sequence) {
  const auto size = static_cast<std::size_t>(g.num_vertices());
  if (sequence.size() > size / 2) throw ValidationError("sequence longer than n");
  std::vector<char> free(size, 1);
  std::vector<int> inside(size, 0);
  for (Vertex v = 0; v < g.num_vertices(); ++v) inside[static_cast<std::size_t>(v)] = g.degree(v);

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    Vertex u = -1;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (free[static_cast<std::size_t>(v)] &&
          (u < 0 || inside[static_cast<std::size_t>(v)] > inside[static_cast<std::size_t>(u)])) {
        u = v;
      }
    }
    const int a = sequence[i];
    if (u < 0 || a < 1 || a > inside[static_cast<std::size_t>(u)]) {
      throw ValidationError("sequence entry a_" + std::to_string(i + 1) + " = " + std::to_string(a) +
                            " exceeds the available degree " +
                            std::to_string(u < 0 ? 0 : inside[static_cast<std::size_t>(u)]) +
                            "; eps used for validity is below sigma2");
    }
    Vertex v = -1;
    int rank = 0;
    for (Vertex w : g.neighbors(u)) {
      if (free[static_cast<std::size_t>(w)] && ++rank == a) {
        v = w;
        break;
      }
    }
    edges.push_back(make_edge(u, v));
    for (Vertex x : {u, v}) {
      free[static_cast<std::size_t>(x)] = 0;
      for (Vertex y : g.neighbors(x)) --inside[static_cast<std::size_t>(y)];
    }
  }
  return Matching::from_edges(g, edges);
}

GreedyCount count_distinct_greedy(const Graph& g, int k, double eps, std::uint64_t budget, std::uint64_t seed) {
  const auto d = g.regular_degree();
  if (!d) throw ValidationError("greedy lower bound needs a regular graph");
  GreedyCount result;
  result.k = k;
  result.bounds = valid_bounds(g.half_order(), *d, eps, k);

  double total = 1.0;
  for (int b : result.bounds) total *= b;

  std::set<std::vector<Vertex>> seen;
  auto record = [&](const std::vector<int>& sequence) {
    const Matching m = construct_matching(g, sequence);
    seen.insert(std::vector<Vertex>(m.partners().begin(), m.partners().end()));
  };

  if (total > static_cast<double>(budget)) {
    result.sampled = true;
    Rng rng = make_rng(seed, 0x677265656479ULL);
    std::set<std::vector<int>> drawn;
    std::vector<int> sequence(static_cast<std::size_t>(k));
    for (std::uint64_t j = 0; j < budget; ++j) {
      for (int i = 0; i < k; ++i) {
        sequence[static_cast<std::size_t>(i)] =
            std::uniform_int_distribution<int>(1, result.bounds[static_cast<std::size_t>(i)])(rng);
      }
      if (drawn.insert(sequence).second) record(sequence);
    }
    result.num_sequences = drawn.size();
  } else {
    std::vector<int> sequence(static_cast<std::size_t>(k), 1);
    for (;;) {
      record(sequence);
      ++result.num_sequences;
      int i = k - 1;
      while (i >= 0 && sequence[static_cast<std::size_t>(i)] == result.bounds[static_cast<std::size_t>(i)]) {
        sequence[static_cast<std::size_t>(i)] = 1;
        --i;
      }
      if (i < 0) break;
      ++sequence[static_cast<std::size_t>(i)];
    }
  }
  result.distinct = seen.size();
  return result;
}

namespace {

void check_bound_args(int n, int d, double eps) {
  if (n < 1 || d < 1) throw ValidationError("bounds need n >= 1 and d >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("bounds need eps in (0, 1)");
}

}  // namespace

double log_lower_bound_meps(int n, int d, double eps) {
  check_bound_args(n, d, eps);
  return n * (1.0 - eps) * (std::log(d) - 1.0) - 2.0 * eps * n;
}

double log_upper_bound_ratio(int n, int d, double eps) {
  check_bound_args(n, d, eps);
  const double c1 = 1.0 / (eps + eps * eps);
  const double en = eps * n;
  return en * std::log(2.0 * std::numbers::e / eps) + std::log(d) * (2.0 * en + (4.0 * en + 2.0) / std::log(c1));
}

double log_lower_bound_pm(int n, int d, double eps) {
  check_bound_args(n, d, eps);
  const double e3 = std::exp(3.0);
  return n * (std::log(d) - 1.0) + eps * n * std::log(eps / (2.0 * e3 * std::pow(static_cast<double>(d), 6)));
}

double lower_bound_meps(int n, int d, double eps) { return std::exp(log_lower_bound_meps(n, d, eps)); }
double upper_bound_ratio(int n, int d, double eps) { return std::exp(log_upper_bound_ratio(n, d, eps)); }
double lower_bound_pm(int n, int d, double eps) { return std::exp(log_lower_bound_pm(n, d, eps)); }

LowerBoundReport evaluate_lower_bounds(int n, int d, double eps) {
  LowerBoundReport report;
  report.k = static_cast<int>(std::floor((1.0 - eps) * n + 1e-9));
  report.log_meps = log_lower_bound_meps(n, d, eps);
  report.log_meps_proof = report.log_meps + eps * n;
  report.log_ratio = log_upper_bound_ratio(n, d, eps);
  report.log_pm = log_lower_bound_pm(n, d, eps);
  report.pm_domain_ok = eps <= 1.0 / 11.0 + 1e-12;
  report.meps_domain_ok = eps < 0.5;
  return report;
}

}  // namespace expmatch
