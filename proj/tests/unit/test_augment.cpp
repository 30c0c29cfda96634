#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "expmatch/augment.hpp"
#include "expmatch/error.hpp"
#include "expmatch/oracle.hpp"
#include "expmatch/spectral.hpp"

using namespace expmatch;

namespace {

// Oracle: grow every simple path edge by edge and test the augmenting
// conditions directly; count each unordered path once.
std::uint64_t brute_augmenting_paths(const Graph& g, const Matching& m, int max_len) {
  std::uint64_t count = 0;
  std::vector<Vertex> path;
  std::vector<char> used(static_cast<std::size_t>(g.num_vertices()), 0);
  std::function<void()> extend = [&] {
    const int len = static_cast<int>(path.size()) - 1;
    if (len >= 1 && len % 2 == 1 && !m.is_matched(path.back()) && path.front() < path.back()) {
      bool alternating = true;
      for (int i = 0; i < len; ++i) {
        const bool in_m = m.contains(make_edge(path[static_cast<std::size_t>(i)], path[static_cast<std::size_t>(i + 1)]));
        alternating = alternating && (in_m == (i % 2 == 1));
      }
      count += alternating ? 1 : 0;
    }
    if (len == max_len) return;
    for (Vertex w : g.neighbors(path.back())) {
      if (used[static_cast<std::size_t>(w)]) continue;
      used[static_cast<std::size_t>(w)] = 1;
      path.push_back(w);
      extend();
      path.pop_back();
      used[static_cast<std::size_t>(w)] = 0;
    }
  };
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (m.is_matched(s)) continue;
    path = {s};
    used[static_cast<std::size_t>(s)] = 1;
    extend();
    used[static_cast<std::size_t>(s)] = 0;
  }
  return count;
}

}  // namespace

TEST_CASE("rho bound values") {
  const double eps = 1.0 / 11.0;
  // C1 = 121/12; (2*6/11 + 1)/1 = 23/11 lies in (1, C1], so t = 1.
  const RhoBound r = rho_bound(eps, 6, 5);
  CHECK(r.t == 1);
  CHECK(r.rho == 5);
  CHECK(r.alpha == doctest::Approx(121.0 / 12.0));
  CHECK_FALSE(r.hypothesis_violated);
  CHECK(rho_bound(eps, 6, 0).rho == 1);
  CHECK(rho_bound(eps, 6, 4).rho == 5);
  CHECK(rho_bound(0.2, 6, 5).hypothesis_violated);
  CHECK(rho_bound(0.9, 6, 5).t == 0);
  CHECK_THROWS_AS(rho_bound(eps, 6, 6), ValidationError);
  CHECK_THROWS_AS(rho_bound(0.0, 6, 1), ValidationError);

  // Direct evaluation of 4*max(ceil(log_C1((2 eps n + 1)/(n - k))), 0) + 1.
  for (int n = 5; n <= 200; n += 15) {
    for (int k = 0; k < n; ++k) {
      const double c1 = 1.0 / (eps + eps * eps);
      const double x = std::log((2 * eps * n + 1) / (n - k)) / std::log(c1);
      const int t = std::max(static_cast<int>(std::ceil(x - 1e-9)), 0);
      CHECK(rho_bound(eps, n, k).rho == 4 * t + 1);
    }
  }
}

TEST_CASE("ratio bound") {
  CHECK(ratio_bound(1.0 / 11.0, 6, 5, 11) == doctest::Approx(1452.0));
  CHECK(ratio_bound(1.0 / 11.0, 6, 0, 11) == doctest::Approx(2.0 / 6.0));
  CHECK_THROWS_AS(ratio_bound(0.1, 6, 6, 11), ValidationError);
}

TEST_CASE("bipartition") {
  const Graph g = build_complete(4);
  const std::vector<Edge> edges{{0, 1}, {2, 5}};
  const Matching m = Matching::from_edges(g, edges);
  const Bipartition bp = sample_bipartition(m, {3, 6}, {4, 7}, 7);
  CHECK(bp.omega.size() == 2);
  CHECK(bp.side_of(3) == Side::kLeft);
  CHECK(bp.side_of(4) == Side::kRight);
  for (const Edge& e : m.edges()) CHECK(bp.side_of(e.u) != bp.side_of(e.v));
  CHECK(bp.left().size() == 4);
  CHECK(bp.right().size() == 4);
  CHECK(sample_bipartition(m, {3, 6}, {4, 7}, 7).omega == bp.omega);
  CHECK_THROWS_AS(sample_bipartition(m, {3, 6}, {4, 0}, 7), ValidationError);
  CHECK_THROWS_AS(sample_bipartition(m, {3, 4, 6}, {7}, 7), ValidationError);

  // Each matching edge flips with probability 1/2.
  int flips = 0;
  for (std::uint64_t s = 0; s < 2000; ++s) flips += sample_bipartition(m, {3, 6}, {4, 7}, s).omega[0];
  CHECK(std::abs(flips - 1000) < 150);
}

TEST_CASE("layered growth invariants") {
  const Graph g = build_random_regular(12, 5, 3);
  Rng rng = make_rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Matching m = exact_uniform_sample(g, 8, rng);
    const VertexSet free = unmatched_vertices(m);
    const VertexSet ul(free.begin(), free.begin() + 4);
    const VertexSet ur(free.begin() + 4, free.end());
    const Bipartition bp = sample_bipartition(m, ul, ur, static_cast<std::uint64_t>(trial));
    const LayeredSearch s = layered_growth(g, m, bp, ul, 2.0, 10, 1e9);
    CHECK(s.disjointness_violations == 0);
    for (std::size_t i = 1; i < s.layers.size(); ++i) {
      CHECK(s.layers[i].size() >= s.layers[i - 1].size());
      CHECK(std::includes(s.layers[i].begin(), s.layers[i].end(), s.layers[i - 1].begin(), s.layers[i - 1].end()));
      for (Vertex a : s.added[i]) CHECK(std::binary_search(s.explored[i].begin(), s.explored[i].end(), a));
    }
    for (Vertex v : s.grown()) {
      const auto path = s.path_to(v);
      CHECK(path.size() % 2 == 1);
      CHECK(path.size() <= 2 * static_cast<std::size_t>(s.depth[static_cast<std::size_t>(v)]) + 1);
      CHECK(std::binary_search(ul.begin(), ul.end(), path.front()));
      CHECK(is_alternating_walk(g, m, path));
    }
    if (s.direct_hit) {
      auto path = s.path_to(s.direct_hit->first);
      path.push_back(s.direct_hit->second);
      CHECK(is_augmenting_path(g, m, path));
    }
  }
  const Matching m = exact_uniform_sample(g, 11, rng);
  const VertexSet free = unmatched_vertices(m);
  const Bipartition bp = sample_bipartition(m, {free[0]}, {free[1]}, 0);
  CHECK_THROWS_AS(layered_growth(g, m, bp, {}, 2.0, 1, 10), ValidationError);
  CHECK_THROWS_AS(layered_growth(g, m, bp, {free[0], free[1]}, 2.0, 1, 10), ValidationError);
}

TEST_CASE("remove_cycles") {
  CHECK(remove_cycles({1, 2, 3, 2, 4}) == std::vector<Vertex>{1, 2, 4});
  CHECK(remove_cycles({1, 2, 3, 4, 5, 2, 6}) == std::vector<Vertex>{1, 2, 6});
  CHECK(remove_cycles({1, 2, 3}) == std::vector<Vertex>{1, 2, 3});
  CHECK(remove_cycles({5, 5}) == std::vector<Vertex>{5});
}

TEST_CASE("find_augmenting_path returns valid short paths") {
  for (const Graph& g : {build_complete(6), build_complete(7), build_random_regular(20, 5, 2)}) {
    const double eps = spectrum(g).sigma2;
    Rng rng = make_rng(12);
    int found = 0;
    for (int i = 0; i < 60; ++i) {
      const int k = std::uniform_int_distribution<int>(0, g.half_order() - 1)(rng);
      const Matching m = g.num_vertices() <= 32 ? exact_uniform_sample(g, k, rng) : greedy_maximal_matching(g);
      if (m.is_perfect()) continue;
      const AugmentResult r = find_augmenting_path(g, m, eps, static_cast<std::uint64_t>(i));
      CHECK(r.retries.size() <= 20);
      if (!r.found()) continue;
      ++found;
      CHECK(is_augmenting_path(g, m, *r.path));
      CHECK(static_cast<int>(r.path->size()) - 1 <= r.rho.rho);
      CHECK(r.retries.back().outcome != "none");
    }
    // Success is only guaranteed inside the hypothesis range.
    if (eps <= kMaxGuaranteedEps + 1e-12) CHECK(found > 0);
  }
  const Graph g = build_complete(2);
  const std::vector<Edge> pm{{0, 1}, {2, 3}};
  CHECK_THROWS_AS(find_augmenting_path(g, Matching::from_edges(g, pm), 0.3, 0), ValidationError);
}

TEST_CASE("search is deterministic for a seed") {
  const Graph g = build_complete(7);
  Rng rng = make_rng(2);
  const Matching m = exact_uniform_sample(g, 4, rng);
  const auto a = find_augmenting_path(g, m, 1.0 / 13.0, 99);
  const auto b = find_augmenting_path(g, m, 1.0 / 13.0, 99);
  CHECK(a.path == b.path);
  CHECK(a.retries.size() == b.retries.size());
}

TEST_CASE("short augmenting path count matches brute force") {
  Rng rng = make_rng(21);
  for (const Graph& g : {build_petersen(), build_random_regular(6, 3, 4), build_complete(4), build_cocktail_party(4)}) {
    for (int k = 0; k < g.half_order(); ++k) {
      for (int rep = 0; rep < 3; ++rep) {
        const Matching m = exact_uniform_sample(g, k, rng);
        for (int len : {1, 3, 5, 7}) {
          const ShortPathCount c = count_short_augmenting_paths(g, m, len);
          CHECK_FALSE(c.partial);
          CHECK(c.count == brute_augmenting_paths(g, m, len));
        }
      }
    }
  }
}

TEST_CASE("exhaustive search") {
  const Graph g = Graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  const std::vector<Edge> edges{{1, 2}, {3, 4}};
  const Matching m = Matching::from_edges(g, edges);
  CHECK_FALSE(find_augmenting_path_exhaustive(g, m, 3).has_value());
  const auto p = find_augmenting_path_exhaustive(g, m, 5);
  REQUIRE(p.has_value());
  CHECK(p->size() == 6);
  // A maximum matching has no augmenting path, so a tiny budget runs out.
  const Graph h = pendant_augment(build_complete(6));
  const Matching maximum = enumerate_matchings(h, 6).front();
  CHECK_FALSE(find_augmenting_path_exhaustive(h, maximum, 13).has_value());
  CHECK_THROWS_AS(find_augmenting_path_exhaustive(h, maximum, 13, 10), BudgetError);
}
