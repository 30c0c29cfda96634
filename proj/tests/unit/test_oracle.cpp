#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "expmatch/error.hpp"
#include "expmatch/oracle.hpp"

using namespace expmatch;

namespace {

// Oracle: every subset of edges, kept when pairwise disjoint.
std::vector<std::uint64_t> brute_census(const Graph& g) {
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  REQUIRE(m <= 24);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(g.half_order()) + 1, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::uint64_t used = 0;
    bool ok = true;
    int size = 0;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      const std::uint64_t bits = (std::uint64_t{1} << edges[i].u) | (std::uint64_t{1} << edges[i].v);
      ok = (used & bits) == 0;
      used |= bits;
      ++size;
    }
    if (ok) ++counts[static_cast<std::size_t>(size)];
  }
  return counts;
}

}  // namespace

TEST_CASE("census matches edge-subset enumeration") {
  const std::vector<Graph> graphs = {build_petersen(), build_random_regular(6, 3, 1), build_random_regular(8, 3, 2),
                                     build_cocktail_party(3), build_complete(3), Graph(4, {{0, 1}})};
  for (const Graph& g : graphs) {
    const auto brute = brute_census(g);
    const MatchingCensus c = census(g);
    REQUIRE(c.counts.size() == brute.size());
    for (std::size_t k = 0; k < brute.size(); ++k) CHECK(c.at(k) == brute[k]);
    CHECK(c.graph_fingerprint == graph_fingerprint(g));
  }
}

TEST_CASE("closed form for complete graphs") {
  CHECK(complete_graph_matching_count(6, 6) == 10395);
  CHECK(complete_graph_matching_count(6, 5) == 62370);
  CHECK(complete_graph_matching_count(2, 2) == 3);
  CHECK(census(build_complete(8)).at(8) == 2027025);
  CHECK(complete_graph_matching_count(20, 20).str() == "319830986772877770815625");
}

TEST_CASE("matching number and vertex cap") {
  CHECK(census(build_petersen()).matching_number() == 5);
  CHECK(census(Graph(6, {{0, 1}, {0, 2}})).matching_number() == 1);
  CHECK_THROWS_AS(census(build_complete(17)), ValidationError);
  CHECK_THROWS_AS(census(build_complete(5), 8), ValidationError);
}

TEST_CASE("enumeration is sorted, complete and agrees with unranking") {
  const Graph g = build_petersen();
  const MatchingCensus c = census(g);
  for (int k = 0; k <= 5; ++k) {
    const auto all = enumerate_matchings(g, k);
    CHECK(BigInt(all.size()) == c.at(static_cast<std::size_t>(k)));
    std::set<std::vector<Edge>> distinct;
    for (std::size_t i = 0; i < all.size(); ++i) {
      CHECK(all[i].size() == static_cast<std::size_t>(k));
      distinct.insert(all[i].edges());
      if (i > 0) CHECK(all[i - 1].edges() < all[i].edges());
      CHECK(unrank_matching(g, k, BigInt(i)) == all[i]);
    }
    CHECK(distinct.size() == all.size());
  }
  CHECK_THROWS_AS(unrank_matching(g, 5, BigInt(6)), ValidationError);
}

TEST_CASE("exact sampling is uniform") {
  const Graph g = build_complete(3);
  Rng rng = make_rng(9);
  std::map<Matching, int> hits;
  const int draws = 15000;
  for (int i = 0; i < draws; ++i) ++hits[exact_uniform_sample(g, 3, rng)];
  CHECK(hits.size() == 15);
  for (const auto& [m, count] : hits) CHECK(std::abs(count - 1000) < 150);
  CHECK_THROWS_AS(exact_uniform_sample(pendant_augment(g), 4, rng), ValidationError);
}

TEST_CASE("TV distance") {
  const Graph g = build_complete(2);
  const auto all = enumerate_matchings(g, 2);
  CHECK(tv_distance(empirical_distribution(all), g, 2) == doctest::Approx(0.0));
  const std::vector<Matching> one{all[0]};
  CHECK(tv_distance(empirical_distribution(one), g, 2) == doctest::Approx(2.0 / 3.0));
  MatchingDistribution bad{{all[0], 0.5}};
  CHECK_THROWS_AS(tv_distance(bad, g, 2), ValidationError);
  MatchingDistribution wrong_size{{enumerate_matchings(g, 1)[0], 1.0}};
  CHECK_THROWS_AS(tv_distance(wrong_size, g, 2), ValidationError);
}
