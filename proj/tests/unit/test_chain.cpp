#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expmatch/augment.hpp"
#include "expmatch/chain.hpp"
#include "expmatch/error.hpp"
#include "expmatch/oracle.hpp"

using namespace expmatch;

namespace {

// Independent statement of the move rules on edge lists.
std::vector<Edge> expected_move(const std::vector<Edge>& m, Edge e, int level) {
  auto covers = [&](Vertex v) {
    for (const Edge& f : m) {
      if (f.u == v || f.v == v) return std::optional<Edge>(f);
    }
    return std::optional<Edge>();
  };
  std::vector<Edge> out = m;
  if (static_cast<int>(m.size()) == level + 1) {
    std::erase(out, e);
    return out;
  }
  const auto cu = covers(e.u);
  const auto cv = covers(e.v);
  if (!cu && !cv) {
    out.push_back(e);
  } else if (!cu != !cv) {
    std::erase(out, cu ? *cu : *cv);
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Matching> state_space(const Graph& g, int level) {
  auto states = enumerate_matchings(g, level);
  const auto upper = enumerate_matchings(g, level + 1);
  states.insert(states.end(), upper.begin(), upper.end());
  return states;
}

}  // namespace

TEST_CASE("moves follow the add/remove/slide rules") {
  for (const Graph& g : {build_complete(3), build_petersen()}) {
    for (int level = 0; level < g.half_order(); ++level) {
      for (const Matching& m : state_space(g, level)) {
        for (const Edge& e : g.edges()) {
          ChainState st(m, level);
          st.apply_move(e);
          const Matching next = st.matching(g);
          CHECK(next.edges() == expected_move(m.edges(), e, level));
          CHECK(st.size() == next.size());
        }
      }
    }
  }
  CHECK_THROWS_AS(ChainState(Matching(4), 1), ValidationError);
}

TEST_CASE("transition matrix is symmetric, so uniform is stationary") {
  const Graph g = build_petersen();
  const double p_edge = 0.5 / static_cast<double>(g.num_edges());
  for (int level : {2, 4}) {
    const auto states = state_space(g, level);
    const std::size_t s = states.size();
    std::map<Matching, std::size_t> index;
    for (std::size_t i = 0; i < s; ++i) index[states[i]] = i;
    std::vector<double> p(s * s, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
      p[i * s + i] += 0.5;
      for (const Edge& e : g.edges()) {
        ChainState st(states[i], level);
        st.apply_move(e);
        p[i * s + index.at(st.matching(g))] += p_edge;
      }
    }
    double asym = 0.0;
    double row_err = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < s; ++j) {
        asym = std::max(asym, std::abs(p[i * s + j] - p[j * s + i]));
        row += p[i * s + j];
      }
      row_err = std::max(row_err, std::abs(row - 1.0));
    }
    CHECK(asym < 1e-15);
    CHECK(row_err < 1e-12);
  }
}

TEST_CASE("schedule and sample sizes") {
  const Graph g = build_complete(6);
  const double eps = 1.0 / 11.0;
  const auto t = step_schedule(g, eps, 0.1);
  CHECK(t == static_cast<std::uint64_t>(std::ceil(4.0 * 36 * 1452 * std::log(10.0))));
  CHECK_THROWS_AS(step_schedule(g, eps, 1.5), ValidationError);
  CountOptions opts;
  CHECK(level_sample_size(g, 5, eps, 0.1, opts) == opts.max_samples_per_level);
  opts.max_samples_per_level = 100;
  opts.min_samples_per_level = 50;
  CHECK(level_sample_size(g, 1, eps, 0.1, opts) == 100);
}

TEST_CASE("ratio estimates agree with the oracle") {
  const Graph g = build_complete(3);
  const MatchingCensus c = census(g);
  for (int k = 1; k < 3; ++k) {
    const double truth = c.at(static_cast<std::size_t>(k)).convert_to<double>() /
                         c.at(static_cast<std::size_t>(k + 1)).convert_to<double>();
    const RatioEstimate r = estimate_ratio(g, k, 400000, 1000, 5);
    CHECK(r.ratio == doctest::Approx(truth).epsilon(0.05));
    CHECK(r.lower_count + r.upper_count == 400000);
  }
  CHECK_THROWS_AS(estimate_ratio(g, 3, 10, 0, 1), ValidationError);
  CHECK_THROWS_AS(estimate_ratio(pendant_augment(g), 3, 1000, 0, 1), BudgetError);
}

TEST_CASE("counting") {
  const Graph g = build_petersen();
  const CountResult r = count_perfect_matchings(g, 2.0 / 3.0, 0.1, 3);
  REQUIRE(r.estimate.has_value());
  CHECK(*r.estimate == doctest::Approx(6.0).epsilon(0.1));
  CHECK(r.per_level.size() == 4);
  CHECK(count_perfect_matchings(g, 2.0 / 3.0, 0.1, 3).estimate == r.estimate);

  CountOptions subset;
  subset.levels = {2};
  subset.steps_override = 5000;
  const CountResult part = count_perfect_matchings(g, 2.0 / 3.0, 0.1, 3, subset);
  CHECK_FALSE(part.estimate.has_value());
  CHECK(part.per_level.size() == 1);

  CountOptions small;
  small.max_samples_per_level = 20000;
  const CountResult none = count_perfect_matchings(pendant_augment(build_complete(2)), 0.5, 0.1, 1, small);
  CHECK(none.estimate == 0.0);
  CHECK_FALSE(none.diagnostic.empty());
}

TEST_CASE("sampling") {
  const Graph g = build_petersen();
  const SampleResult a = sample_perfect_matching(g, 2.0 / 3.0, 0.1, 8);
  CHECK(a.matching.is_perfect());
  CHECK(a.steps % a.schedule == 0);
  CHECK(sample_perfect_matching(g, 2.0 / 3.0, 0.1, 8).matching == a.matching);

  SampleOptions fast;
  fast.steps_override = 50;
  fast.max_blocks = 3;
  CHECK_THROWS_AS(sample_perfect_matching(pendant_augment(build_complete(3)), 0.3, 0.1, 1, fast), BudgetError);
}

TEST_CASE("starting matchings") {
  const Graph g = build_random_regular(20, 3, 6);
  for (int k : {0, 5, 19}) {
    const auto m = starting_matching(g, k, 0.9, 1);
    REQUIRE(m.has_value());
    CHECK(m->size() == static_cast<std::size_t>(k));
  }
  CHECK_FALSE(starting_matching(pendant_augment(build_complete(3)), 4, 0.3, 1).has_value());
}
