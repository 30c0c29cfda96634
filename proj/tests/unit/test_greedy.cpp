#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "expmatch/error.hpp"
#include "expmatch/greedy.hpp"
#include "expmatch/oracle.hpp"

using namespace expmatch;

TEST_CASE("valid bounds") {
  // 11 * (1 - 1/11) = 10 exactly in rationals.
  CHECK(valid_bound(6, 11, 1.0 / 11.0, 1) == 10);
  CHECK(valid_bounds(6, 11, 1.0 / 11.0, 5) == std::vector<int>{10, 9, 7, 5, 3});
  CHECK_THROWS_AS(valid_bound(6, 11, 1.0 / 11.0, 7), ValidationError);
  CHECK_THROWS_AS(valid_bound(6, 11, 1.0 / 11.0, 0), ValidationError);
}

TEST_CASE("constructor follows the greedy rule") {
  const Graph g = build_complete(2);
  const std::vector<int> seq{2};
  // u = 0 (all degrees equal), its 2nd free neighbor is 2.
  CHECK(construct_matching(g, seq).edges() == std::vector<Edge>{{0, 2}});
  const std::vector<int> two{3, 1};
  CHECK(construct_matching(g, two).edges() == std::vector<Edge>{{0, 3}, {1, 2}});
  const std::vector<int> bad{4};
  CHECK_THROWS_AS(construct_matching(g, bad), ValidationError);

  // Max-degree vertex first: in a star plus an edge, the center goes first.
  const Graph star(6, {{0, 5}, {1, 5}, {2, 5}, {3, 4}});
  const std::vector<int> one{1};
  CHECK(construct_matching(star, one).edges() == std::vector<Edge>{{0, 5}});
}

TEST_CASE("valid sequences give distinct matchings") {
  for (int n = 2; n <= 5; ++n) {
    const Graph g = build_complete(n);
    const double eps = 1.0 / (2 * n - 1);
    const MatchingCensus c = census(g);
    const int kmax = evaluate_lower_bounds(n, 2 * n - 1, eps).k;
    for (int k = 1; k <= kmax; ++k) {
      const GreedyCount r = count_distinct_greedy(g, k, eps);
      CHECK_FALSE(r.sampled);
      CHECK(r.injective());
      double product = 1;
      for (int b : r.bounds) product *= b;
      CHECK(static_cast<double>(r.num_sequences) == product);
      CHECK(BigInt(r.distinct) <= c.at(static_cast<std::size_t>(k)));
    }
  }
  const GreedyCount sampled = count_distinct_greedy(build_complete(10), 9, 1.0 / 19.0, 1000, 3);
  CHECK(sampled.sampled);
  CHECK(sampled.injective());
  CHECK_THROWS_AS(count_distinct_greedy(Graph(4, {{0, 1}}), 1, 0.1), ValidationError);
}

TEST_CASE("closed-form bounds") {
  const double eps = 1.0 / 11.0;
  CHECK(lower_bound_pm(6, 11, eps) == doctest::Approx(0.06187).epsilon(1e-3));
  // (d/e)^n (eps/(2 e^3 d^6))^{eps n}, evaluated directly.
  const double direct = std::pow(11 / std::exp(1.0), 6) * std::pow(eps / (2 * std::exp(3.0) * std::pow(11.0, 6)), 6 * eps);
  CHECK(lower_bound_pm(6, 11, eps) == doctest::Approx(direct));
  CHECK(lower_bound_meps(6, 11, eps) == doctest::Approx(std::pow(11 / std::exp(1.0), 6 * (1 - eps)) * std::exp(-2 * eps * 6)));
  const LowerBoundReport r = evaluate_lower_bounds(6, 11, eps);
  CHECK(r.k == 5);
  CHECK(r.pm_domain_ok);
  CHECK(r.log_meps_proof - r.log_meps == doctest::Approx(eps * 6));
  // The bounds are consistent with the oracle on K12.
  const MatchingCensus c = census(build_complete(6));
  CHECK(std::exp(r.log_meps) <= c.at(5).convert_to<double>());
  CHECK(std::exp(r.log_pm) <= c.at(6).convert_to<double>());
  CHECK(c.at(5).convert_to<double>() / c.at(6).convert_to<double>() <= std::exp(r.log_ratio));
  CHECK_FALSE(evaluate_lower_bounds(6, 11, 0.2).pm_domain_ok);
  CHECK_THROWS_AS(lower_bound_pm(6, 11, 1.5), ValidationError);
}
