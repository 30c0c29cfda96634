#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "expmatch/graph.hpp"
#include "expmatch/matching.hpp"
#include "expmatch/rng.hpp"

namespace expmatch {

using BigInt = boost::multiprecision::cpp_int;

/// Default vertex cap for the exhaustive oracle.
inline constexpr int kOracleVertexCap = 32;

/// Exact k-matching counts m(0..n).
struct MatchingCensus {
  std::vector<BigInt> counts;
  std::string graph_fingerprint;

  const BigInt& at(std::size_t k) const { return counts.at(k); }
  /// Largest k with m(k) > 0.
  std::size_t matching_number() const;
};

/// Vertex-branching recursion with memoization on the remaining vertex set:
/// the lowest remaining vertex is either left unmatched or matched to each of
/// its remaining neighbors. Throws ValidationError above the vertex cap.
MatchingCensus census(const Graph& g, int max_vertices = kOracleVertexCap);

/// All k-matchings, ordered lexicographically by their sorted edge lists.
std::vector<Matching> enumerate_matchings(const Graph& g, int k, int max_vertices = kOracleVertexCap);

/// The index-th k-matching of enumerate_matchings order, without enumerating.
Matching unrank_matching(const Graph& g, int k, const BigInt& index, int max_vertices = kOracleVertexCap);

/// Exactly uniform k-matching. Throws ValidationError if m(k) = 0.
Matching exact_uniform_sample(const Graph& g, int k, Rng& rng, int max_vertices = kOracleVertexCap);

using MatchingDistribution = std::map<Matching, double>;

/// Relative frequencies of the given samples.
MatchingDistribution empirical_distribution(std::span<const Matching> samples);

/// TV distance between `empirical` and the uniform law on k-matchings of g.
/// Matchings absent from `empirical` contribute 1/m(k) each.
double tv_distance(const MatchingDistribution& empirical, const Graph& g, int k,
                   int max_vertices = kOracleVertexCap);

/// (2n)! / (2^k k! (2n-2k)!): k-matchings of K_{2n}.
BigInt complete_graph_matching_count(int n, int k);

}  // namespace expmatch
