#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "expmatch/graph.hpp"
#include "expmatch/matching.hpp"

namespace expmatch {

/// ceil(d((n-i+1)/n - eps)), the largest admissible a_i. Throws
/// ValidationError when the range is empty (value <= 0) or i < 1.
int valid_bound(int n, int d, double eps, int i);

/// valid_bound for i = 1..k.
std::vector<int> valid_bounds(int n, int d, double eps, int k);

/// Greedy k-matching driven by a_1..a_k: at step i, u_i is the lowest-id
/// vertex of maximum degree in G[unmatched], matched to its a_i-th neighbor
/// (1-based, ascending id) inside G[unmatched]. Throws ValidationError when
/// a_i is out of range.
Matching construct_matching(const Graph& g, std::span<const int> sequence);

struct GreedyCount {
  int k = 0;
  std::vector<int> bounds;
  std::uint64_t num_sequences = 0;
  std::uint64_t distinct = 0;
  /// Budget exceeded: only a random subset of sequences was constructed.
  bool sampled = false;

  bool injective() const { return num_sequences == distinct; }
};

/// Enumerates every valid sequence for (n, d, eps) and counts distinct
/// resulting matchings. Above `budget` sequences, constructs `budget` random
/// sequences instead and flags the result as sampled.
GreedyCount count_distinct_greedy(const Graph& g, int k, double eps, std::uint64_t budget = 10'000'000,
                                  std::uint64_t seed = 0);

/// Closed-form bounds, all as natural logarithms.
struct LowerBoundReport {
  int k = 0;  ///< floor((1 - eps) n)
  /// (d/e)^{n(1-eps)} e^{-2 eps n}: lower bound on m((1-eps)n).
  double log_meps = 0.0;
  /// Same with e^{-eps n}, the exponent the argument actually reaches.
  double log_meps_proof = 0.0;
  /// (2e/eps)^{eps n} d^{2 eps n + (4 eps n + 2)/ln C1}: upper bound on m((1-eps)n)/m(n).
  double log_ratio = 0.0;
  /// (d/e)^n (eps/(2 e^3 d^6))^{eps n}: lower bound on m(n).
  double log_pm = 0.0;
  /// eps <= 1/11 (pm/ratio bounds) and eps < 1/2 (meps bound).
  bool pm_domain_ok = false;
  bool meps_domain_ok = false;
};

double log_lower_bound_meps(int n, int d, double eps);
double log_upper_bound_ratio(int n, int d, double eps);
double log_lower_bound_pm(int n, int d, double eps);

double lower_bound_meps(int n, int d, double eps);
double upper_bound_ratio(int n, int d, double eps);
double lower_bound_pm(int n, int d, double eps);

LowerBoundReport evaluate_lower_bounds(int n, int d, double eps);

}  // namespace expmatch
