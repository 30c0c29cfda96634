#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "expmatch/graph.hpp"
#include "expmatch/matching.hpp"

namespace expmatch {

/// Largest eps for which the short-augmenting-path guarantee is stated.
inline constexpr double kMaxGuaranteedEps = 1.0 / 11.0;

/// rho = 4*max(ceil(log_{C1}((2*eps*n + 1)/(n - |M|))), 0) + 1 with
/// C1 = 1/(eps + eps^2).
struct RhoBound {
  int rho = 1;
  int t = 0;
  /// C1(eps), also the expansion factor used by the layered search.
  double alpha = 0.0;
  /// eps > 1/11: the value is still computed but carries no guarantee.
  bool hypothesis_violated = false;
};

RhoBound rho_bound(double eps, int n, int matching_size);

/// 2(k+1)/(n-k) * d^((rho-1)/2) with rho = rho_bound(eps, n, k).
double ratio_bound(double eps, int n, int k, int d);

enum class Side : std::uint8_t { kLeft = 0, kRight = 1 };

constexpr Side opposite(Side s) noexcept { return s == Side::kLeft ? Side::kRight : Side::kLeft; }

/// G_M(omega): unmatched vertices split into U_L/U_R; each matching edge
/// (u, v), u < v, puts u left and v right when omega = 0, swapped otherwise.
struct Bipartition {
  /// One bit per matching edge, in Matching::edges() order.
  std::vector<std::uint8_t> omega;
  std::vector<Side> side;

  VertexSet left() const;
  VertexSet right() const;
  Side side_of(Vertex v) const { return side[static_cast<std::size_t>(v)]; }
};

/// Throws ValidationError unless u_left/u_right are disjoint, equal-sized and
/// together cover exactly the unmatched vertices.
Bipartition sample_bipartition(const Matching& m, const VertexSet& u_left, const VertexSet& u_right,
                               std::uint64_t seed);

/// Trace of one alternating-BFS growth from a start set on its own side.
///
/// layers[i] is L_i (layers[0] = start), explored[i] is X_i (explored[0] is
/// empty), added[i] is A_i (added[0] is empty).
struct LayeredSearch {
  Side own_side = Side::kLeft;
  std::vector<VertexSet> layers;
  std::vector<VertexSet> explored;
  std::vector<VertexSet> added;
  double alpha = 0.0;
  /// Number of completed growth steps.
  int stop_time = 0;
  /// Some step found fewer new neighbors than ceil(alpha*|L_{i-1}|) demanded.
  bool expansion_shortfall = false;
  /// Count of steps where a partner of A_i was already in L_{i-1}; always 0
  /// when the construction behaves as proven.
  int disjointness_violations = 0;
  /// An unmatched opposite-side vertex reached directly: (member of L, target).
  std::optional<std::pair<Vertex, Vertex>> direct_hit;

  /// Layer index at which v joined the grown set, or -1.
  std::vector<int> depth;
  /// For v in L_i: the A-vertex it was matched through. For an
  /// opposite-side a in A_i: the L_{i-1} vertex it was discovered from.
  std::vector<Vertex> parent;

  const VertexSet& grown() const { return layers.back(); }
  bool reached(Vertex v) const { return depth[static_cast<std::size_t>(v)] >= 0; }
  /// Alternating path from a start vertex to v (start first), of even length
  /// at most 2*depth(v). v must have been reached.
  std::vector<Vertex> path_to(Vertex v) const;
};

/// Grows L_0 = start through A_i = the first ceil(alpha*|L_{i-1}|) - |X_{i-1}|
/// neighbors of L_{i-1} outside X_{i-1} (ascending id),
/// L_i = L_{i-1} + M(A_i on the opposite side). Stops once |L_{i-1}| > size_cap,
/// after t_max steps, when nothing new is reachable, or on a direct hit.
LayeredSearch layered_growth(const Graph& g, const Matching& m, const Bipartition& bp, const VertexSet& start,
                             double alpha, int t_max, double size_cap);

/// Per-retry diagnostics of find_augmenting_path.
struct RetryTrace {
  int retry = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> left_layer_sizes;
  std::vector<std::size_t> right_layer_sizes;
  bool left_shortfall = false;
  bool right_shortfall = false;
  /// "direct-left", "direct-right", "bridge" or "none".
  std::string outcome;
  std::size_t path_length = 0;
};

struct AugmentResult {
  /// Vertex list of the augmenting path, U_L endpoint first.
  std::optional<std::vector<Vertex>> path;
  RhoBound rho;
  std::vector<RetryTrace> retries;

  bool found() const { return path.has_value(); }
};

/// ceil(log2(1/failure_budget)), 20 for the default budget of 1e-6.
int default_max_retries(double failure_budget = 1e-6);

/// Randomized-bipartition search for an augmenting path of length <= rho.
/// Throws ValidationError if m is perfect. A failed search is a value.
AugmentResult find_augmenting_path(const Graph& g, const Matching& m, double eps, std::uint64_t seed,
                                   int max_retries = default_max_retries());

/// One randomized trial: fixed id-order split, a fresh omega, both growths.
RetryTrace augmenting_trial(const Graph& g, const Matching& m, const RhoBound& rho, double eps, std::uint64_t seed,
                            std::vector<Vertex>* path_out);

/// Shortens a walk by cutting the segment between the first two occurrences
/// of a repeated vertex until none repeats.
std::vector<Vertex> remove_cycles(std::vector<Vertex> walk);

struct ShortPathCount {
  std::uint64_t count = 0;
  VertexSet endpoints;
  /// The DFS budget ran out; count is a lower bound.
  bool partial = false;
};

/// Exhaustive DFS over simple alternating paths from unmatched vertices;
/// counts augmenting paths of length <= max_len, each once regardless of
/// orientation.
ShortPathCount count_short_augmenting_paths(const Graph& g, const Matching& m, int max_len,
                                            std::uint64_t budget = 50'000'000);

/// First augmenting path found by the exhaustive DFS, or nullopt. Throws
/// BudgetError if the budget runs out before the search space is exhausted.
std::optional<std::vector<Vertex>> find_augmenting_path_exhaustive(const Graph& g, const Matching& m, int max_len,
                                                                   std::uint64_t budget = 50'000'000);

}  // namespace expmatch
