#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "expmatch/graph.hpp"
#include "expmatch/matching.hpp"
#include "expmatch/rng.hpp"

namespace expmatch {

/// A matching of size k or k+1, mutated in place by the chain.
class ChainState {
 public:
  /// Throws ValidationError unless |m| is level or level+1.
  ChainState(const Matching& m, int level);

  int level() const noexcept { return level_; }
  std::size_t size() const noexcept { return size_; }
  std::span<const Vertex> partners() const noexcept { return partner_; }
  bool is_upper() const noexcept { return size_ == static_cast<std::size_t>(level_) + 1; }
  Matching matching(const Graph& g) const;

  /// The non-lazy transition for a proposed edge: remove it (size k+1, edge
  /// in M), add it (size k, both ends free), slide it (size k, one end free,
  /// other end matched to w: M + e - (v, w)), otherwise stay.
  void apply_move(Edge e);

 private:
  std::vector<Vertex> partner_;
  std::size_t size_ = 0;
  int level_ = 0;
};

/// Lazy step: stay with probability `laziness`, else propose a uniform edge.
void chain_step(const Graph& g, ChainState& state, Rng& rng, double laziness = 0.5);

/// Size-k matching used as the chain's start: greedy maximal, grown by
/// augmenting paths (layered search, then exhaustive DFS), trimmed to k.
/// Returns nullopt if no k-matching was found.
std::optional<Matching> starting_matching(const Graph& g, int k, double eps, std::uint64_t seed);

/// Steps per sample: c * n^2 * R * ln(1/delta), R = ratio_bound(eps, n, n-1, d)
/// and d the maximum degree.
std::uint64_t step_schedule(const Graph& g, double eps, double delta, double constant = 4.0);

struct SampleOptions {
  std::optional<std::uint64_t> steps_override;
  double schedule_constant = 4.0;
  /// Give up after timeout_factor * (1 + R) blocks without landing on a
  /// perfect matching, R = ratio_bound(eps, n, n-1, d).
  double timeout_factor = 50.0;
  /// Hard cap on blocks; replaces the timeout_factor rule when set.
  std::optional<std::uint64_t> max_blocks;
  double laziness = 0.5;
};

struct SampleResult {
  Matching matching;
  std::uint64_t steps = 0;
  std::uint64_t schedule = 0;
};

/// Runs the level-(n-1) chain in blocks of `schedule` steps and returns the
/// first block-end state that is a perfect matching. Throws BudgetError on
/// timeout (e.g. when g has no perfect matching).
SampleResult sample_perfect_matching(const Graph& g, double eps, double delta, std::uint64_t seed,
                                     const SampleOptions& options = {});

struct RatioEstimate {
  int level = 0;
  double ratio = 0.0;
  std::uint64_t lower_count = 0;
  std::uint64_t upper_count = 0;
  std::uint64_t steps = 0;
};

/// Fraction of size-k over size-(k+1) visits of the level-k chain after
/// burn-in; estimates m(k)/m(k+1). Throws BudgetError if either size was
/// never visited, or no k-matching could be built to start from.
RatioEstimate estimate_ratio(const Graph& g, int k, std::uint64_t samples, std::uint64_t burn_in, std::uint64_t seed,
                             double eps = 0.0);

struct CountOptions {
  std::optional<std::uint64_t> steps_override;
  std::uint64_t max_samples_per_level = 4'000'000;
  std::uint64_t min_samples_per_level = 20'000;
  /// Levels to estimate; empty means all of 1..n-1.
  std::vector<int> levels;
};

struct CountResult {
  /// m(n) estimate; empty when only a subset of levels was requested.
  std::optional<double> estimate;
  std::vector<RatioEstimate> per_level;
  std::uint64_t steps = 0;
  std::string diagnostic;
};

/// Samples for level k: 64 * R^2 * n / delta^2, R = max(ratio_bound(eps, n, k, d),
/// |E|/(k+1)), clamped to [min, max].
std::uint64_t level_sample_size(const Graph& g, int k, double eps, double delta, const CountOptions& options);

/// m(n) ~ |E| * prod_{k=1}^{n-1} 1/estimate_ratio(k). A level whose upper
/// size is never reached yields estimate 0 with a diagnostic.
CountResult count_perfect_matchings(const Graph& g, double eps, double delta, std::uint64_t seed,
                                    const CountOptions& options = {});

}  // namespace expmatch
