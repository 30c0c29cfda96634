#include "expmatch/chain.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "expmatch/augment.hpp"
#include "expmatch/error.hpp"

namespace expmatch {

ChainState::ChainState(const Matching& m, int level)
    : partner_(m.partners().begin(), m.partners().end()), size_(m.size()), level_(level) {
  if (level < 0) throw ValidationError("chain level must be nonnegative");
  if (m.size() != static_cast<std::size_t>(level) && m.size() != static_cast<std::size_t>(level) + 1) {
    throw ValidationError("chain state at level " + std::to_string(level) + " needs a matching of size " +
                          std::to_string(level) + " or " + std::to_string(level + 1) + ", got " +
                          std::to_string(m.size()));
  }
}

Matching ChainState::matching(const Graph& g) const { return Matching::from_partners(g, partner_); }

void ChainState::apply_move(Edge e) {
  auto& pu = partner_[static_cast<std::size_t>(e.u)];
  auto& pv = partner_[static_cast<std::size_t>(e.v)];
  if (is_upper()) {
    if (pu == e.v) {
      pu = -1;
      pv = -1;
      --size_;
    }
    return;
  }
  const bool u_free = pu < 0;
  const bool v_free = pv < 0;
  if (u_free && v_free) {
    pu = e.v;
    pv = e.u;
    ++size_;
  } else if (u_free != v_free) {
    const Vertex free_end = u_free ? e.u : e.v;
    const Vertex held_end = u_free ? e.v : e.u;
    const Vertex old_mate = partner_[static_cast<std::size_t>(held_end)];
    partner_[static_cast<std::size_t>(old_mate)] = -1;
    partner_[static_cast<std::size_t>(held_end)] = free_end;
    partner_[static_cast<std::size_t>(free_end)] = held_end;
  }
}

namespace {

/// Distributions reused across the inner loop of a single chain.
class Stepper {
 public:
  Stepper(const Graph& g, double laziness) : g_(g), stay_(laziness), pick_(0, g.num_edges() - 1) {
    if (!(laziness >= 0.0 && laziness < 1.0)) throw ValidationError("laziness must lie in [0, 1)");
    if (g.num_edges() == 0) throw ValidationError("chain needs a graph with at least one edge");
  }

  void step(ChainState& state, Rng& rng) {
    if (stay_(rng)) return;
    state.apply_move(g_.edges()[pick_(rng)]);
  }

 private:
  const Graph& g_;
  std::bernoulli_distribution stay_;
  std::uniform_int_distribution<std::size_t> pick_;
};

}  // namespace

void chain_step(const Graph& g, ChainState& state, Rng& rng, double laziness) {
  Stepper(g, laziness).step(state, rng);
}

std::optional<Matching> starting_matching(const Graph& g, int k, double eps, std::uint64_t seed) {
  if (k < 0 || k > g.half_order()) throw ValidationError("start size outside [0, n]");
  Matching m = greedy_maximal_matching(g);
  int attempt = 0;
  while (static_cast<int>(m.size()) < k) {
    std::optional<std::vector<Vertex>> path;
    if (eps > 0.0) {
      auto found = find_augmenting_path(g, m, eps, derive_seed(seed, static_cast<std::uint64_t>(attempt++)));
      path = std::move(found.path);
    }
    if (!path) path = find_augmenting_path_exhaustive(g, m, g.num_vertices() - 1);
    if (!path) return std::nullopt;
    m = apply_augmenting_path(g, m, *path);
  }
  if (static_cast<int>(m.size()) > k) {
    auto edges = m.edges();
    edges.resize(static_cast<std::size_t>(k));
    m = Matching::from_edges(g, edges);
  }
  return m;
}

std::uint64_t step_schedule(const Graph& g, double eps, double delta, double constant) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  const int n = g.half_order();
  const double ratio = ratio_bound(eps, n, n - 1, g.max_degree());
  const double steps = constant * n * n * ratio * std::log(1.0 / delta);
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(steps)));
}

SampleResult sample_perfect_matching(const Graph& g, double eps, double delta, std::uint64_t seed,
                                     const SampleOptions& options) {
  const int n = g.half_order();
  const std::uint64_t schedule =
      options.steps_override ? std::max<std::uint64_t>(*options.steps_override, 1)
                             : step_schedule(g, eps, delta, options.schedule_constant);
  // A block ends on a perfect matching with probability about 1/(1 + m(n-1)/m(n)).
  const double ratio = ratio_bound(eps, n, n - 1, g.max_degree());
  const auto blocks = options.max_blocks.value_or(
      static_cast<std::uint64_t>(std::ceil(options.timeout_factor * (1.0 + ratio))));
  if (blocks == 0) throw ValidationError("max_blocks must be positive");
  const std::uint64_t budget = blocks * schedule;

  auto start = starting_matching(g, n - 1, eps, derive_seed(seed, 1));
  if (!start) {
    throw BudgetError("no perfect matching: could not build a " + std::to_string(n - 1) +
                      "-matching to start the chain (budget " + std::to_string(budget) + " steps never used)");
  }
  ChainState state(*start, n - 1);
  Rng rng = make_rng(seed, 2);
  Stepper stepper(g, options.laziness);

  SampleResult result{Matching(g.num_vertices()), 0, schedule};
  for (std::uint64_t block = 0; block < blocks; ++block) {
    for (std::uint64_t i = 0; i < schedule; ++i) stepper.step(state, rng);
    result.steps += schedule;
    if (state.is_upper()) {
      result.matching = state.matching(g);
      return result;
    }
  }
  throw BudgetError("no perfect matching reached within " + std::to_string(budget) + " chain steps (" +
                    std::to_string(blocks) + " x schedule of " + std::to_string(schedule) + ")");
}

namespace {

struct LevelRun {
  RatioEstimate estimate;
  bool started = false;
};

LevelRun run_level(const Graph& g, int k, std::uint64_t samples, std::uint64_t burn_in, std::uint64_t seed,
                   double eps) {
  LevelRun run;
  run.estimate.level = k;
  auto start = starting_matching(g, k, eps, derive_seed(seed, 1));
  if (!start) return run;
  run.started = true;

  ChainState state(*start, k);
  Rng rng = make_rng(seed, 2);
  Stepper stepper(g, 0.5);
  for (std::uint64_t i = 0; i < burn_in; ++i) stepper.step(state, rng);
  std::uint64_t upper = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    stepper.step(state, rng);
    upper += state.is_upper() ? 1 : 0;
  }
  run.estimate.upper_count = upper;
  run.estimate.lower_count = samples - upper;
  run.estimate.steps = burn_in + samples;
  run.estimate.ratio = upper == 0 ? 0.0 : static_cast<double>(samples - upper) / static_cast<double>(upper);
  return run;
}

void check_level(const Graph& g, int k) {
  if (k < 0 || k >= g.half_order()) {
    throw ValidationError("ratio level " + std::to_string(k) + " outside [0, " + std::to_string(g.half_order() - 1) +
                          "]");
  }
}

}  // namespace

RatioEstimate estimate_ratio(const Graph& g, int k, std::uint64_t samples, std::uint64_t burn_in, std::uint64_t seed,
                             double eps) {
  check_level(g, k);
  if (samples == 0) throw ValidationError("estimate_ratio needs at least one sample");
  const LevelRun run = run_level(g, k, samples, burn_in, seed, eps);
  if (!run.started) throw BudgetError("could not build a " + std::to_string(k) + "-matching to start the chain");
  if (run.estimate.lower_count == 0 || run.estimate.upper_count == 0) {
    throw BudgetError("degenerate ratio estimate at level " + std::to_string(k) + ": " +
                      std::to_string(run.estimate.lower_count) + " size-k and " +
                      std::to_string(run.estimate.upper_count) +
                      " size-(k+1) visits; increase the sample budget");
  }
  return run.estimate;
}

std::uint64_t level_sample_size(const Graph& g, int k, double eps, double delta, const CountOptions& options) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  const int n = g.half_order();
  const double upper_ratio = ratio_bound(eps, n, k, g.max_degree());
  const double inverse_lower = static_cast<double>(g.num_edges()) / (k + 1);
  const double r = std::max(upper_ratio, inverse_lower);
  const double wanted = std::ceil(64.0 * r * r * n / (delta * delta));
  const double clamped = std::clamp(wanted, static_cast<double>(options.min_samples_per_level),
                                    static_cast<double>(options.max_samples_per_level));
  return static_cast<std::uint64_t>(clamped);
}

CountResult count_perfect_matchings(const Graph& g, double eps, double delta, std::uint64_t seed,
                                    const CountOptions& options) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  const int n = g.half_order();
  std::vector<int> levels = options.levels;
  const bool full = levels.empty();
  if (full) {
    for (int k = 1; k < n; ++k) levels.push_back(k);
  }
  for (int k : levels) check_level(g, k);

  std::vector<std::future<LevelRun>> pending;
  for (int k : levels) {
    const std::uint64_t samples =
        options.steps_override ? std::max<std::uint64_t>(*options.steps_override, 1)
                               : level_sample_size(g, k, eps, delta, options);
    const double schedule = 4.0 * n * n * ratio_bound(eps, n, k, g.max_degree()) * std::log(1.0 / delta);
    const auto burn_in = static_cast<std::uint64_t>(std::min(std::ceil(schedule), static_cast<double>(samples / 4)));
    const std::uint64_t level_seed = derive_seed(seed, 1000 + static_cast<std::uint64_t>(k));
    pending.push_back(std::async(std::launch::async, run_level, std::cref(g), k, samples, burn_in, level_seed, eps));
  }

  CountResult result;
  double product = static_cast<double>(g.num_edges());
  bool zero = g.num_edges() == 0;
  for (auto& f : pending) {
    LevelRun run = f.get();
    result.steps += run.estimate.steps;
    const int k = run.estimate.level;
    if (!run.started) {
      zero = true;
      if (result.diagnostic.empty()) {
        result.diagnostic = "no " + std::to_string(k) + "-matching found; the graph has no perfect matching";
      }
    } else if (run.estimate.upper_count == 0) {
      zero = true;
      if (result.diagnostic.empty()) {
        result.diagnostic = "level " + std::to_string(k) + " never visited a " + std::to_string(k + 1) +
                            "-matching; reporting zero perfect matchings";
      }
    } else if (run.estimate.lower_count == 0) {
      throw BudgetError("degenerate ratio estimate at level " + std::to_string(k) +
                        ": no size-k visits; increase the sample budget");
    } else {
      product /= run.estimate.ratio;
    }
    result.per_level.push_back(run.estimate);
  }
  if (full) result.estimate = zero ? 0.0 : product;
  return result;
}

}  // namespace expmatch
