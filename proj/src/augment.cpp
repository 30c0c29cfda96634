#include "expmatch/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "expmatch/error.hpp"
#include "expmatch/rng.hpp"

namespace expmatch {

namespace {

// Absorbs rounding in ceil() of quantities that are integral in exact arithmetic.
constexpr double kCeilSlack = 1e-9;

int ceil_tolerant(double x) { return static_cast<int>(std::ceil(x - kCeilSlack)); }

}  // namespace

RhoBound rho_bound(double eps, int n, int matching_size) {
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  if (n < 1) throw ValidationError("n must be positive");
  if (matching_size < 0 || matching_size >= n) {
    throw ValidationError("rho bound needs a non-perfect matching (|M| = " + std::to_string(matching_size) +
                          ", n = " + std::to_string(n) + ")");
  }
  RhoBound out;
  out.alpha = 1.0 / (eps + eps * eps);
  out.hypothesis_violated = eps > kMaxGuaranteedEps + 1e-12;
  const double argument = (2.0 * eps * n + 1.0) / (n - matching_size);
  // For alpha <= 1 (eps >= ~0.618) the logarithm is negative or undefined for
  // any argument > 1; the max(., 0) clamp then gives t = 0.
  if (argument > 1.0 && out.alpha > 1.0) {
    out.t = std::max(ceil_tolerant(std::log(argument) / std::log(out.alpha)), 0);
  }
  out.rho = 4 * out.t + 1;
  return out;
}

double ratio_bound(double eps, int n, int k, int d) {
  if (k < 0 || k >= n) throw ValidationError("ratio bound needs 0 <= k < n");
  if (d < 1) throw ValidationError("ratio bound needs d >= 1");
  const RhoBound rho = rho_bound(eps, n, k);
  return 2.0 * (k + 1) / (n - k) * std::pow(static_cast<double>(d), (rho.rho - 1) / 2);
}

VertexSet Bipartition::left() const {
  VertexSet out;
  for (std::size_t v = 0; v < side.size(); ++v) {
    if (side[v] == Side::kLeft) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

VertexSet Bipartition::right() const {
  VertexSet out;
  for (std::size_t v = 0; v < side.size(); ++v) {
    if (side[v] == Side::kRight) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

Bipartition sample_bipartition(const Matching& m, const VertexSet& u_left, const VertexSet& u_right,
                               std::uint64_t seed) {
  if (u_left.size() != u_right.size()) {
    throw ValidationError("U_L and U_R must have equal sizes (" + std::to_string(u_left.size()) + " vs " +
                          std::to_string(u_right.size()) + ")");
  }
  VertexSet joined = u_left;
  joined.insert(joined.end(), u_right.begin(), u_right.end());
  joined = make_vertex_set(std::move(joined));
  if (joined.size() != u_left.size() + u_right.size() || joined != unmatched_vertices(m)) {
    throw ValidationError("U_L and U_R must partition the unmatched vertices");
  }

  Bipartition bp;
  bp.side.assign(static_cast<std::size_t>(m.num_vertices()), Side::kLeft);
  for (Vertex v : u_right) bp.side[static_cast<std::size_t>(v)] = Side::kRight;

  Rng rng = make_rng(seed, 0x6f6d656761ULL);
  std::bernoulli_distribution coin(0.5);
  for (const auto& e : m.edges()) {
    const bool flip = coin(rng);
    bp.omega.push_back(flip ? 1 : 0);
    bp.side[static_cast<std::size_t>(e.u)] = flip ? Side::kRight : Side::kLeft;
    bp.side[static_cast<std::size_t>(e.v)] = flip ? Side::kLeft : Side::kRight;
  }
  return bp;
}

std::vector<Vertex> LayeredSearch::path_to(Vertex v) const {
  if (!reached(v)) throw std::invalid_argument("vertex " + std::to_string(v) + " was not reached by the growth");
  std::vector<Vertex> reversed{v};
  while (depth[static_cast<std::size_t>(v)] > 0) {
    const Vertex via = parent[static_cast<std::size_t>(v)];
    v = parent[static_cast<std::size_t>(via)];
    reversed.push_back(via);
    reversed.push_back(v);
  }
  return {reversed.rbegin(), reversed.rend()};
}

LayeredSearch layered_growth(const Graph& g, const Matching& m, const Bipartition& bp, const VertexSet& start,
                             double alpha, int t_max, double size_cap) {
  if (start.empty()) throw ValidationError("layered growth needs a nonempty start set");
  check_vertex_set(g, start);
  const auto size = static_cast<std::size_t>(g.num_vertices());
  if (bp.side.size() != size || m.num_vertices() != g.num_vertices()) {
    throw ValidationError("bipartition, matching and graph sizes differ");
  }

  LayeredSearch search;
  search.own_side = bp.side_of(start.front());
  for (Vertex v : start) {
    if (bp.side_of(v) != search.own_side) throw ValidationError("start set spans both sides of the bipartition");
  }
  search.alpha = alpha;
  search.depth.assign(size, -1);
  search.parent.assign(size, -1);
  search.layers.push_back(start);
  search.explored.emplace_back();
  search.added.emplace_back();

  std::vector<char> in_explored(size, 0);
  std::vector<Vertex> discovered_from(size, -1);
  for (Vertex v : start) search.depth[static_cast<std::size_t>(v)] = 0;

  for (int step = 1; step <= t_max; ++step) {
    const VertexSet& current = search.layers.back();
    if (static_cast<double>(current.size()) > size_cap) break;

    const int demand =
        ceil_tolerant(alpha * static_cast<double>(current.size())) - static_cast<int>(search.explored.back().size());
    if (demand <= 0) break;

    // Shallowest discoverer first so reconstructed paths stay short.
    std::vector<Vertex> order = current;
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
      return search.depth[static_cast<std::size_t>(a)] < search.depth[static_cast<std::size_t>(b)];
    });
    std::vector<Vertex> candidates;
    for (Vertex p : order) {
      for (Vertex q : g.neighbors(p)) {
        const auto qi = static_cast<std::size_t>(q);
        if (search.depth[qi] >= 0 || in_explored[qi] || discovered_from[qi] >= 0) continue;
        discovered_from[qi] = p;
        candidates.push_back(q);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    if (static_cast<int>(candidates.size()) < demand) search.expansion_shortfall = true;
    const auto take = std::min(candidates.size(), static_cast<std::size_t>(demand));
    VertexSet added(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take));
    for (auto it = candidates.begin() + static_cast<std::ptrdiff_t>(take); it != candidates.end(); ++it) {
      discovered_from[static_cast<std::size_t>(*it)] = -1;
    }
    if (added.empty()) break;

    VertexSet explored = search.explored.back();
    explored.insert(explored.end(), added.begin(), added.end());
    explored = make_vertex_set(std::move(explored));

    VertexSet next = current;
    for (Vertex a : added) {
      const auto ai = static_cast<std::size_t>(a);
      in_explored[ai] = 1;
      // Own-side members of A_i never lie on a path through A_i; they may
      // already hold a parent as the mate of another member.
      if (bp.side_of(a) == search.own_side) continue;
      search.parent[ai] = discovered_from[ai];
      const auto mate = m.partner(a);
      if (!mate) {
        if (!search.direct_hit) search.direct_hit = std::make_pair(discovered_from[ai], a);
        continue;
      }
      const auto vi = static_cast<std::size_t>(*mate);
      if (search.depth[vi] >= 0) {
        ++search.disjointness_violations;
        continue;
      }
      search.depth[vi] = step;
      search.parent[vi] = a;
      next.push_back(*mate);
    }
    search.layers.push_back(make_vertex_set(std::move(next)));
    search.explored.push_back(std::move(explored));
    search.added.push_back(std::move(added));
    search.stop_time = step;
    if (search.direct_hit) break;
  }
  return search;
}

std::vector<Vertex> remove_cycles(std::vector<Vertex> walk) {
  for (;;) {
    std::unordered_map<Vertex, std::size_t> first_seen;
    bool cut = false;
    for (std::size_t j = 0; j < walk.size(); ++j) {
      auto [it, inserted] = first_seen.emplace(walk[j], j);
      if (!inserted) {
        walk.erase(walk.begin() + static_cast<std::ptrdiff_t>(it->second) + 1,
                   walk.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        cut = true;
        break;
      }
    }
    if (!cut) return walk;
  }
}

int default_max_retries(double failure_budget) {
  if (!(failure_budget > 0.0 && failure_budget < 1.0)) throw ValidationError("failure budget must lie in (0, 1)");
  return static_cast<int>(std::ceil(std::log2(1.0 / failure_budget)));
}

RetryTrace augmenting_trial(const Graph& g, const Matching& m, const RhoBound& rho, double eps, std::uint64_t seed,
                            std::vector<Vertex>* path_out) {
  const VertexSet unmatched = unmatched_vertices(m);
  const auto half = static_cast<std::ptrdiff_t>(unmatched.size() / 2);
  const VertexSet u_left(unmatched.begin(), unmatched.begin() + half);
  const VertexSet u_right(unmatched.begin() + half, unmatched.end());
  const Bipartition bp = sample_bipartition(m, u_left, u_right, seed);
  const double size_cap = 2.0 * eps * g.half_order();

  RetryTrace trace;
  trace.seed = seed;
  trace.outcome = "none";
  std::vector<Vertex> path;

  const LayeredSearch left = layered_growth(g, m, bp, u_left, rho.alpha, rho.t, size_cap);
  for (const auto& layer : left.layers) trace.left_layer_sizes.push_back(layer.size());
  trace.left_shortfall = left.expansion_shortfall;

  if (left.direct_hit) {
    path = left.path_to(left.direct_hit->first);
    path.push_back(left.direct_hit->second);
    trace.outcome = "direct-left";
  } else {
    const LayeredSearch right = layered_growth(g, m, bp, u_right, rho.alpha, rho.t, size_cap);
    for (const auto& layer : right.layers) trace.right_layer_sizes.push_back(layer.size());
    trace.right_shortfall = right.expansion_shortfall;

    if (right.direct_hit) {
      path = right.path_to(right.direct_hit->first);
      path.push_back(right.direct_hit->second);
      std::reverse(path.begin(), path.end());
      trace.outcome = "direct-right";
    } else {
      // Bridge edge between the two grown sets with the smallest total depth.
      int best = -1;
      std::pair<Vertex, Vertex> bridge{-1, -1};
      for (Vertex v : left.grown()) {
        for (Vertex w : g.neighbors(v)) {
          if (!right.reached(w) || m.contains(make_edge(v, w))) continue;
          const int total = left.depth[static_cast<std::size_t>(v)] + right.depth[static_cast<std::size_t>(w)];
          if (best < 0 || total < best) {
            best = total;
            bridge = {v, w};
          }
        }
      }
      if (best >= 0) {
        path = left.path_to(bridge.first);
        auto tail = right.path_to(bridge.second);
        path.insert(path.end(), tail.rbegin(), tail.rend());
        path = remove_cycles(std::move(path));
        trace.outcome = "bridge";
      }
    }
  }

  if (!path.empty()) {
    if (auto check = is_augmenting_path(g, m, path); !check) {
      throw std::logic_error("layered search produced an invalid augmenting path: " + check.reason);
    }
    trace.path_length = path.size() - 1;
    if (path_out) *path_out = std::move(path);
  }
  return trace;
}

AugmentResult find_augmenting_path(const Graph& g, const Matching& m, double eps, std::uint64_t seed,
                                   int max_retries) {
  if (m.num_vertices() != g.num_vertices()) throw ValidationError("matching and graph sizes differ");
  if (m.is_perfect()) throw ValidationError("matching is already perfect");
  if (max_retries < 1) throw ValidationError("max_retries must be positive");

  AugmentResult result;
  result.rho = rho_bound(eps, g.half_order(), static_cast<int>(m.size()));
  for (int retry = 0; retry < max_retries; ++retry) {
    std::vector<Vertex> path;
    RetryTrace trace = augmenting_trial(g, m, result.rho, eps, derive_seed(seed, static_cast<std::uint64_t>(retry)),
                                        &path);
    trace.retry = retry;
    result.retries.push_back(std::move(trace));
    if (!path.empty()) {
      result.path = std::move(path);
      break;
    }
  }
  return result;
}

namespace {

/// DFS over simple alternating paths that begin with a non-matching edge at
/// an unmatched vertex. `visit` is called with each complete augmenting path;
/// returning true stops the search.
class AlternatingDfs {
 public:
  AlternatingDfs(const Graph& g, const Matching& m, int max_len, std::uint64_t budget)
      : g_(g), m_(m), max_len_(max_len), budget_(budget), visited_(static_cast<std::size_t>(g.num_vertices()), 0) {}

  template <typename Visit>
  bool run(Visit&& visit) {
    for (Vertex u : unmatched_vertices(m_)) {
      path_.assign(1, u);
      visited_[static_cast<std::size_t>(u)] = 1;
      const bool stop = extend(u, visit);
      visited_[static_cast<std::size_t>(u)] = 0;
      if (stop || exhausted_) return stop;
    }
    return false;
  }

  bool exhausted() const { return exhausted_; }

 private:
  template <typename Visit>
  bool extend(Vertex x, Visit& visit) {
    const int length = static_cast<int>(path_.size()) - 1;
    if (length + 1 > max_len_) return false;
    const auto mate_of_x = m_.partner(x);
    for (Vertex y : g_.neighbors(x)) {
      if (++expansions_ > budget_) {
        exhausted_ = true;
        return false;
      }
      if (visited_[static_cast<std::size_t>(y)] || (mate_of_x && *mate_of_x == y)) continue;
      const auto mate = m_.partner(y);
      if (!mate) {
        path_.push_back(y);
        const bool stop = visit(static_cast<const std::vector<Vertex>&>(path_));
        path_.pop_back();
        if (stop) return true;
        continue;
      }
      const Vertex z = *mate;
      if (visited_[static_cast<std::size_t>(z)] || length + 3 > max_len_) continue;
      path_.push_back(y);
      path_.push_back(z);
      visited_[static_cast<std::size_t>(y)] = 1;
      visited_[static_cast<std::size_t>(z)] = 1;
      const bool stop = extend(z, visit);
      visited_[static_cast<std::size_t>(y)] = 0;
      visited_[static_cast<std::size_t>(z)] = 0;
      path_.pop_back();
      path_.pop_back();
      if (stop || exhausted_) return stop;
    }
    return false;
  }

  const Graph& g_;
  const Matching& m_;
  int max_len_;
  std::uint64_t budget_;
  std::uint64_t expansions_ = 0;
  bool exhausted_ = false;
  std::vector<char> visited_;
  std::vector<Vertex> path_;
};

}  // namespace

ShortPathCount count_short_augmenting_paths(const Graph& g, const Matching& m, int max_len, std::uint64_t budget) {
  if (m.num_vertices() != g.num_vertices()) throw ValidationError("matching and graph sizes differ");
  if (max_len < 1) throw ValidationError("max_len must be positive");
  ShortPathCount result;
  std::vector<Vertex> endpoints;
  AlternatingDfs dfs(g, m, max_len, budget);
  dfs.run([&](const std::vector<Vertex>& path) {
    if (path.front() < path.back()) {
      ++result.count;
      endpoints.push_back(path.front());
      endpoints.push_back(path.back());
    }
    return false;
  });
  result.partial = dfs.exhausted();
  result.endpoints = make_vertex_set(std::move(endpoints));
  return result;
}

std::optional<std::vector<Vertex>> find_augmenting_path_exhaustive(const Graph& g, const Matching& m, int max_len,
                                                                   std::uint64_t budget) {
  if (m.num_vertices() != g.num_vertices()) throw ValidationError("matching and graph sizes differ");
  std::optional<std::vector<Vertex>> found;
  AlternatingDfs dfs(g, m, max_len, budget);
  dfs.run([&](const std::vector<Vertex>& path) {
    found = path;
    return true;
  });
  if (!found && dfs.exhausted()) {
    throw BudgetError("augmenting path search exhausted its budget of " + std::to_string(budget) + " expansions");
  }
  return found;
}

}  // namespace expmatch
