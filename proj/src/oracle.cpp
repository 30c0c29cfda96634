#include "expmatch/oracle.hpp"

#include <bit>
#include <boost/random/uniform_int_distribution.hpp>
#include <cmath>
#include <unordered_map>

#include "expmatch/error.hpp"

namespace expmatch {

namespace {

using Mask = std::uint64_t;

constexpr Mask bit(Vertex v) { return Mask{1} << static_cast<unsigned>(v); }

/// Memoized matching polynomial over vertex subsets.
class SubsetCounter {
 public:
  SubsetCounter(const Graph& g, int max_vertices) {
    const int cap = std::min(max_vertices, 64);
    if (g.num_vertices() > cap) {
      throw ValidationError("exact oracle limited to " + std::to_string(cap) + " vertices, graph has " +
                            std::to_string(g.num_vertices()));
    }
    neighbors_.resize(static_cast<std::size_t>(g.num_vertices()));
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      for (Vertex w : g.neighbors(v)) neighbors_[static_cast<std::size_t>(v)] |= bit(w);
    }
    full_ = g.num_vertices() == 64 ? ~Mask{0} : bit(g.num_vertices()) - 1;
  }

  Mask full() const { return full_; }
  Mask neighbors(Vertex v) const { return neighbors_[static_cast<std::size_t>(v)]; }

  /// counts(mask)[k] = number of k-matchings of G[mask].
  const std::vector<BigInt>& counts(Mask mask) {
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    std::vector<BigInt> result{1};
    if (mask != 0) {
      const Vertex u = std::countr_zero(mask);
      const Mask rest = mask & ~bit(u);
      result = counts(rest);
      for (Mask options = neighbors(u) & rest; options != 0; options &= options - 1) {
        const Vertex v = std::countr_zero(options);
        const auto& sub = counts(rest & ~bit(v));
        if (result.size() < sub.size() + 1) result.resize(sub.size() + 1);
        for (std::size_t j = 0; j < sub.size(); ++j) result[j + 1] += sub[j];
      }
    }
    return memo_.emplace(mask, std::move(result)).first->second;
  }

  BigInt count(Mask mask, int k) {
    if (k < 0) return 0;
    const auto& c = counts(mask);
    return static_cast<std::size_t>(k) < c.size() ? c[static_cast<std::size_t>(k)] : BigInt(0);
  }

 private:
  std::vector<Mask> neighbors_;
  Mask full_ = 0;
  std::unordered_map<Mask, std::vector<BigInt>> memo_;
};

void enumerate_into(SubsetCounter& counter, Mask mask, int k, std::vector<Edge>& prefix,
                    const Graph& g, std::vector<Matching>& out) {
  if (k == 0) {
    out.push_back(Matching::from_edges(g, prefix));
    return;
  }
  if (mask == 0 || counter.count(mask, k) == 0) return;
  const Vertex u = std::countr_zero(mask);
  const Mask rest = mask & ~bit(u);
  for (Mask options = counter.neighbors(u) & rest; options != 0; options &= options - 1) {
    const Vertex v = std::countr_zero(options);
    prefix.push_back({u, v});
    enumerate_into(counter, rest & ~bit(v), k - 1, prefix, g, out);
    prefix.pop_back();
  }
  enumerate_into(counter, rest, k, prefix, g, out);
}

void check_level(const Graph& g, int k) {
  if (k < 0 || k > g.half_order()) {
    throw ValidationError("matching size " + std::to_string(k) + " outside [0, " +
                          std::to_string(g.half_order()) + "]");
  }
}

}  // namespace

std::size_t MatchingCensus::matching_number() const {
  std::size_t k = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] > 0) k = j;
  }
  return k;
}

MatchingCensus census(const Graph& g, int max_vertices) {
  SubsetCounter counter(g, max_vertices);
  MatchingCensus result;
  result.counts = counter.counts(counter.full());
  result.counts.resize(static_cast<std::size_t>(g.half_order()) + 1);
  result.graph_fingerprint = graph_fingerprint(g);
  return result;
}

std::vector<Matching> enumerate_matchings(const Graph& g, int k, int max_vertices) {
  check_level(g, k);
  SubsetCounter counter(g, max_vertices);
  std::vector<Matching> out;
  std::vector<Edge> prefix;
  enumerate_into(counter, counter.full(), k, prefix, g, out);
  return out;
}

Matching unrank_matching(const Graph& g, int k, const BigInt& index, int max_vertices) {
  check_level(g, k);
  SubsetCounter counter(g, max_vertices);
  Mask mask = counter.full();
  const BigInt total = counter.count(mask, k);
  if (index < 0 || index >= total) {
    throw ValidationError("matching index out of range [0, " + total.str() + ")");
  }
  BigInt remaining = index;
  std::vector<Edge> edges;
  int needed = k;
  while (needed > 0) {
    const Vertex u = std::countr_zero(mask);
    const Mask rest = mask & ~bit(u);
    bool matched = false;
    for (Mask options = counter.neighbors(u) & rest; options != 0; options &= options - 1) {
      const Vertex v = std::countr_zero(options);
      const BigInt block = counter.count(rest & ~bit(v), needed - 1);
      if (remaining < block) {
        edges.push_back({u, v});
        mask = rest & ~bit(v);
        --needed;
        matched = true;
        break;
      }
      remaining -= block;
    }
    if (!matched) mask = rest;
  }
  return Matching::from_edges(g, edges);
}

Matching exact_uniform_sample(const Graph& g, int k, Rng& rng, int max_vertices) {
  check_level(g, k);
  const BigInt total = census(g, max_vertices).at(static_cast<std::size_t>(k));
  if (total == 0) throw ValidationError("graph has no " + std::to_string(k) + "-matching to sample");
  boost::random::uniform_int_distribution<BigInt> pick(0, total - 1);
  return unrank_matching(g, k, pick(rng), max_vertices);
}

MatchingDistribution empirical_distribution(std::span<const Matching> samples) {
  MatchingDistribution out;
  if (samples.empty()) return out;
  const double weight = 1.0 / static_cast<double>(samples.size());
  for (const auto& m : samples) out[m] += weight;
  return out;
}

double tv_distance(const MatchingDistribution& empirical, const Graph& g, int k, int max_vertices) {
  check_level(g, k);
  const BigInt total_big = census(g, max_vertices).at(static_cast<std::size_t>(k));
  if (total_big == 0) throw ValidationError("graph has no " + std::to_string(k) + "-matching");
  const double total = total_big.convert_to<double>();
  const double uniform = 1.0 / total;

  double mass = 0.0;
  double distance = 0.0;
  for (const auto& [m, freq] : empirical) {
    if (m.num_vertices() != g.num_vertices() || m.size() != static_cast<std::size_t>(k)) {
      throw ValidationError("empirical distribution contains a matching that is not a " + std::to_string(k) +
                            "-matching of the graph");
    }
    const auto edges = m.edges();
    Matching::from_edges(g, edges);  // throws if an edge is not in g
    if (freq < 0.0) throw ValidationError("negative frequency in empirical distribution");
    mass += freq;
    distance += std::abs(freq - uniform);
  }
  if (std::abs(mass - 1.0) > 1e-9) throw ValidationError("empirical frequencies do not sum to 1");
  distance += (total - static_cast<double>(empirical.size())) * uniform;
  return 0.5 * distance;
}

BigInt complete_graph_matching_count(int n, int k) {
  if (k < 0 || k > n) return 0;
  auto factorial = [](int x) {
    BigInt r = 1;
    for (int i = 2; i <= x; ++i) r *= i;
    return r;
  };
  return factorial(2 * n) / (pow(BigInt(2), static_cast<unsigned>(k)) * factorial(k) * factorial(2 * n - 2 * k));
}

}  // namespace expmatch
