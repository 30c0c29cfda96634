#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expmatch/graph.hpp"

namespace expmatch {

/// Vertex-disjoint edge set with a partner map. Immutable value type:
/// operations that change a matching return a new one.
class Matching {
 public:
  /// The empty matching on `num_vertices` vertices.
  explicit Matching(int num_vertices = 0);

  /// Validates that the edges exist in g and are pairwise disjoint.
  static Matching from_edges(const Graph& g, std::span<const Edge> edges);
  /// partners[v] is v's partner or -1. Validated against g.
  static Matching from_partners(const Graph& g, std::vector<Vertex> partners);

  int num_vertices() const noexcept { return static_cast<int>(partner_.size()); }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  bool is_perfect() const noexcept { return 2 * size_ == partner_.size(); }

  bool is_matched(Vertex v) const { return partner_[static_cast<std::size_t>(v)] >= 0; }
  std::optional<Vertex> partner(Vertex v) const;
  bool contains(Edge e) const;
  /// Sorted ascending.
  std::vector<Edge> edges() const;
  std::span<const Vertex> partners() const noexcept { return partner_; }

  bool operator==(const Matching&) const = default;
  auto operator<=>(const Matching&) const = default;

 private:
  std::vector<Vertex> partner_;
  std::size_t size_ = 0;
};

/// V minus the saturated vertices.
VertexSet unmatched_vertices(const Matching& m);

/// M(S): partners of the saturated members of S.
VertexSet partner_image(const Matching& m, const VertexSet& s);

/// Outcome of a walk/path check; `reason` explains a rejection.
struct PathCheck {
  bool ok = false;
  std::string reason;

  explicit operator bool() const noexcept { return ok; }
};

/// Consecutive vertices adjacent in g and, at every internal vertex, exactly
/// one of the two incident walk edges in m.
PathCheck is_alternating_walk(const Graph& g, const Matching& m, std::span<const Vertex> walk);

/// Simple alternating path, odd length, both endpoints unmatched.
PathCheck is_augmenting_path(const Graph& g, const Matching& m, std::span<const Vertex> path);

/// Symmetric difference of m with the edges of a simple path. Throws
/// ValidationError if the result is not a matching.
Matching toggle_path(const Graph& g, const Matching& m, std::span<const Vertex> path);

/// Returns m with the augmenting path toggled (one edge larger).
Matching apply_augmenting_path(const Graph& g, const Matching& m, std::span<const Vertex> path);

/// Greedy maximal matching scanning vertices and neighbors in id order.
Matching greedy_maximal_matching(const Graph& g);

}  // namespace expmatch
