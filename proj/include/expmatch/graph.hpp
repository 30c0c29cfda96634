#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace expmatch {

/// 0-based vertex id. "Lexicographically first" always means smallest id.
using Vertex = int;

/// Undirected edge stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Orders the endpoints so that the result satisfies u < v.
constexpr Edge make_edge(Vertex a, Vertex b) noexcept {
  return a < b ? Edge{a, b} : Edge{b, a};
}

/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

/// Sorts and deduplicates in place; returns the normalized set.
VertexSet make_vertex_set(std::vector<Vertex> vertices);

/// Simple undirected graph on an even number of vertices.
///
/// Immutable after construction. Adjacency lists are sorted ascending so every
/// "first neighbor" rule in the algorithms is deterministic.
class Graph {
 public:
  Graph() = default;

  /// Throws ValidationError on an odd/zero vertex count, self-loops, parallel
  /// edges or out-of-range endpoints.
  Graph(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const noexcept { return num_vertices_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  /// Half the vertex count (the "n" in 2n).
  int half_order() const noexcept { return num_vertices_ / 2; }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(v)].size()); }
  bool has_edge(Vertex a, Vertex b) const;
  bool contains(Vertex v) const noexcept { return v >= 0 && v < num_vertices_; }

  /// The common degree if the graph is regular.
  std::optional<int> regular_degree() const;
  int max_degree() const;
  int min_degree() const;

  bool operator==(const Graph&) const = default;

 private:
  int num_vertices_ = 0;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<Edge> edges_;
};

// Generators --------------------------------------------------------------

/// K_{2n}.
Graph build_complete(int n);

/// K_{2n} minus the perfect matching {(2i, 2i+1)}; (2n-2)-regular.
Graph build_cocktail_party(int n);

/// Uniform simple d-regular graph on 2n vertices via the pairing model.
/// Restarts on any loop or parallel edge; gives up after 1000*d*n pairings.
Graph build_random_regular(int n, int d, std::uint64_t seed);

/// The Petersen graph (10 vertices, 3-regular, 6 perfect matchings).
Graph build_petersen();

/// Attaches two pendant vertices to the highest-indexed vertex of a d-regular
/// graph (d >= 3). The result has no perfect matching.
Graph pendant_augment(const Graph& g);

// Set operations -----------------------------------------------------------

/// G[S] on the same vertex id space: vertices outside S keep their ids but
/// lose all edges.
Graph induced_subgraph(const Graph& g, const VertexSet& s);

/// Vertices outside S with a neighbor in S.
VertexSet neighbors_of_set(const Graph& g, const VertexSet& s);

/// Every vertex adjacent to some member of S, members of S included.
VertexSet closed_neighborhood_of_set(const Graph& g, const VertexSet& s);

/// |{(u, v) in S x T : uv in E}|, counting ordered pairs.
std::int64_t edge_count_between(const Graph& g, const VertexSet& s, const VertexSet& t);

/// Throws ValidationError if any id in s is out of range.
void check_vertex_set(const Graph& g, const VertexSet& s);

// I/O -------------------------------------------------------------------------

/// Edge-list text: header "<num_vertices> <num_edges>", then "u v" per line.
std::string format_graph(const Graph& g);
Graph parse_graph(std::istream& in, const std::string& source_name = "<input>");
Graph load_graph(const std::filesystem::path& path);
void save_graph(const Graph& g, const std::filesystem::path& path);

/// 64-bit FNV-1a of the canonical edge-list text, as 16 hex digits.
std::string graph_fingerprint(const Graph& g);

}  // namespace expmatch
