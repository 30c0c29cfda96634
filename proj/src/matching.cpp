#include "expmatch/matching.hpp"

#include <algorithm>

#include "expmatch/error.hpp"

namespace expmatch {

namespace {

std::string pair_str(Vertex a, Vertex b) { return "(" + std::to_string(a) + ", " + std::to_string(b) + ")"; }

}  // namespace

Matching::Matching(int num_vertices) : partner_(static_cast<std::size_t>(std::max(num_vertices, 0)), -1) {}

Matching Matching::from_edges(const Graph& g, std::span<const Edge> edges) {
  Matching m(g.num_vertices());
  for (const auto& raw : edges) {
    const Edge e = make_edge(raw.u, raw.v);
    if (!g.has_edge(e.u, e.v)) throw ValidationError("matching edge " + pair_str(e.u, e.v) + " is not in the graph");
    if (m.is_matched(e.u) || m.is_matched(e.v)) {
      throw ValidationError("matching edges overlap at edge " + pair_str(e.u, e.v));
    }
    m.partner_[static_cast<std::size_t>(e.u)] = e.v;
    m.partner_[static_cast<std::size_t>(e.v)] = e.u;
    ++m.size_;
  }
  return m;
}

Matching Matching::from_partners(const Graph& g, std::vector<Vertex> partners) {
  if (static_cast<int>(partners.size()) != g.num_vertices()) {
    throw ValidationError("partner map size does not match the graph");
  }
  Matching m(0);
  std::size_t saturated = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const Vertex w = partners[static_cast<std::size_t>(v)];
    if (w < 0) continue;
    if (!g.contains(w) || partners[static_cast<std::size_t>(w)] != v || !g.has_edge(v, w)) {
      throw ValidationError("partner map is not a matching of the graph at vertex " + std::to_string(v));
    }
    ++saturated;
  }
  m.partner_ = std::move(partners);
  m.size_ = saturated / 2;
  return m;
}

std::optional<Vertex> Matching::partner(Vertex v) const {
  const Vertex w = partner_[static_cast<std::size_t>(v)];
  if (w < 0) return std::nullopt;
  return w;
}

bool Matching::contains(Edge e) const {
  if (e.u < 0 || e.v < 0 || e.u >= num_vertices() || e.v >= num_vertices()) return false;
  return partner_[static_cast<std::size_t>(e.u)] == e.v;
}

std::vector<Edge> Matching::edges() const {
  std::vector<Edge> out;
  out.reserve(size_);
  for (Vertex v = 0; v < num_vertices(); ++v) {
    const Vertex w = partner_[static_cast<std::size_t>(v)];
    if (w > v) out.push_back({v, w});
  }
  return out;
}

VertexSet unmatched_vertices(const Matching& m) {
  VertexSet out;
  for (Vertex v = 0; v < m.num_vertices(); ++v) {
    if (!m.is_matched(v)) out.push_back(v);
  }
  return out;
}

VertexSet partner_image(const Matching& m, const VertexSet& s) {
  std::vector<Vertex> out;
  for (Vertex v : s) {
    if (v < 0 || v >= m.num_vertices()) throw ValidationError("vertex id " + std::to_string(v) + " out of range");
    if (auto w = m.partner(v)) out.push_back(*w);
  }
  return make_vertex_set(std::move(out));
}

PathCheck is_alternating_walk(const Graph& g, const Matching& m, std::span<const Vertex> walk) {
  if (walk.empty()) return {false, "empty walk"};
  for (Vertex v : walk) {
    if (!g.contains(v)) return {false, "vertex " + std::to_string(v) + " out of range"};
  }
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    if (!g.has_edge(walk[i], walk[i + 1])) {
      return {false, "consecutive vertices " + pair_str(walk[i], walk[i + 1]) + " are not adjacent"};
    }
  }
  for (std::size_t i = 1; i + 1 < walk.size(); ++i) {
    const bool in_prev = m.contains(make_edge(walk[i - 1], walk[i]));
    const bool in_next = m.contains(make_edge(walk[i], walk[i + 1]));
    if (in_prev == in_next) {
      return {false, "alternation breaks at position " + std::to_string(i) + " (vertex " +
                         std::to_string(walk[i]) + ")"};
    }
  }
  return {true, {}};
}

PathCheck is_augmenting_path(const Graph& g, const Matching& m, std::span<const Vertex> path) {
  if (path.size() < 2) return {false, "path needs at least one edge"};
  if (auto walk = is_alternating_walk(g, m, path); !walk) return walk;
  std::vector<Vertex> sorted(path.begin(), path.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return {false, "path repeats a vertex"};
  if ((path.size() - 1) % 2 == 0) return {false, "path has even length"};
  if (m.is_matched(path.front())) return {false, "start vertex " + std::to_string(path.front()) + " is matched"};
  if (m.is_matched(path.back())) return {false, "end vertex " + std::to_string(path.back()) + " is matched"};
  // With unmatched endpoints, alternation forces the first and last edges
  // outside m; checked explicitly for single-edge paths.
  if (m.contains(make_edge(path[0], path[1]))) return {false, "first edge is a matching edge"};
  return {true, {}};
}

Matching toggle_path(const Graph& g, const Matching& m, std::span<const Vertex> path) {
  if (m.num_vertices() != g.num_vertices()) throw ValidationError("matching and graph sizes differ");
  std::vector<Vertex> partners(m.partners().begin(), m.partners().end());
  std::vector<Edge> added;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vertex a = path[i];
    const Vertex b = path[i + 1];
    if (!g.has_edge(a, b)) throw ValidationError("path edge " + pair_str(a, b) + " is not in the graph");
    if (m.contains(make_edge(a, b))) {
      if (partners[static_cast<std::size_t>(a)] == b) {
        partners[static_cast<std::size_t>(a)] = -1;
        partners[static_cast<std::size_t>(b)] = -1;
      }
    } else {
      added.push_back(make_edge(a, b));
    }
  }
  for (const auto& e : added) {
    if (partners[static_cast<std::size_t>(e.u)] >= 0 || partners[static_cast<std::size_t>(e.v)] >= 0) {
      throw ValidationError("toggling the path does not yield a matching at edge " + pair_str(e.u, e.v));
    }
    partners[static_cast<std::size_t>(e.u)] = e.v;
    partners[static_cast<std::size_t>(e.v)] = e.u;
  }
  return Matching::from_partners(g, std::move(partners));
}

Matching apply_augmenting_path(const Graph& g, const Matching& m, std::span<const Vertex> path) {
  if (auto check = is_augmenting_path(g, m, path); !check) {
    throw ValidationError("not an augmenting path: " + check.reason);
  }
  return toggle_path(g, m, path);
}

Matching greedy_maximal_matching(const Graph& g) {
  std::vector<Vertex> partners(static_cast<std::size_t>(g.num_vertices()), -1);
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    if (partners[static_cast<std::size_t>(u)] >= 0) continue;
    for (Vertex v : g.neighbors(u)) {
      if (partners[static_cast<std::size_t>(v)] < 0) {
        partners[static_cast<std::size_t>(u)] = v;
        partners[static_cast<std::size_t>(v)] = u;
        break;
      }
    }
  }
  return Matching::from_partners(g, std::move(partners));
}

}  // namespace expmatch
