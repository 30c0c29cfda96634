#include "expmatch/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "expmatch/error.hpp"
#include "expmatch/rng.hpp"

namespace expmatch {

VertexSet make_vertex_set(std::vector<Vertex> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return vertices;
}

Graph::Graph(int num_vertices, std::vector<Edge> edges) : num_vertices_(num_vertices) {
  if (num_vertices <= 0 || num_vertices % 2 != 0) {
    throw ValidationError("graph must have a positive even number of vertices, got " +
                          std::to_string(num_vertices));
  }
  for (auto& e : edges) {
    if (e.u == e.v) {
      throw ValidationError("self-loop at vertex " + std::to_string(e.u));
    }
    e = make_edge(e.u, e.v);
    if (e.u < 0 || e.v >= num_vertices) {
      throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") has a vertex id outside [0, " + std::to_string(num_vertices) + ")");
    }
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
    throw ValidationError("duplicate edge (" + std::to_string(dup->u) + ", " +
                          std::to_string(dup->v) + ")");
  }
  edges_ = std::move(edges);
  adjacency_.assign(static_cast<std::size_t>(num_vertices), {});
  for (const auto& e : edges_) {
    adjacency_[static_cast<std::size_t>(e.u)].push_back(e.v);
    adjacency_[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

bool Graph::has_edge(Vertex a, Vertex b) const {
  if (!contains(a) || !contains(b)) return false;
  const auto& list = adjacency_[static_cast<std::size_t>(a)];
  return std::binary_search(list.begin(), list.end(), b);
}

std::optional<int> Graph::regular_degree() const {
  const int d = degree(0);
  for (Vertex v = 1; v < num_vertices_; ++v) {
    if (degree(v) != d) return std::nullopt;
  }
  return d;
}

int Graph::max_degree() const {
  int best = 0;
  for (Vertex v = 0; v < num_vertices_; ++v) best = std::max(best, degree(v));
  return best;
}

int Graph::min_degree() const {
  int best = degree(0);
  for (Vertex v = 1; v < num_vertices_; ++v) best = std::min(best, degree(v));
  return best;
}

Graph build_complete(int n) {
  if (n < 1) throw ValidationError("complete graph needs n >= 1");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < 2 * n; ++u) {
    for (Vertex v = u + 1; v < 2 * n; ++v) edges.push_back({u, v});
  }
  return Graph(2 * n, std::move(edges));
}

Graph build_cocktail_party(int n) {
  if (n < 2) throw ValidationError("cocktail party graph needs n >= 2");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < 2 * n; ++u) {
    for (Vertex v = u + 1; v < 2 * n; ++v) {
      if (u / 2 == v / 2) continue;
      edges.push_back({u, v});
    }
  }
  return Graph(2 * n, std::move(edges));
}

Graph build_random_regular(int n, int d, std::uint64_t seed) {
  const int num_vertices = 2 * n;
  if (n < 1 || d < 1) throw ValidationError("random regular graph needs n >= 1 and d >= 1");
  if (d >= num_vertices) {
    throw ValidationError("random regular graph needs d < 2n (d=" + std::to_string(d) +
                          ", 2n=" + std::to_string(num_vertices) + ")");
  }
  // 2n*d is always even; kept explicit for the odd-order case should it ever be allowed.
  if ((static_cast<long long>(num_vertices) * d) % 2 != 0) {
    throw ValidationError("random regular graph needs 2n*d even");
  }

  std::vector<Vertex> stubs;
  stubs.reserve(static_cast<std::size_t>(num_vertices) * static_cast<std::size_t>(d));
  for (Vertex v = 0; v < num_vertices; ++v) {
    for (int j = 0; j < d; ++j) stubs.push_back(v);
  }

  Rng rng = make_rng(seed, 0x7265677261706873ULL);
  const long long budget = 1000LL * d * n;
  std::vector<Edge> edges;
  std::vector<char> seen(static_cast<std::size_t>(num_vertices) * static_cast<std::size_t>(num_vertices));
  for (long long attempt = 0; attempt < budget; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    edges.clear();
    std::fill(seen.begin(), seen.end(), 0);
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      const Vertex a = stubs[i];
      const Vertex b = stubs[i + 1];
      if (a == b) {
        ok = false;
        break;
      }
      const Edge e = make_edge(a, b);
      auto& mark = seen[static_cast<std::size_t>(e.u) * static_cast<std::size_t>(num_vertices) +
                        static_cast<std::size_t>(e.v)];
      if (mark) {
        ok = false;
        break;
      }
      mark = 1;
      edges.push_back(e);
    }
    if (ok) return Graph(num_vertices, std::move(edges));
  }
  throw BudgetError("random regular graph generation failed after " + std::to_string(budget) +
                    " pairing attempts (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");
}

Graph build_petersen() {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < 5; ++i) {
    edges.push_back(make_edge(i, (i + 1) % 5));          // outer cycle
    edges.push_back(make_edge(i, i + 5));                // spokes
    edges.push_back(make_edge(5 + i, 5 + (i + 2) % 5));  // inner pentagram
  }
  return Graph(10, std::move(edges));
}

Graph pendant_augment(const Graph& g) {
  const auto d = g.regular_degree();
  if (!d) throw ValidationError("pendant augmentation needs a regular graph");
  if (*d < 3) throw ValidationError("pendant augmentation needs degree >= 3");
  const int hub = g.num_vertices() - 1;
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  edges.push_back({hub, hub + 1});
  edges.push_back({hub, hub + 2});
  return Graph(g.num_vertices() + 2, std::move(edges));
}

void check_vertex_set(const Graph& g, const VertexSet& s) {
  for (Vertex v : s) {
    if (!g.contains(v)) {
      throw ValidationError("vertex id " + std::to_string(v) + " outside [0, " +
                            std::to_string(g.num_vertices()) + ")");
    }
  }
}

namespace {

std::vector<char> membership(const Graph& g, const VertexSet& s) {
  check_vertex_set(g, s);
  std::vector<char> in(static_cast<std::size_t>(g.num_vertices()), 0);
  for (Vertex v : s) in[static_cast<std::size_t>(v)] = 1;
  return in;
}

}  // namespace

Graph induced_subgraph(const Graph& g, const VertexSet& s) {
  const auto in = membership(g, s);
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (in[static_cast<std::size_t>(e.u)] && in[static_cast<std::size_t>(e.v)]) edges.push_back(e);
  }
  return Graph(g.num_vertices(), std::move(edges));
}

VertexSet neighbors_of_set(const Graph& g, const VertexSet& s) {
  const auto in = membership(g, s);
  std::vector<char> hit(in.size(), 0);
  for (Vertex u : s) {
    for (Vertex v : g.neighbors(u)) {
      if (!in[static_cast<std::size_t>(v)]) hit[static_cast<std::size_t>(v)] = 1;
    }
  }
  VertexSet out;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (hit[static_cast<std::size_t>(v)]) out.push_back(v);
  }
  return out;
}

VertexSet closed_neighborhood_of_set(const Graph& g, const VertexSet& s) {
  check_vertex_set(g, s);
  std::vector<char> hit(static_cast<std::size_t>(g.num_vertices()), 0);
  for (Vertex u : s) {
    for (Vertex v : g.neighbors(u)) hit[static_cast<std::size_t>(v)] = 1;
  }
  VertexSet out;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (hit[static_cast<std::size_t>(v)]) out.push_back(v);
  }
  return out;
}

std::int64_t edge_count_between(const Graph& g, const VertexSet& s, const VertexSet& t) {
  const auto in_t = membership(g, t);
  check_vertex_set(g, s);
  std::int64_t count = 0;
  for (Vertex u : s) {
    for (Vertex v : g.neighbors(u)) count += in_t[static_cast<std::size_t>(v)];
  }
  return count;
}

std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

Graph parse_graph(std::istream& in, const std::string& source_name) {
  auto fail = [&](int line_no, const std::string& what) -> ValidationError {
    return ValidationError(source_name + ":" + std::to_string(line_no) + ": " + what);
  };

  std::string line;
  int line_no = 0;
  long long num_vertices = -1;
  long long num_edges = -1;
  std::vector<Edge> edges;
  std::vector<int> edge_line;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    long long a = 0;
    long long b = 0;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw fail(line_no, "expected two integers, got '" + line + "'");
    }
    if (num_vertices < 0) {
      if (a <= 0 || a % 2 != 0) throw fail(line_no, "vertex count must be positive and even");
      if (b < 0) throw fail(line_no, "edge count must be nonnegative");
      num_vertices = a;
      num_edges = b;
      continue;
    }
    if (a == b) throw fail(line_no, "self-loop " + std::to_string(a) + " " + std::to_string(b));
    if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices) {
      throw fail(line_no, "vertex id out of range [0, " + std::to_string(num_vertices) + ")");
    }
    edges.push_back(make_edge(static_cast<Vertex>(a), static_cast<Vertex>(b)));
    edge_line.push_back(line_no);
  }
  if (num_vertices < 0) throw fail(line_no, "missing header line");
  if (static_cast<long long>(edges.size()) != num_edges) {
    throw fail(line_no, "header declares " + std::to_string(num_edges) + " edges, found " +
                            std::to_string(edges.size()));
  }
  // Report duplicates against the line of the second occurrence.
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return edges[x] < edges[y]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (edges[order[i]] == edges[order[i - 1]]) {
      const auto& e = edges[order[i]];
      throw fail(edge_line[order[i]], "duplicate edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
  }
  return Graph(static_cast<int>(num_vertices), std::move(edges));
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file '" + path.string() + "'");
  return parse_graph(in, path.string());
}

void save_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write graph file '" + path.string() + "'");
  out << format_graph(g);
  if (!out) throw ValidationError("failed writing graph file '" + path.string() + "'");
}

std::string graph_fingerprint(const Graph& g) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : format_graph(g)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

}  // namespace expmatch
