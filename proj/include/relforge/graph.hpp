#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relforge/rational.hpp"

namespace relforge {

namespace detail {

// Plain union-find; the workhorse behind every connectivity query here.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), size_(n, 1), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    int root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) x = std::exchange(parent_[x], root);
    return root;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
  }

  int components() const { return components_; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  int components_;
};

}  // namespace detail

// Labeled multigraph: vertices 0..n-1 plus an edge multiset. Self-loops are
// rejected at construction so a serialized graph is exactly the graph a
// certificate talks about. Edges are stored sorted, endpoints normalized to
// a < b, which makes equal multigraphs serialize identically.
class Multigraph {
 public:
  using Edge = std::pair<int, int>;

  Multigraph(int n_vertices, std::vector<Edge> edges) : n_(n_vertices), edges_(std::move(edges)) {
    if (n_ < 1) throw std::invalid_argument("multigraph: needs at least one vertex");
    for (auto& [a, b] : edges_) {
      if (a > b) std::swap(a, b);
      if (a < 0 || b >= n_) throw std::invalid_argument("multigraph: endpoint out of range");
      if (a == b) throw std::invalid_argument("multigraph: self-loops are rejected");
    }
    std::sort(edges_.begin(), edges_.end());
  }

  int vertex_count() const { return n_; }
  int edge_count() const { return (int)edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool operator==(const Multigraph&) const = default;

 private:
  int n_;
  std::vector<Edge> edges_;
};

// Two-terminal graph: a multigraph with distinguished vertices u, v.
struct Gadget {
  Multigraph graph;
  int u, v;

  Gadget(Multigraph g, int u_, int v_) : graph(std::move(g)), u(u_), v(v_) {
    if (u == v) throw std::invalid_argument("gadget: terminals must differ");
    if (u < 0 || u >= graph.vertex_count() || v < 0 || v >= graph.vertex_count())
      throw std::invalid_argument("gadget: terminal out of range");
  }

  bool operator==(const Gadget&) const = default;
};

inline int component_count(const Multigraph& g) {
  detail::DisjointSets ds(g.vertex_count());
  for (const auto& [a, b] : g.edges()) ds.unite(a, b);
  return ds.components();
}

inline bool is_connected(const Multigraph& g) { return component_count(g) == 1; }

inline bool is_simple(const Multigraph& g) {
  const auto& e = g.edges();
  return std::adjacent_find(e.begin(), e.end()) == e.end();
}

inline Multigraph complete(int n) {
  if (n < 1) throw std::invalid_argument("complete: n >= 1 required");
  std::vector<Multigraph::Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  return Multigraph(n, std::move(edges));
}

// n >= 3 gives the n-cycle; n = 2 gives two vertices joined by two parallel
// edges (the cycle degenerates to a 2-bundle).
inline Multigraph cycle(int n) {
  if (n < 2) throw std::invalid_argument("cycle: n >= 2 required");
  std::vector<Multigraph::Edge> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Multigraph(n, std::move(edges));
}

// cycle(n) with every edge replaced by b parallel edges.
inline Multigraph bundle_cycle(int n, int b) {
  if (n < 2) throw std::invalid_argument("bundle_cycle: n >= 2 required");
  if (b < 1) throw std::invalid_argument("bundle_cycle: b >= 1 required");
  std::vector<Multigraph::Edge> edges;
  edges.reserve((std::size_t)n * b);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < b; ++j) edges.emplace_back(i, (i + 1) % n);
  return Multigraph(n, std::move(edges));
}

// The complete graph K_n with the edge {0,1} removed; terminals are the
// removed edge's endpoints. n = 2 gives two isolated terminals.
inline Gadget gadget_hn(int n) {
  if (n < 2) throw std::invalid_argument("gadget_hn: n >= 2 required");
  std::vector<Multigraph::Edge> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!(a == 0 && b == 1)) edges.emplace_back(a, b);
  return Gadget(Multigraph(n, std::move(edges)), 0, 1);
}

// Replaces each edge ab of g by a fresh copy of h, identifying h's terminals
// u, v with a, b. The copies share only their terminals. With require_simple,
// gadgets whose terminals are adjacent are rejected (nonadjacent terminals
// are what make the substituted graph simple even for multigraph g).
inline Multigraph edge_substitute(const Multigraph& g, const Gadget& h,
                                  bool require_simple = false) {
  if (!is_connected(g)) throw std::invalid_argument("edge_substitute: g must be connected");
  if (!is_connected(h.graph))
    throw std::invalid_argument("edge_substitute: gadget must be connected");
  if (require_simple) {
    for (const auto& [a, b] : h.graph.edges())
      if ((a == h.u && b == h.v) || (a == h.v && b == h.u))
        throw std::invalid_argument(
            "edge_substitute: adjacent terminals cannot guarantee a simple result");
  }
  int nh = h.graph.vertex_count();
  int inner = nh - 2;  // vertices of h other than the two terminals
  std::vector<Multigraph::Edge> edges;
  edges.reserve((std::size_t)g.edge_count() * h.graph.edge_count());
  int next_fresh = g.vertex_count();
  for (const auto& [a, b] : g.edges()) {
    // map h-vertex -> vertex of the result for this copy
    std::vector<int> map(nh);
    int fresh = next_fresh;
    for (int x = 0; x < nh; ++x) {
      if (x == h.u)
        map[x] = a;
      else if (x == h.v)
        map[x] = b;
      else
        map[x] = fresh++;
    }
    next_fresh += inner;
    for (const auto& [x, y] : h.graph.edges()) edges.emplace_back(map[x], map[y]);
  }
  return Multigraph(g.vertex_count() + g.edge_count() * inner, std::move(edges));
}

// All connected simple graphs on 2..n_max labeled vertices, deduplicated by
// edge set per vertex count (no isomorphism reduction). Guarded at 6.
inline std::vector<Multigraph> enumerate_connected_simple(int n_max) {
  if (n_max > 6) throw std::invalid_argument("enumerate_connected_simple: n_max <= 6 required");
  std::vector<Multigraph> out;
  for (int n = 2; n <= n_max; ++n) {
    std::vector<Multigraph::Edge> all;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) all.emplace_back(a, b);
    int m = (int)all.size();
    for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
      std::vector<Multigraph::Edge> edges;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1) edges.push_back(all[i]);
      Multigraph g(n, std::move(edges));
      if (is_connected(g)) out.push_back(std::move(g));
    }
  }
  return out;
}

// --- text format ------------------------------------------------------
//
// line 1: "n m"; then m lines "a b" with 0 <= a < b < n (parallel edges
// repeat a line); an optional final line "terminals u v" marks a gadget.
// LF line endings, no trailing spaces.

inline std::string graph_to_text(const Multigraph& g) {
  std::string out = std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "\n";
  for (const auto& [a, b] : g.edges()) out += std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

inline std::string gadget_to_text(const Gadget& h) {
  return graph_to_text(h.graph) + "terminals " + std::to_string(h.u) + " " +
         std::to_string(h.v) + "\n";
}

struct ParsedGraph {
  Multigraph graph;
  std::optional<std::pair<int, int>> terminals;

  Gadget gadget() const {
    if (!terminals) throw std::invalid_argument("parsed graph has no terminals line");
    return Gadget(graph, terminals->first, terminals->second);
  }
};

inline ParsedGraph parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw FormatError(std::string("graph text: missing ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  auto parse_two_ints = [](const std::string& s, const char* what) {
    std::istringstream ls(s);
    long a, b;
    std::string extra;
    if (!(ls >> a >> b) || (ls >> extra))
      throw FormatError(std::string("graph text: malformed ") + what + " line: '" + s + "'");
    return std::pair<long, long>(a, b);
  };

  auto [n, m] = parse_two_ints(next_line("header"), "header");
  if (n < 1 || m < 0) throw FormatError("graph text: bad vertex/edge counts");
  std::vector<Multigraph::Edge> edges;
  edges.reserve(m);
  for (long i = 0; i < m; ++i) {
    auto [a, b] = parse_two_ints(next_line("edge"), "edge");
    if (a < 0 || b < 0 || a >= n || b >= n || a >= b)
      throw FormatError("graph text: edge endpoints must satisfy 0 <= a < b < n");
    edges.emplace_back((int)a, (int)b);
  }
  std::optional<std::pair<int, int>> terminals;
  if (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tag;
    long u, v;
    std::string extra;
    if (!(ls >> tag >> u >> v) || tag != "terminals" || (ls >> extra))
      throw FormatError("graph text: trailing content is not a terminals line");
    if (u < 0 || v < 0 || u >= n || v >= n || u == v)
      throw FormatError("graph text: bad terminals");
    terminals = {(int)u, (int)v};
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) throw FormatError("graph text: content after terminals line");
    }
  }
  return ParsedGraph{Multigraph((int)n, std::move(edges)), terminals};
}

}  // namespace relforge
