#pragma once

// Aggregated sparsity pattern graph of a QCQP and the structural queries
// (edge signs, bipartiteness, components, cycle basis) used to pick an
// exactness condition. Vertices are 0-based here; the JSON layer adds 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qcqp_model.hpp"

namespace biparsdp {

/// Undirected edge with first < second.
struct Edge {
  int first = 0;
  int second = 0;

  Edge() = default;
  Edge(int a, int b) : first(std::min(a, b)), second(std::max(a, b)) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class SparsityGraph {
 public:
  explicit SparsityGraph(int n = 0) : adjacency_(static_cast<size_t>(n)) {}

  SparsityGraph(int n, const std::vector<Edge>& edges) : adjacency_(static_cast<size_t>(n)) {
    for (const Edge& e : edges) add_edge(e.first, e.second);
  }

  int n() const { return static_cast<int>(adjacency_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_[static_cast<size_t>(v)]; }

  bool has_edge(int a, int b) const {
    const auto& nb = adjacency_[static_cast<size_t>(a)];
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  /// Ignores self-loops and duplicates; keeps edges and neighbor lists sorted.
  void add_edge(int a, int b) {
    if (a == b || a < 0 || b < 0 || a >= n() || b >= n()) {
      if (a == b) return;
      throw Error("edge endpoint out of range");
    }
    if (has_edge(a, b)) return;
    Edge e(a, b);
    edges_.insert(std::lower_bound(edges_.begin(), edges_.end(), e), e);
    auto insert_sorted = [](std::vector<int>& v, int x) { v.insert(std::lower_bound(v.begin(), v.end(), x), x); };
    insert_sorted(adjacency_[static_cast<size_t>(a)], b);
    insert_sorted(adjacency_[static_cast<size_t>(b)], a);
  }

 private:
  std::vector<std::vector<int>> adjacency_;
  std::vector<Edge> edges_;
};

/// Edge (i,j) is present iff |Q^p_ij| > zero_tol for some p in [0, m].
inline SparsityGraph build_graph(const QcqpInstance& inst, double zero_tol = 0.0) {
  const int n = inst.n();
  SparsityGraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int p = 0; p <= inst.m(); ++p) {
        if (std::abs(inst.data(p)(i, j)) > zero_tol) {
          g.add_edge(i, j);
          break;
        }
      }
    }
  }
  return g;
}

using EdgeSigns = std::map<Edge, int>;

/// +1 if every Q^p_ij >= 0, -1 if every Q^p_ij <= 0, 0 for mixed signs.
inline int edge_sign(const QcqpInstance& inst, int i, int j) {
  bool any_pos = false;
  bool any_neg = false;
  for (int p = 0; p <= inst.m(); ++p) {
    const double v = inst.data(p)(i, j);
    any_pos = any_pos || v > 0.0;
    any_neg = any_neg || v < 0.0;
  }
  if (any_pos && any_neg) return 0;
  return any_neg ? -1 : 1;
}

inline EdgeSigns edge_signs(const QcqpInstance& inst, const SparsityGraph& graph) {
  EdgeSigns signs;
  for (const Edge& e : graph.edges()) signs[e] = edge_sign(inst, e.first, e.second);
  return signs;
}

struct BipartitionResult {
  bool bipartite = true;
  std::vector<int> left;
  std::vector<int> right;
  /// Closed walk v0, v1, ..., v_{k-1} (edge v_{k-1} -> v0 implied) of odd length k.
  std::vector<int> odd_cycle;
};

namespace detail {

/// BFS forest: parent (-1 at roots), depth, visit order, component id.
struct BfsForest {
  std::vector<int> parent;
  std::vector<int> depth;
  std::vector<int> component;
  std::vector<int> order;
  int component_count = 0;
};

inline BfsForest bfs_forest(const SparsityGraph& g) {
  const auto n = static_cast<size_t>(g.n());
  BfsForest f;
  f.parent.assign(n, -1);
  f.depth.assign(n, -1);
  f.component.assign(n, -1);
  for (int root = 0; root < g.n(); ++root) {
    if (f.depth[static_cast<size_t>(root)] >= 0) continue;
    const int comp = f.component_count++;
    std::deque<int> queue{root};
    f.depth[static_cast<size_t>(root)] = 0;
    f.component[static_cast<size_t>(root)] = comp;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      f.order.push_back(u);
      for (int v : g.neighbors(u)) {
        if (f.depth[static_cast<size_t>(v)] >= 0) continue;
        f.depth[static_cast<size_t>(v)] = f.depth[static_cast<size_t>(u)] + 1;
        f.parent[static_cast<size_t>(v)] = u;
        f.component[static_cast<size_t>(v)] = comp;
        queue.push_back(v);
      }
    }
  }
  return f;
}

/// Vertex sequence u -> ... -> lca -> ... -> v along tree paths. Closing the
/// walk with the non-tree edge (v, u) gives the fundamental cycle.
inline std::vector<int> tree_cycle(const BfsForest& f, int u, int v) {
  std::vector<int> from_u{u};
  std::vector<int> from_v{v};
  int a = u;
  int b = v;
  while (f.depth[static_cast<size_t>(a)] > f.depth[static_cast<size_t>(b)]) {
    a = f.parent[static_cast<size_t>(a)];
    from_u.push_back(a);
  }
  while (f.depth[static_cast<size_t>(b)] > f.depth[static_cast<size_t>(a)]) {
    b = f.parent[static_cast<size_t>(b)];
    from_v.push_back(b);
  }
  while (a != b) {
    a = f.parent[static_cast<size_t>(a)];
    b = f.parent[static_cast<size_t>(b)];
    from_u.push_back(a);
    from_v.push_back(b);
  }
  from_v.pop_back();  // lca already on from_u
  std::reverse(from_v.begin(), from_v.end());
  from_u.insert(from_u.end(), from_v.begin(), from_v.end());
  return from_u;
}

}  // namespace detail

/// BFS 2-coloring per component. Isolated vertices and component roots go
/// to the left part.
inline BipartitionResult bipartition(const SparsityGraph& g) {
  const detail::BfsForest f = detail::bfs_forest(g);
  BipartitionResult r;
  for (const Edge& e : g.edges()) {
    if ((f.depth[static_cast<size_t>(e.first)] - f.depth[static_cast<size_t>(e.second)]) % 2 == 0) {
      r.bipartite = false;
      r.odd_cycle = detail::tree_cycle(f, e.first, e.second);
      return r;
    }
  }
  for (int v = 0; v < g.n(); ++v) {
    (f.depth[static_cast<size_t>(v)] % 2 == 0 ? r.left : r.right).push_back(v);
  }
  return r;
}

/// Components ordered by smallest vertex; vertices sorted within each.
inline std::vector<std::vector<int>> connected_components(const SparsityGraph& g) {
  const detail::BfsForest f = detail::bfs_forest(g);
  std::vector<std::vector<int>> comps(static_cast<size_t>(f.component_count));
  for (int v = 0; v < g.n(); ++v) comps[static_cast<size_t>(f.component[static_cast<size_t>(v)])].push_back(v);
  return comps;
}

inline bool is_connected(const SparsityGraph& g) { return connected_components(g).size() <= 1; }

struct Cycle {
  std::vector<int> vertices;  // closed walk, last vertex adjacent to first
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (size_t i = 0; i < vertices.size(); ++i) out.emplace_back(vertices[i], vertices[(i + 1) % vertices.size()]);
    return out;
  }
  size_t length() const { return vertices.size(); }
};

using CycleBasis = std::vector<Cycle>;

/// Fundamental cycles of a BFS spanning forest, one per non-tree edge, in
/// edge order.
inline CycleBasis cycle_basis(const SparsityGraph& g) {
  const detail::BfsForest f = detail::bfs_forest(g);
  CycleBasis basis;
  for (const Edge& e : g.edges()) {
    const bool tree_edge = f.parent[static_cast<size_t>(e.second)] == e.first ||
                           f.parent[static_cast<size_t>(e.first)] == e.second;
    if (tree_edge) continue;
    basis.push_back({detail::tree_cycle(f, e.first, e.second)});
  }
  return basis;
}

inline bool is_forest(const SparsityGraph& g) { return cycle_basis(g).empty(); }

}  // namespace biparsdp
