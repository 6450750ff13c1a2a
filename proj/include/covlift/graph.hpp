#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "covlift/error.hpp"
#include "covlift/perm.hpp"

namespace covlift {

struct Edge {
  int u = 0;
  int v = 0;  // u < v
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Arc {
  int tail = 0;
  int head = 0;
  Arc reversed() const { return {head, tail}; }
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Finite connected simple graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;

  Graph(int n, const std::vector<std::pair<int, int>>& edge_list) : n_(n) {
    if (n <= 0) fail(Errc::invalid_graph, "vertex count must be positive");
    adj_.assign(static_cast<std::size_t>(n), {});
    std::set<Edge> seen;
    for (auto [a, b] : edge_list) {
      if (a < 0 || b < 0 || a >= n || b >= n)
        fail(Errc::invalid_graph, "edge {" + std::to_string(a) + "," + std::to_string(b) + "} references a missing vertex");
      if (a == b) fail(Errc::invalid_graph, "loop at vertex " + std::to_string(a));
      Edge e{std::min(a, b), std::max(a, b)};
      if (!seen.insert(e).second)
        fail(Errc::invalid_graph, "duplicate edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "}");
    }
    edges_.assign(seen.begin(), seen.end());
    for (const Edge& e : edges_) {
      adj_[e.u].push_back(e.v);
      adj_[e.v].push_back(e.u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    std::vector<char> vis(adj_.size(), 0);
    std::vector<int> stack{0};
    vis[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj_[v])
        if (!vis[w]) {
          vis[w] = 1;
          ++reached;
          stack.push_back(w);
        }
    }
    if (reached != adj_.size()) fail(Errc::invalid_graph, "graph is disconnected");
  }

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }

  bool has_edge(int a, int b) const {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) return false;
    const auto& nb = adj_[a];
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  // Index into edges(), or -1.
  int edge_index(int a, int b) const {
    Edge e{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return -1;
    return static_cast<int>(it - edges_.begin());
  }

  std::size_t betti_number() const { return edges_.size() - static_cast<std::size_t>(n_) + 1; }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

inline Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges) { return Graph(n, edges); }

struct Walk {
  std::vector<int> vertices;

  Walk reversed() const {
    Walk w{vertices};
    std::reverse(w.vertices.begin(), w.vertices.end());
    return w;
  }
  bool closed() const { return !vertices.empty() && vertices.front() == vertices.back(); }
  bool valid_in(const Graph& g) const {
    if (vertices.empty()) return false;
    for (int v : vertices)
      if (v < 0 || v >= g.vertex_count()) return false;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
      if (!g.has_edge(vertices[i], vertices[i + 1])) return false;
    return true;
  }
};

// Concatenation; the first walk must end where the second starts.
inline Walk concat(const Walk& a, const Walk& b) {
  if (a.vertices.empty() || b.vertices.empty() || a.vertices.back() != b.vertices.front())
    fail(Errc::invalid_argument, "walks do not meet");
  Walk w{a.vertices};
  w.vertices.insert(w.vertices.end(), b.vertices.begin() + 1, b.vertices.end());
  return w;
}

class Automorphism {
 public:
  Automorphism(const Graph& g, Permutation p) : perm_(std::move(p)) {
    if (perm_.size() != static_cast<std::size_t>(g.vertex_count()))
      fail(Errc::not_automorphism, "permutation degree differs from vertex count");
    for (const Edge& e : g.edges())
      if (!g.has_edge(perm_(e.u), perm_(e.v)))
        fail(Errc::not_automorphism, perm_.to_cycles() + " does not map edge {" + std::to_string(e.u) + "," +
                                         std::to_string(e.v) + "} to an edge");
  }

  static Automorphism identity(std::size_t n) { return Automorphism(Permutation::identity(n)); }
  static bool is_automorphism(const Graph& g, const Permutation& p) {
    if (p.size() != static_cast<std::size_t>(g.vertex_count())) return false;
    for (const Edge& e : g.edges())
      if (!g.has_edge(p(e.u), p(e.v))) return false;
    return true;
  }

  const Permutation& perm() const { return perm_; }
  int operator()(int v) const { return perm_(v); }
  Automorphism inverse() const { return Automorphism(perm_.inverse()); }

  friend Automorphism compose(const Automorphism& a, const Automorphism& b) {
    return Automorphism(compose(a.perm_, b.perm_));
  }
  friend auto operator<=>(const Automorphism&, const Automorphism&) = default;
  friend bool operator==(const Automorphism&, const Automorphism&) = default;

 private:
  explicit Automorphism(Permutation p) : perm_(std::move(p)) {}
  Permutation perm_;
};

// Closure of the generators under composition, sorted by image list (identity
// first). Throws cap_exceeded once more than max_order elements appear.
inline std::vector<Automorphism> group_closure(const Graph& g, const std::vector<Automorphism>& gens,
                                               std::size_t max_order = 1u << 20) {
  std::set<Automorphism> seen{Automorphism::identity(static_cast<std::size_t>(g.vertex_count()))};
  std::vector<Automorphism> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<Automorphism> next;
    for (const auto& x : frontier)
      for (const auto& s : gens) {
        Automorphism y = compose(s, x);
        if (seen.insert(y).second) {
          if (seen.size() > max_order) fail(Errc::cap_exceeded, "group closure exceeds " + std::to_string(max_order));
          next.push_back(std::move(y));
        }
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

// Spanning tree with base vertex and ordered cotree arcs x_1..x_b.
class SpanningTree {
 public:
  SpanningTree(Graph g, int base, std::vector<char> in_tree, std::vector<Arc> cotree)
      : g_(std::move(g)), base_(base), in_tree_(std::move(in_tree)), cotree_(std::move(cotree)) {
    const int n = g_.vertex_count();
    if (base_ < 0 || base_ >= n) fail(Errc::invalid_argument, "base vertex out of range");
    std::size_t tree_count = static_cast<std::size_t>(std::count(in_tree_.begin(), in_tree_.end(), 1));
    if (tree_count != static_cast<std::size_t>(n - 1)) fail(Errc::invalid_graph, "tree edge count is not |V|-1");
    std::vector<int> uf(static_cast<std::size_t>(n));
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int x) {
      while (uf[x] != x) x = uf[x] = uf[uf[x]];
      return x;
    };
    for (std::size_t i = 0; i < in_tree_.size(); ++i) {
      if (!in_tree_[i]) continue;
      int a = find(g_.edges()[i].u), b = find(g_.edges()[i].v);
      if (a == b) fail(Errc::invalid_graph, "tree edges contain a cycle");
      uf[a] = b;
    }
    cotree_index_.assign(in_tree_.size(), -1);
    for (std::size_t i = 0; i < cotree_.size(); ++i) {
      int e = g_.edge_index(cotree_[i].tail, cotree_[i].head);
      if (e < 0) fail(Errc::invalid_graph, "cotree arc is not an arc of the graph");
      if (in_tree_[e]) fail(Errc::invalid_graph, "cotree arc lies on a tree edge");
      if (cotree_index_[e] >= 0) fail(Errc::invalid_graph, "cotree edge listed twice");
      cotree_index_[e] = static_cast<int>(i);
    }
    if (cotree_.size() != g_.betti_number()) fail(Errc::invalid_graph, "every cotree edge needs exactly one arc");
    parent_.assign(static_cast<std::size_t>(n), -1);
    std::vector<char> vis(static_cast<std::size_t>(n), 0);
    std::queue<int> q;
    q.push(base_);
    vis[base_] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : g_.neighbors(v))
        if (!vis[w] && in_tree_[g_.edge_index(v, w)]) {
          vis[w] = 1;
          parent_[w] = v;
          q.push(w);
        }
    }
  }

  const Graph& graph() const { return g_; }
  int base_vertex() const { return base_; }
  std::size_t betti_number() const { return cotree_.size(); }
  const std::vector<Arc>& cotree_arcs() const { return cotree_; }
  bool is_tree_edge(int a, int b) const {
    int e = g_.edge_index(a, b);
    return e >= 0 && in_tree_[e];
  }
  std::vector<Edge> tree_edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < in_tree_.size(); ++i)
      if (in_tree_[i]) out.push_back(g_.edges()[i]);
    return out;
  }
  int parent(int v) const { return parent_[static_cast<std::size_t>(v)]; }

  // Signed cotree index of an arc: {i, +1} for x_i, {i, -1} for its reverse,
  // {-1, 0} for tree arcs.
  std::pair<int, int> cotree_position(const Arc& a) const {
    int e = g_.edge_index(a.tail, a.head);
    if (e < 0) fail(Errc::invalid_argument, "not an arc of the graph");
    int i = cotree_index_[e];
    if (i < 0) return {-1, 0};
    return {i, cotree_[i] == a ? 1 : -1};
  }

 private:
  Graph g_;
  int base_;
  std::vector<char> in_tree_;
  std::vector<Arc> cotree_;
  std::vector<int> cotree_index_;
  std::vector<int> parent_;
};

// Without tree_edges the tree is a BFS tree from base (ascending neighbour
// order), or E minus the cotree edges when an arc list is supplied. Cotree
// arcs default to (min, max) orientation sorted by endpoints.
inline SpanningTree spanning_tree(const Graph& g, int base = 0,
                                  const std::optional<std::vector<Edge>>& tree_edges = std::nullopt,
                                  const std::optional<std::vector<Arc>>& cotree_arcs = std::nullopt) {
  const int n = g.vertex_count();
  if (base < 0 || base >= n) fail(Errc::invalid_argument, "base vertex out of range");
  std::vector<char> in_tree(g.edge_count(), 0);
  if (tree_edges) {
    for (const Edge& e : *tree_edges) {
      int idx = g.edge_index(e.u, e.v);
      if (idx < 0) fail(Errc::invalid_graph, "tree edge is not an edge of the graph");
      if (in_tree[idx]) fail(Errc::invalid_graph, "tree edge listed twice");
      in_tree[idx] = 1;
    }
  } else if (cotree_arcs) {
    std::fill(in_tree.begin(), in_tree.end(), 1);
    for (const Arc& a : *cotree_arcs) {
      int idx = g.edge_index(a.tail, a.head);
      if (idx < 0) fail(Errc::invalid_graph, "cotree arc is not an arc of the graph");
      in_tree[idx] = 0;
    }
  } else {
    std::vector<char> vis(static_cast<std::size_t>(n), 0);
    std::queue<int> q;
    q.push(base);
    vis[base] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : g.neighbors(v))
        if (!vis[w]) {
          vis[w] = 1;
          in_tree[g.edge_index(v, w)] = 1;
          q.push(w);
        }
    }
  }
  std::vector<Arc> cotree;
  if (cotree_arcs) {
    cotree = *cotree_arcs;
  } else {
    for (std::size_t i = 0; i < g.edges().size(); ++i)
      if (!in_tree[i]) cotree.push_back({g.edges()[i].u, g.edges()[i].v});
  }
  return SpanningTree(g, base, std::move(in_tree), std::move(cotree));
}

// The reduced tree walk W(v) from the base vertex to v.
inline Walk tree_walk(const SpanningTree& t, int v) {
  if (v < 0 || v >= t.graph().vertex_count()) fail(Errc::invalid_argument, "vertex out of range");
  Walk w;
  for (int x = v; x != -1; x = t.parent(x)) w.vertices.push_back(x);
  std::reverse(w.vertices.begin(), w.vertices.end());
  return w;
}

// L(u,v) = W(u) (u,v) W(v)^{-1}.
inline Walk fundamental_loop(const SpanningTree& t, const Arc& a) {
  if (!t.graph().has_edge(a.tail, a.head)) fail(Errc::invalid_argument, "not an arc of the graph");
  Walk w = tree_walk(t, a.tail);
  Walk back = tree_walk(t, a.head).reversed();
  w.vertices.insert(w.vertices.end(), back.vertices.begin(), back.vertices.end());
  return w;
}

inline bool preserves_tree(const SpanningTree& t, const Automorphism& a) {
  for (const Edge& e : t.tree_edges())
    if (!t.is_tree_edge(a(e.u), a(e.v))) return false;
  return true;
}

}  // namespace covlift
