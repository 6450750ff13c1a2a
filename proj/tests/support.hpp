#pragma once

// Independent helpers shared by the test suites: brute-force span
// enumeration, girth by BFS, small graph families and a seeded RNG.

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "covlift/covlift.hpp"

namespace covlift::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240917);
  return g;
}

inline u64 uniform(u64 lo, u64 hi) { return std::uniform_int_distribution<u64>(lo, hi)(rng()); }

inline ZpkMatrix random_matrix(const ZpkContext& ctx, std::size_t n, std::size_t m) {
  ZpkMatrix x(ctx, n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) x.set(i, j, uniform(0, ctx.modulus() - 1));
  return x;
}

// Random matrix whose entries carry a random p-adic valuation, so that
// nontrivial degree patterns show up often.
inline ZpkMatrix random_layered_matrix(const ZpkContext& ctx, std::size_t n, std::size_t m) {
  ZpkMatrix x(ctx, n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      unsigned d = static_cast<unsigned>(uniform(0, ctx.k()));
      x.set(i, j, ctx.mul(ctx.pow_p(d), uniform(0, ctx.modulus() - 1)));
    }
  return x;
}

inline ZpkMatrix random_invertible(const ZpkContext& ctx, std::size_t n) {
  while (true) {
    ZpkMatrix x = random_matrix(ctx, n, n);
    if (is_invertible(x)) return x;
  }
}

// All integer combinations of the rows of g, reduced mod p^k, as sorted
// row-major tuples. Independent of the normal-form code.
inline std::set<std::vector<u64>> brute_span(const ZpkMatrix& g) {
  const auto& ctx = g.ctx();
  const u64 m = ctx.modulus();
  std::set<std::vector<u64>> span{std::vector<u64>(g.cols(), 0)};
  std::vector<std::vector<u64>> frontier{std::vector<u64>(g.cols(), 0)};
  while (!frontier.empty()) {
    std::vector<std::vector<u64>> next;
    for (const auto& v : frontier)
      for (std::size_t i = 0; i < g.rows(); ++i) {
        std::vector<u64> w(v);
        for (std::size_t j = 0; j < g.cols(); ++j) w[j] = (w[j] + g(i, j)) % m;
        if (span.insert(w).second) next.push_back(std::move(w));
      }
    frontier = std::move(next);
  }
  return span;
}

inline std::size_t girth(const Graph& g) {
  std::size_t best = SIZE_MAX;
  for (int s = 0; s < g.vertex_count(); ++s) {
    std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1), par(dist.size(), -1);
    std::queue<int> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          par[w] = v;
          q.push(w);
        } else if (par[v] != w) {
          best = std::min(best, static_cast<std::size_t>(dist[v] + dist[w] + 1));
        }
      }
    }
  }
  return best;
}

inline Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline Graph k4() { return Graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }
// C_4 plus the chord {0,2}: the smallest simple graph with b = 2.
inline Graph c4_chord() { return Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}}); }

// Every automorphism, by brute force over all vertex permutations.
inline std::vector<Automorphism> all_automorphisms(const Graph& g) {
  std::vector<Automorphism> out;
  std::vector<int> v(static_cast<std::size_t>(g.vertex_count()));
  std::iota(v.begin(), v.end(), 0);
  do {
    bool ok = true;
    for (const Edge& e : g.edges())
      if (!g.has_edge(v[static_cast<std::size_t>(e.u)], v[static_cast<std::size_t>(e.v)])) {
        ok = false;
        break;
      }
    if (ok) out.emplace_back(g, Permutation(v));
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

inline std::vector<Automorphism> hgens(const PetersenData& P) { return {P.alphas[0], P.alphas[1], P.alphas[2]}; }

}  // namespace covlift::testing
