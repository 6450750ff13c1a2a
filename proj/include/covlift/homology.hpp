#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "covlift/error.hpp"
#include "covlift/graph.hpp"
#include "covlift/perm.hpp"
#include "covlift/zpk.hpp"

namespace covlift {

using HomologyVector = std::vector<i64>;

// Dense integer matrix; products are overflow-checked.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static IntMatrix from_rows(const std::vector<std::vector<i64>>& rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) fail(Errc::invalid_argument, "ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  i64& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  i64 operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::vector<std::vector<i64>> to_rows() const {
    std::vector<std::vector<i64>> out(rows_, std::vector<i64>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
    return out;
  }

  ZpkMatrix to_zpk(const ZpkContext& ctx) const {
    ZpkMatrix m(ctx, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m.set_signed(i, j, (*this)(i, j));
    return m;
  }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols_ != y.rows_) fail(Errc::invalid_argument, "integer matrix shape mismatch");
    IntMatrix z(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t j = 0; j < y.cols_; ++j) {
        i64 s = 0;
        for (std::size_t t = 0; t < x.cols_; ++t) {
          i64 prod;
          if (__builtin_mul_overflow(x(i, t), y(t, j), &prod) || __builtin_add_overflow(s, prod, &s))
            fail(Errc::invalid_argument, "integer matrix product overflows 64 bits");
        }
        z(i, j) = s;
      }
    return z;
  }
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  // Fraction-free elimination; exact for the small matrices used here.
  i64 determinant() const {
    if (rows_ != cols_) fail(Errc::invalid_argument, "determinant of non-square matrix");
    const std::size_t n = rows_;
    if (n == 0) return 1;
    std::vector<__int128> a(a_.begin(), a_.end());
    auto at = [&](std::size_t i, std::size_t j) -> __int128& { return a[i * n + j]; };
    __int128 prev = 1;
    int sign = 1;
    for (std::size_t c = 0; c + 1 < n; ++c) {
      if (at(c, c) == 0) {
        std::size_t r = c + 1;
        while (r < n && at(r, c) == 0) ++r;
        if (r == n) return 0;
        for (std::size_t j = 0; j < n; ++j) std::swap(at(c, j), at(r, j));
        sign = -sign;
      }
      for (std::size_t i = c + 1; i < n; ++i)
        for (std::size_t j = c + 1; j < n; ++j) at(i, j) = (at(i, j) * at(c, c) - at(i, c) * at(c, j)) / prev;
      prev = at(c, c);
    }
    return static_cast<i64>(sign * at(n - 1, n - 1));
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<i64> a_;
};

using InducedMatrix = IntMatrix;

inline HomologyVector arc_homology_class(const SpanningTree& t, const Arc& a) {
  HomologyVector v(t.betti_number(), 0);
  auto [i, s] = t.cotree_position(a);
  if (i >= 0) v[static_cast<std::size_t>(i)] = s;
  return v;
}

inline HomologyVector walk_homology_class(const SpanningTree& t, const Walk& w) {
  if (w.vertices.empty()) fail(Errc::invalid_argument, "empty walk");
  HomologyVector v(t.betti_number(), 0);
  for (std::size_t i = 0; i + 1 < w.vertices.size(); ++i) {
    Arc a{w.vertices[i], w.vertices[i + 1]};
    if (!t.graph().has_edge(a.tail, a.head)) fail(Errc::invalid_argument, "walk uses a non-edge");
    auto [c, s] = t.cotree_position(a);
    if (c >= 0) v[static_cast<std::size_t>(c)] += s;
  }
  return v;
}

// Row i is the class of alpha applied to the fundamental loop of x_i.
inline InducedMatrix induced_matrix(const SpanningTree& t, const Automorphism& alpha) {
  const std::size_t b = t.betti_number();
  InducedMatrix S(b, b);
  for (std::size_t i = 0; i < b; ++i) {
    Walk loop = fundamental_loop(t, t.cotree_arcs()[i]);
    for (int& v : loop.vertices) v = alpha(v);
    HomologyVector h = walk_homology_class(t, loop);
    for (std::size_t j = 0; j < b; ++j) S(i, j) = h[j];
  }
  return S;
}

// S^beta = D * M_tau, where (M_tau)_{ij} = 1 iff i = tau(j).
struct TauFactorization {
  std::vector<int> signs;  // diagonal of D
  Permutation tau;         // on {0..b-1}
};

inline TauFactorization tau_factorize(const SpanningTree& t, const Automorphism& beta) {
  if (!preserves_tree(t, beta)) fail(Errc::not_tree_preserving, beta.perm().to_cycles() + " does not preserve the tree");
  InducedMatrix S = induced_matrix(t, beta);
  const std::size_t b = S.rows();
  std::vector<int> tau(b, -1), signs(b, 0);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      if (S(i, j) == 0) continue;
      if (signs[i] != 0 || (S(i, j) != 1 && S(i, j) != -1))
        fail(Errc::not_monomial, "induced matrix of " + beta.perm().to_cycles() + " is not signed-monomial");
      signs[i] = static_cast<int>(S(i, j));
      if (tau[j] != -1) fail(Errc::not_monomial, "induced matrix has two entries in one column");
      tau[j] = static_cast<int>(i);
    }
    if (signs[i] == 0) fail(Errc::not_monomial, "induced matrix has a zero row");
  }
  return {signs, Permutation(tau)};
}

// Elements of auts that preserve the tree and normalise the finite group G
// (given as a complete element list).
inline std::vector<Automorphism> aut_g_tree_subgroup(const std::vector<Automorphism>& auts,
                                                     const std::vector<Automorphism>& G, const SpanningTree& t) {
  std::set<Automorphism> gset(G.begin(), G.end());
  std::vector<Automorphism> out;
  for (const auto& beta : auts) {
    if (!preserves_tree(t, beta)) continue;
    Automorphism binv = beta.inverse();
    bool normal = true;
    for (const auto& g : G)
      if (!gset.count(compose(compose(beta, g), binv))) {
        normal = false;
        break;
      }
    if (normal) out.push_back(beta);
  }
  return out;
}

}  // namespace covlift
