#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "covlift/error.hpp"
#include "covlift/perm.hpp"

namespace covlift {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

// The ring Z/p^k.
class ZpkContext {
 public:
  ZpkContext(u64 p, unsigned k) : p_(p), k_(k) {
    if (!is_prime(p)) fail(Errc::invalid_argument, std::to_string(p) + " is not prime");
    if (k == 0) fail(Errc::invalid_argument, "exponent must be positive");
    pow_.push_back(1);
    for (unsigned i = 0; i < k; ++i) {
      u128 next = static_cast<u128>(pow_.back()) * p;
      if (next > static_cast<u128>(UINT64_MAX)) fail(Errc::invalid_argument, "p^k does not fit in 64 bits");
      pow_.push_back(static_cast<u64>(next));
    }
  }

  u64 p() const { return p_; }
  unsigned k() const { return k_; }
  u64 modulus() const { return pow_[k_]; }
  // p^r for 0 <= r <= k.
  u64 pow_p(unsigned r) const { return pow_.at(r); }

  u64 reduce(i64 x) const {
    i64 m = static_cast<i64>(modulus());
    if (modulus() > static_cast<u64>(INT64_MAX)) {
      return x >= 0 ? static_cast<u64>(x) % modulus() : modulus() - (static_cast<u64>(-(x + 1)) % modulus()) - 1;
    }
    i64 r = x % m;
    return static_cast<u64>(r < 0 ? r + m : r);
  }
  u64 add(u64 a, u64 b) const { return a >= modulus() - b ? a - (modulus() - b) : a + b; }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : modulus() - (b - a); }
  u64 neg(u64 a) const { return a == 0 ? 0 : modulus() - a; }
  u64 mul(u64 a, u64 b) const { return detail::mulmod(a, b, modulus()); }

  unsigned degree(u64 x) const {
    if (x == 0) return k_;
    unsigned r = 0;
    while (x % p_ == 0) {
      x /= p_;
      ++r;
    }
    return r;
  }

  u64 inverse(u64 x) const {
    if (x % p_ == 0) fail(Errc::non_unit, std::to_string(x) + " is not a unit mod " + std::to_string(modulus()));
    __int128 a = x, b = modulus(), s0 = 1, s1 = 0;
    while (b) {
      __int128 q = a / b;
      a -= q * b;
      std::swap(a, b);
      s0 -= q * s1;
      std::swap(s0, s1);
    }
    __int128 m = modulus();
    s0 %= m;
    if (s0 < 0) s0 += m;
    return static_cast<u64>(s0);
  }

  friend bool operator==(const ZpkContext& a, const ZpkContext& b) { return a.p_ == b.p_ && a.k_ == b.k_; }

 private:
  u64 p_;
  unsigned k_;
  std::vector<u64> pow_;
};

inline unsigned p_degree(u64 x, const ZpkContext& ctx) { return ctx.degree(x % ctx.modulus()); }
inline u64 unit_inverse(u64 x, const ZpkContext& ctx) { return ctx.inverse(x % ctx.modulus()); }

class ZpkMatrix {
 public:
  ZpkMatrix(ZpkContext ctx, std::size_t rows, std::size_t cols)
      : ctx_(std::move(ctx)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static ZpkMatrix identity(const ZpkContext& ctx, std::size_t n) {
    ZpkMatrix m(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1 % ctx.modulus();
    return m;
  }

  static ZpkMatrix from_rows(const ZpkContext& ctx, const std::vector<std::vector<i64>>& rows) {
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    ZpkMatrix m(ctx, rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) fail(Errc::invalid_argument, "ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m.a_[i * c + j] = ctx.reduce(rows[i][j]);
    }
    return m;
  }

  // (M_pi)_{ij} = 1 iff i = pi(j); M_pi M_sigma = M_{pi o sigma}.
  static ZpkMatrix permutation(const ZpkContext& ctx, const Permutation& pi) {
    std::size_t n = pi.size();
    ZpkMatrix m(ctx, n, n);
    for (std::size_t j = 0; j < n; ++j) m.a_[static_cast<std::size_t>(pi(static_cast<int>(j))) * n + j] = 1 % ctx.modulus();
    return m;
  }

  const ZpkContext& ctx() const { return ctx_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  u64 operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, u64 v) { a_[i * cols_ + j] = v % ctx_.modulus(); }
  void set_signed(std::size_t i, std::size_t j, i64 v) { a_[i * cols_ + j] = ctx_.reduce(v); }

  std::vector<u64> row(std::size_t i) const { return {a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_}; }
  std::vector<std::vector<u64>> to_rows() const {
    std::vector<std::vector<u64>> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  bool is_zero() const { return std::all_of(a_.begin(), a_.end(), [](u64 x) { return x == 0; }); }

  // Same integer entries read in another Z/p^r.
  ZpkMatrix with_context(const ZpkContext& other) const {
    if (other.p() != ctx_.p()) fail(Errc::invalid_argument, "context change across primes");
    ZpkMatrix m(other, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] % other.modulus();
    return m;
  }

  ZpkMatrix transpose() const {
    ZpkMatrix t(ctx_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.a_[j * rows_ + i] = a_[i * cols_ + j];
    return t;
  }

  void swap_rows(std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(a_[r1 * cols_ + j], a_[r2 * cols_ + j]);
  }
  void swap_cols(std::size_t c1, std::size_t c2) {
    if (c1 == c2) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap(a_[i * cols_ + c1], a_[i * cols_ + c2]);
  }
  void scale_row(std::size_t r, u64 f) {
    for (std::size_t j = 0; j < cols_; ++j) a_[r * cols_ + j] = ctx_.mul(a_[r * cols_ + j], f);
  }
  // row dst -= f * row src
  void sub_row(std::size_t dst, std::size_t src, u64 f) {
    if (f == 0) return;
    for (std::size_t j = 0; j < cols_; ++j)
      a_[dst * cols_ + j] = ctx_.sub(a_[dst * cols_ + j], ctx_.mul(f, a_[src * cols_ + j]));
  }
  // col dst -= f * col src
  void sub_col(std::size_t dst, std::size_t src, u64 f) {
    if (f == 0) return;
    for (std::size_t i = 0; i < rows_; ++i)
      a_[i * cols_ + dst] = ctx_.sub(a_[i * cols_ + dst], ctx_.mul(f, a_[i * cols_ + src]));
  }

  friend ZpkMatrix operator*(const ZpkMatrix& x, const ZpkMatrix& y) {
    if (!(x.ctx_ == y.ctx_) || x.cols_ != y.rows_) fail(Errc::invalid_argument, "matrix product shape or ring mismatch");
    ZpkMatrix z(x.ctx_, x.rows_, y.cols_);
    const u64 m = x.ctx_.modulus();
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t t = 0; t < x.cols_; ++t) {
        u64 f = x.a_[i * x.cols_ + t];
        if (f == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) {
          u64 v = y.a_[t * y.cols_ + j];
          if (v) z.a_[i * z.cols_ + j] = static_cast<u64>((static_cast<u128>(f) * v + z.a_[i * z.cols_ + j]) % m);
        }
      }
    return z;
  }
  friend ZpkMatrix operator+(const ZpkMatrix& x, const ZpkMatrix& y) {
    if (!(x.ctx_ == y.ctx_) || x.rows_ != y.rows_ || x.cols_ != y.cols_) fail(Errc::invalid_argument, "matrix sum shape mismatch");
    ZpkMatrix z = x;
    for (std::size_t i = 0; i < z.a_.size(); ++i) z.a_[i] = x.ctx_.add(x.a_[i], y.a_[i]);
    return z;
  }
  friend ZpkMatrix operator-(const ZpkMatrix& x, const ZpkMatrix& y) {
    if (!(x.ctx_ == y.ctx_) || x.rows_ != y.rows_ || x.cols_ != y.cols_) fail(Errc::invalid_argument, "matrix difference shape mismatch");
    ZpkMatrix z = x;
    for (std::size_t i = 0; i < z.a_.size(); ++i) z.a_[i] = x.ctx_.sub(x.a_[i], y.a_[i]);
    return z;
  }
  friend bool operator==(const ZpkMatrix& x, const ZpkMatrix& y) {
    return x.ctx_ == y.ctx_ && x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }
  // Row-major lexicographic order on entries (same ring and shape assumed).
  friend bool operator<(const ZpkMatrix& x, const ZpkMatrix& y) { return x.a_ < y.a_; }

  const std::vector<u64>& data() const { return a_; }

 private:
  ZpkContext ctx_;
  std::size_t rows_, cols_;
  std::vector<u64> a_;
};

// Inverse of a square matrix; throws singular when it does not exist. Over the
// local ring a column of an invertible matrix always contains a unit.
inline ZpkMatrix inverse(const ZpkMatrix& x) {
  if (x.rows() != x.cols()) fail(Errc::singular, "non-square matrix");
  const auto& ctx = x.ctx();
  std::size_t n = x.rows();
  ZpkMatrix a = x, inv = ZpkMatrix::identity(ctx, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i)
      if (a(i, c) % ctx.p() != 0) {
        piv = i;
        break;
      }
    if (piv == n) fail(Errc::singular, "matrix is not invertible");
    a.swap_rows(c, piv);
    inv.swap_rows(c, piv);
    u64 f = ctx.inverse(a(c, c));
    a.scale_row(c, f);
    inv.scale_row(c, f);
    for (std::size_t i = 0; i < n; ++i)
      if (i != c && a(i, c) != 0) {
        u64 g = a(i, c);
        a.sub_row(i, c, g);
        inv.sub_row(i, c, g);
      }
  }
  return inv;
}

inline bool is_invertible(const ZpkMatrix& x) {
  if (x.rows() != x.cols()) return false;
  try {
    (void)inverse(x);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Entrywise image under Z/p^k -> Z/p^r.
inline ZpkMatrix mod_reduce(const ZpkMatrix& x, unsigned r) {
  if (r == 0 || r > x.ctx().k()) fail(Errc::precondition, "target exponent must lie in [1, k]");
  return x.with_context(ZpkContext(x.ctx().p(), r));
}

struct NormalFormResult {
  ZpkMatrix Q;   // n x n
  ZpkMatrix S;   // m x m
  ZpkMatrix X0;  // Q X S
  std::vector<unsigned> degrees;  // length min(n, m), nondecreasing, k past the rank
};

struct StructuredNormalForm {
  ZpkMatrix Y;            // n x n
  ZpkMatrix Sprime;       // m x m, unit upper triangular
  Permutation omega;      // columns: S = M_omega * Sprime
  ZpkMatrix X0;
  std::vector<unsigned> degrees;
};

// Diagonalisation by elementary operations. The pivot is an entry of minimal
// p-degree in the remaining minor; ties go to the smallest (row, col).
inline StructuredNormalForm normal_form_structured(const ZpkMatrix& x) {
  const auto& ctx = x.ctx();
  const std::size_t n = x.rows(), m = x.cols(), d = std::min(n, m);
  ZpkMatrix a = x, Y = ZpkMatrix::identity(ctx, n), Sp = ZpkMatrix::identity(ctx, m);
  std::vector<int> om(m);
  for (std::size_t j = 0; j < m; ++j) om[j] = static_cast<int>(j);
  std::vector<unsigned> deg(d, ctx.k());
  std::size_t rank = 0;
  for (std::size_t t = 0; t < d; ++t) {
    unsigned best = ctx.k();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < n; ++i)
      for (std::size_t j = t; j < m; ++j) {
        unsigned e = ctx.degree(a(i, j));
        if (e < best) {
          best = e;
          bi = i;
          bj = j;
        }
      }
    if (best == ctx.k()) break;
    a.swap_rows(t, bi);
    Y.swap_rows(t, bi);
    a.swap_cols(t, bj);
    std::swap(om[t], om[bj]);
    const u64 pd = ctx.pow_p(best);
    u64 unit = ctx.inverse(a(t, t) / pd);
    a.scale_row(t, unit);
    Y.scale_row(t, unit);
    for (std::size_t i = t + 1; i < n; ++i) {
      u64 f = a(i, t) / pd;
      a.sub_row(i, t, f);
      Y.sub_row(i, t, f);
    }
    deg[t] = best;
    rank = t + 1;
  }
  for (std::size_t t = 0; t < rank; ++t) {
    const u64 pd = ctx.pow_p(deg[t]);
    for (std::size_t j = t + 1; j < m; ++j) {
      u64 f = a(t, j) / pd;
      a.sub_col(j, t, f);
      Sp.sub_col(j, t, f);
    }
  }
  // Column swaps were applied as right factors: (t bj) composed on the right.
  return {std::move(Y), std::move(Sp), Permutation(om), std::move(a), std::move(deg)};
}

inline NormalFormResult normal_form(const ZpkMatrix& x) {
  auto s = normal_form_structured(x);
  ZpkMatrix S = ZpkMatrix::permutation(x.ctx(), s.omega) * s.Sprime;
  return {std::move(s.Y), std::move(S), std::move(s.X0), std::move(s.degrees)};
}

// Subgroup <P Q omega> of (Z/p^k)^m with P = diag(p^{r_1}, ..., p^{r_l}).
struct SubgroupForm {
  ZpkContext ctx;
  std::size_t m = 0;
  std::size_t l = 0;
  std::vector<unsigned> r;  // length l, nondecreasing, each < k
  ZpkMatrix Q;              // m x m
  Permutation omega;

  // r padded with k up to length m.
  std::vector<unsigned> padded_degrees() const {
    std::vector<unsigned> out = r;
    out.resize(m, ctx.k());
    return out;
  }
  ZpkMatrix q_omega() const { return Q * ZpkMatrix::permutation(ctx, omega); }
  // l x m generator matrix P Q omega.
  ZpkMatrix generators() const {
    ZpkMatrix qo = q_omega();
    ZpkMatrix g(ctx, l, m);
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = 0; j < m; ++j) g.set(i, j, ctx.mul(ctx.pow_p(r[i]), qo(i, j)));
    return g;
  }
  // log_p of the subgroup order.
  unsigned log_order() const {
    unsigned s = 0;
    for (unsigned x : r) s += ctx.k() - x;
    return s;
  }
};

inline SubgroupForm subgroup_canonical_form(const ZpkMatrix& gens) {
  const auto& ctx = gens.ctx();
  const std::size_t m = gens.cols();
  const unsigned k = ctx.k();
  auto nf = normal_form_structured(gens);
  std::size_t l = 0;
  while (l < nf.degrees.size() && nf.degrees[l] < k) ++l;
  std::vector<unsigned> R(m, k);
  for (std::size_t i = 0; i < l; ++i) R[i] = nf.degrees[i];
  ZpkMatrix Q = inverse(nf.Sprime);
  for (std::size_t i = l; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) Q.set(i, j, i == j ? 1 : 0);
  for (std::size_t i = 0; i < l; ++i) {
    const u64 mod_i = ctx.pow_p(k - R[i]);
    for (std::size_t j = i + 1; j < m; ++j) {
      const u64 bound = ctx.pow_p(R[j] - R[i]);
      const u64 s = Q(i, j) % mod_i;
      const u64 q = s / bound;
      if (q != 0) Q.sub_row(i, j, ctx.mul(q, bound));
    }
    for (std::size_t j = i + 1; j < m; ++j) Q.set(i, j, Q(i, j) % mod_i);
  }
  std::vector<unsigned> r(R.begin(), R.begin() + static_cast<std::ptrdiff_t>(l));
  return SubgroupForm{ctx, m, l, std::move(r), std::move(Q), nf.omega.inverse()};
}

// <P M> = <P M'> for P = diag(p^{r_i}); r may be shorter than m (padded with k).
inline bool p_equivalent(const ZpkMatrix& M, const ZpkMatrix& Mprime, const std::vector<unsigned>& r) {
  const auto& ctx = M.ctx();
  const std::size_t m = M.rows();
  if (M.cols() != m || Mprime.rows() != m || Mprime.cols() != m) fail(Errc::invalid_argument, "p_equivalent needs square matrices");
  if (r.size() > m) fail(Errc::invalid_argument, "degree vector longer than matrix size");
  if (!is_invertible(M)) fail(Errc::singular, "first matrix is singular");
  std::vector<unsigned> R = r;
  R.resize(m, ctx.k());
  ZpkMatrix D = M * inverse(Mprime);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (R[j] > R[i] && ctx.degree(D(i, j)) < R[j] - R[i]) return false;
  return true;
}

inline bool same_subgroup(const SubgroupForm& a, const SubgroupForm& b) {
  if (!(a.ctx == b.ctx) || a.m != b.m || a.r != b.r) return false;
  return p_equivalent(a.q_omega(), b.q_omega(), a.r);
}

// Image of a subgroup under right multiplication by an m x m matrix.
inline SubgroupForm subgroup_image(const SubgroupForm& f, const ZpkMatrix& S) {
  if (f.l == 0) return subgroup_canonical_form(ZpkMatrix(f.ctx, 0, f.m));
  return subgroup_canonical_form(f.generators() * S);
}

// Every element of the subgroup, sorted.
inline std::vector<std::vector<u64>> span_enumerate(const SubgroupForm& f, u64 cap = 1000000) {
  const auto& ctx = f.ctx;
  u128 size = 1;
  for (unsigned x : f.r) {
    size *= ctx.pow_p(ctx.k() - x);
    if (size > cap) fail(Errc::cap_exceeded, "subgroup larger than enumeration cap");
  }
  ZpkMatrix g = f.generators();
  std::vector<std::vector<u64>> out;
  out.reserve(static_cast<std::size_t>(size));
  std::vector<u64> coef(f.l, 0);
  while (true) {
    std::vector<u64> v(f.m, 0);
    for (std::size_t i = 0; i < f.l; ++i)
      if (coef[i])
        for (std::size_t j = 0; j < f.m; ++j) v[j] = ctx.add(v[j], ctx.mul(coef[i], g(i, j)));
    out.push_back(std::move(v));
    std::size_t i = 0;
    while (i < f.l) {
      if (++coef[i] < ctx.pow_p(ctx.k() - f.r[i])) break;
      coef[i] = 0;
      ++i;
    }
    if (i == f.l) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace covlift
