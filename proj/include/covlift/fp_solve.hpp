#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covlift/error.hpp"
#include "covlift/zpk.hpp"

namespace covlift {

// Linear equations sum_j coef_j x_j = rhs over F_p.
class LinearSystemFp {
 public:
  LinearSystemFp(u64 p, std::size_t nvars) : p_(p), n_(nvars) {}

  std::size_t variable_count() const { return n_; }

  void add_equation(std::vector<u64> coef, u64 rhs) {
    if (coef.size() != n_) fail(Errc::invalid_argument, "equation width differs from variable count");
    for (u64& c : coef) c %= p_;
    rows_.push_back({std::move(coef), rhs % p_});
    reduced_ = false;
  }

  // Brings the system to reduced row echelon form; false when inconsistent.
  bool reduce() {
    if (reduced_) return consistent_;
    pivots_.clear();
    std::size_t r = 0;
    for (std::size_t c = 0; c < n_ && r < rows_.size(); ++c) {
      std::size_t piv = r;
      while (piv < rows_.size() && rows_[piv].coef[c] == 0) ++piv;
      if (piv == rows_.size()) continue;
      std::swap(rows_[r], rows_[piv]);
      u64 inv = detail::powmod(rows_[r].coef[c], p_ - 2, p_);
      scale(rows_[r], inv);
      for (std::size_t i = 0; i < rows_.size(); ++i)
        if (i != r && rows_[i].coef[c] != 0) axpy(rows_[i], rows_[r], rows_[i].coef[c]);
      pivots_.push_back(c);
      ++r;
    }
    consistent_ = true;
    for (std::size_t i = r; i < rows_.size(); ++i)
      if (rows_[i].rhs != 0) consistent_ = false;
    rows_.resize(r);
    reduced_ = true;
    return consistent_;
  }

  const std::vector<std::size_t>& pivots() {
    reduce();
    return pivots_;
  }

  std::vector<std::size_t> free_variables() {
    reduce();
    std::vector<char> is_piv(n_, 0);
    for (std::size_t c : pivots_) is_piv[c] = 1;
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < n_; ++c)
      if (!is_piv[c]) out.push_back(c);
    return out;
  }

  // Variables fixed by a row with a single nonzero coefficient.
  std::vector<std::pair<std::size_t, u64>> forced() {
    std::vector<std::pair<std::size_t, u64>> out;
    if (!reduce()) return out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      std::size_t nz = 0;
      for (u64 c : rows_[i].coef) nz += c != 0;
      if (nz == 1) out.push_back({pivots_[i], rows_[i].rhs});
    }
    return out;
  }

  // All solutions in lexicographic order of the free-variable values.
  std::vector<std::vector<u64>> solutions(u64 cap) {
    std::vector<std::vector<u64>> out;
    if (!reduce()) return out;
    auto fr = free_variables();
    u128 count = 1;
    for (std::size_t i = 0; i < fr.size(); ++i) {
      count *= p_;
      if (count > cap) fail(Errc::cap_exceeded, "linear solution space exceeds cap");
    }
    std::vector<u64> x(n_, 0);
    std::vector<u64> fv(fr.size(), 0);
    while (true) {
      for (std::size_t i = 0; i < fr.size(); ++i) x[fr[i]] = fv[i];
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        u64 v = rows_[i].rhs;
        for (std::size_t c : fr)
          if (rows_[i].coef[c]) v = sub(v, detail::mulmod(rows_[i].coef[c], x[c], p_));
        x[pivots_[i]] = v;
      }
      out.push_back(x);
      std::size_t i = fr.size();
      while (i > 0) {
        --i;
        if (++fv[i] < p_) break;
        fv[i] = 0;
        if (i == 0) return out;
      }
      if (fr.empty()) return out;
    }
  }

 private:
  struct Row {
    std::vector<u64> coef;
    u64 rhs;
  };
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
  void scale(Row& r, u64 f) const {
    for (u64& c : r.coef) c = detail::mulmod(c, f, p_);
    r.rhs = detail::mulmod(r.rhs, f, p_);
  }
  void axpy(Row& dst, const Row& src, u64 f) const {
    for (std::size_t j = 0; j < n_; ++j)
      if (src.coef[j]) dst.coef[j] = sub(dst.coef[j], detail::mulmod(f, src.coef[j], p_));
    dst.rhs = sub(dst.rhs, detail::mulmod(f, src.rhs, p_));
  }

  u64 p_;
  std::size_t n_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivots_;
  bool reduced_ = false;
  bool consistent_ = true;
};

struct LinTerm {
  std::size_t var;
  u64 coef;
};
struct QuadTerm {
  std::size_t a, b;
  u64 coef;
};
// constant + sum lin + sum quad = 0 over F_p.
struct QuadEquation {
  u64 constant = 0;
  std::vector<LinTerm> lin;
  std::vector<QuadTerm> quad;
};

// Systems of quadratic equations over F_p, solved either by exhaustive
// enumeration or by branching with linear propagation.
class QuadraticSystemFp {
 public:
  QuadraticSystemFp(u64 p, std::size_t nvars) : p_(p), n_(nvars) {}

  std::size_t variable_count() const { return n_; }
  const std::vector<QuadEquation>& equations() const { return eqs_; }
  void add(QuadEquation e) { eqs_.push_back(std::move(e)); }

  bool satisfied(const std::vector<u64>& x) const {
    for (const auto& e : eqs_)
      if (evaluate(e, x) != 0) return false;
    return true;
  }

  std::vector<std::vector<u64>> solve_exhaustive(u64 cap) const {
    u128 count = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      count *= p_;
      if (count > cap) fail(Errc::cap_exceeded, "exhaustive search space exceeds cap");
    }
    std::vector<std::vector<u64>> out;
    std::vector<u64> x(n_, 0);
    while (true) {
      if (satisfied(x)) out.push_back(x);
      std::size_t i = n_;
      while (i > 0) {
        --i;
        if (++x[i] < p_) break;
        x[i] = 0;
        if (i == 0) return out;
      }
      if (n_ == 0) return out;
    }
  }

  // Depth-first search: substitute the assignment, run Gaussian elimination
  // on the equations that became linear, fix forced variables, and branch on
  // the unassigned variable occurring in the most remaining quadratic terms.
  std::vector<std::vector<u64>> solve_propagate(u64 node_cap) const {
    std::vector<std::vector<u64>> out;
    std::vector<std::optional<u64>> assign(n_);
    u64 nodes = 0;
    dfs(assign, out, nodes, node_cap);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  u64 addm(u64 a, u64 b) const { return (a + b) % p_; }
  u64 mulm(u64 a, u64 b) const { return detail::mulmod(a, b, p_); }

  u64 evaluate(const QuadEquation& e, const std::vector<u64>& x) const {
    u64 v = e.constant % p_;
    for (const auto& t : e.lin) v = addm(v, mulm(t.coef, x[t.var]));
    for (const auto& t : e.quad) v = addm(v, mulm(t.coef, mulm(x[t.a], x[t.b])));
    return v;
  }

  void dfs(std::vector<std::optional<u64>>& assign, std::vector<std::vector<u64>>& out, u64& nodes,
           u64 node_cap) const {
    if (++nodes > node_cap) fail(Errc::cap_exceeded, "quadratic search exceeds node cap");
    std::vector<std::optional<u64>> local = assign;
    std::vector<std::size_t> occurrences;
    LinearSystemFp lin(p_, n_);
    while (true) {
      lin = LinearSystemFp(p_, n_);
      occurrences.assign(n_, 0);
      for (const auto& e : eqs_) {
        u64 c = e.constant % p_;
        std::vector<u64> coef(n_, 0);
        bool nonlinear = false;
        for (const auto& t : e.lin) {
          if (local[t.var]) c = addm(c, mulm(t.coef, *local[t.var]));
          else coef[t.var] = addm(coef[t.var], t.coef);
        }
        for (const auto& t : e.quad) {
          const auto& xa = local[t.a];
          const auto& xb = local[t.b];
          if (xa && xb) c = addm(c, mulm(t.coef, mulm(*xa, *xb)));
          else if (xa) coef[t.b] = addm(coef[t.b], mulm(t.coef, *xa));
          else if (xb) coef[t.a] = addm(coef[t.a], mulm(t.coef, *xb));
          else {
            nonlinear = true;
            ++occurrences[t.a];
            ++occurrences[t.b];
          }
        }
        if (nonlinear) continue;
        lin.add_equation(std::move(coef), (p_ - c) % p_);
      }
      for (std::size_t v = 0; v < n_; ++v)
        if (local[v]) {
          std::vector<u64> unit(n_, 0);
          unit[v] = 1;
          lin.add_equation(std::move(unit), *local[v]);
        }
      if (!lin.reduce()) return;
      bool progress = false;
      for (auto [v, val] : lin.forced())
        if (!local[v]) {
          local[v] = val;
          progress = true;
        }
      if (!progress) break;
    }
    std::vector<char> pivot(n_, 0);
    for (std::size_t c : lin.pivots()) pivot[c] = 1;
    std::size_t best = n_;
    bool any_quadratic = false;
    for (std::size_t v = 0; v < n_; ++v)
      if (!local[v] && occurrences[v] > 0) any_quadratic = true;
    if (!any_quadratic) {
      // Remaining system is linear in the unassigned variables.
      for (auto& sol : lin.solutions(node_cap)) {
        std::vector<u64> x(n_);
        for (std::size_t v = 0; v < n_; ++v) x[v] = local[v] ? *local[v] : sol[v];
        if (satisfied(x)) out.push_back(std::move(x));
      }
      return;
    }
    for (int pass = 0; pass < 2 && best == n_; ++pass)
      for (std::size_t v = 0; v < n_; ++v) {
        if (local[v] || occurrences[v] == 0) continue;
        if (pass == 0 && pivot[v]) continue;
        if (best == n_ || occurrences[v] > occurrences[best]) best = v;
      }
    for (u64 val = 0; val < p_; ++val) {
      local[best] = val;
      dfs(local, out, nodes, node_cap);
    }
  }

  u64 p_;
  std::size_t n_;
  std::vector<QuadEquation> eqs_;
};

}  // namespace covlift
