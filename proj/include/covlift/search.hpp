#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "covlift/error.hpp"
#include "covlift/fp_solve.hpp"
#include "covlift/graph.hpp"
#include "covlift/homology.hpp"
#include "covlift/perm.hpp"
#include "covlift/zpk.hpp"

namespace covlift {

struct SearchCaps {
  u64 exhaustive_limit = u64{1} << 20;  // largest Theta space enumerated directly
  u64 node_cap = 20'000'000;            // branching nodes per quadratic system
  u64 candidate_cap = 1'000'000;        // candidate Q matrices alive at any level
};

// (p; k, l; r_1..r_l; Q, omega). Indices are 0-based internally.
struct AdmissibleSolution {
  u64 p;
  unsigned k;
  std::vector<unsigned> r;  // length l
  ZpkMatrix Q;              // b x b over Z/p^k
  Permutation omega;        // on {0..b-1}

  std::size_t b() const { return Q.rows(); }
  std::size_t l() const { return r.size(); }
  std::vector<unsigned> padded_degrees() const {
    std::vector<unsigned> R = r;
    R.resize(b(), k);
    return R;
  }
  std::size_t i0() const { return static_cast<std::size_t>(std::count(r.begin(), r.end(), 0u)); }
  SubgroupForm subgroup() const { return SubgroupForm{Q.ctx(), b(), l(), r, Q, omega}; }

  friend bool operator==(const AdmissibleSolution& a, const AdmissibleSolution& b) {
    return a.p == b.p && a.k == b.k && a.r == b.r && a.Q == b.Q && a.omega == b.omega;
  }
};

// Ordering used for canonical representatives: omega's image list, then Q.
inline bool canonical_less(const AdmissibleSolution& a, const AdmissibleSolution& b) {
  if (a.omega != b.omega) return a.omega.images() < b.omega.images();
  return a.Q.data() < b.Q.data();
}

inline AdmissibleSolution trivial_solution(u64 p, unsigned k, std::size_t b) {
  ZpkContext ctx(p, k);
  return {p, k, {}, ZpkMatrix::identity(ctx, b), Permutation::identity(b)};
}

// M_omega S M_omega^{-1}: entry (i,j) is S(omega^{-1}(i), omega^{-1}(j)).
inline ZpkMatrix conjugate_by(const IntMatrix& S, const Permutation& omega, const ZpkContext& ctx) {
  const std::size_t b = S.rows();
  Permutation inv = omega.inverse();
  ZpkMatrix T(ctx, b, b);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) T.set_signed(i, j, S(static_cast<std::size_t>(inv(static_cast<int>(i))),
                                                          static_cast<std::size_t>(inv(static_cast<int>(j)))));
  return T;
}

// deg_p(M_ij) >= R_j - R_i for every pair with R_j > R_i.
inline bool degree_condition(const ZpkMatrix& M, const std::vector<unsigned>& R) {
  const auto& ctx = M.ctx();
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (R[j] > R[i] && ctx.degree(M(i, j)) < std::min(R[j] - R[i], ctx.k())) return false;
  return true;
}

inline bool well_formed(const AdmissibleSolution& s) {
  const auto& ctx = s.Q.ctx();
  if (ctx.p() != s.p || ctx.k() != s.k || s.Q.cols() != s.b() || s.omega.size() != s.b()) return false;
  if (s.l() >= s.b() && s.b() > 0) return false;
  for (std::size_t i = 0; i < s.l(); ++i) {
    if (s.r[i] >= s.k) return false;
    if (i > 0 && s.r[i] < s.r[i - 1]) return false;
  }
  auto R = s.padded_degrees();
  for (std::size_t i = 0; i < s.b(); ++i)
    for (std::size_t j = 0; j < s.b(); ++j) {
      u64 q = s.Q(i, j);
      if (i == j && q != 1) return false;
      if (i > j && q != 0) return false;
      if (i < j && q >= ctx.pow_p(R[j] - R[i])) return false;
    }
  return true;
}

// Condition (*) for every listed induced matrix, plus the shape constraints
// on Q.
inline bool check_star(const AdmissibleSolution& s, const std::vector<IntMatrix>& S_list) {
  if (!well_formed(s)) return false;
  const auto& ctx = s.Q.ctx();
  ZpkMatrix Qinv = inverse(s.Q);
  auto R = s.padded_degrees();
  for (const auto& S : S_list) {
    ZpkMatrix M = s.Q * conjugate_by(S, s.omega, ctx) * Qinv;
    if (!degree_condition(M, R)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Elementary solutions: k = 1, Q = [[I, Theta], [0, I]] with the top-right
// block of Q T Q^{-1} vanishing, i.e. (B1 + Theta B3) Theta = B2 + Theta B4.

inline QuadraticSystemFp elementary_system(u64 p, std::size_t i0, const Permutation& omega,
                                           const std::vector<IntMatrix>& S_list) {
  ZpkContext ctx(p, 1);
  const std::size_t b = omega.size();
  const std::size_t n2 = b - i0;
  auto var = [n2](std::size_t i, std::size_t j) { return i * n2 + j; };
  QuadraticSystemFp sys(p, i0 * n2);
  for (const auto& S : S_list) {
    ZpkMatrix T = conjugate_by(S, omega, ctx);
    auto B1 = [&](std::size_t i, std::size_t j) { return T(i, j); };
    auto B2 = [&](std::size_t i, std::size_t j) { return T(i, i0 + j); };
    auto B3 = [&](std::size_t i, std::size_t j) { return T(i0 + i, j); };
    auto B4 = [&](std::size_t i, std::size_t j) { return T(i0 + i, i0 + j); };
    for (std::size_t i = 0; i < i0; ++i)
      for (std::size_t j = 0; j < n2; ++j) {
        QuadEquation e;
        e.constant = (p - B2(i, j)) % p;
        for (std::size_t t = 0; t < i0; ++t)
          if (B1(i, t)) e.lin.push_back({var(t, j), B1(i, t)});
        for (std::size_t t = 0; t < n2; ++t)
          if (B4(t, j)) e.lin.push_back({var(i, t), (p - B4(t, j)) % p});
        for (std::size_t t = 0; t < n2; ++t)
          for (std::size_t u = 0; u < i0; ++u)
            if (B3(t, u)) e.quad.push_back({var(i, t), var(u, j), B3(t, u)});
        sys.add(std::move(e));
      }
  }
  return sys;
}

// Theta blocks (i0 x (b - i0) over F_p) of the elementary solutions for omega.
inline std::vector<ZpkMatrix> elementary_thetas(u64 p, std::size_t i0, const Permutation& omega,
                                                const std::vector<IntMatrix>& S_list, const SearchCaps& caps = {}) {
  ZpkContext ctx(p, 1);
  const std::size_t b = omega.size();
  if (i0 > b) fail(Errc::precondition, "cut index exceeds Betti number");
  const std::size_t n2 = b - i0;
  QuadraticSystemFp sys = elementary_system(p, i0, omega, S_list);
  u128 space = 1;
  bool small = true;
  for (std::size_t i = 0; i < sys.variable_count(); ++i) {
    space *= p;
    if (space > caps.exhaustive_limit) {
      small = false;
      break;
    }
  }
  auto sols = small ? sys.solve_exhaustive(caps.exhaustive_limit) : sys.solve_propagate(caps.node_cap);
  std::vector<ZpkMatrix> out;
  for (const auto& x : sols) {
    ZpkMatrix th(ctx, i0, n2);
    for (std::size_t i = 0; i < i0; ++i)
      for (std::size_t j = 0; j < n2; ++j) th.set(i, j, x[i * n2 + j]);
    out.push_back(std::move(th));
  }
  return out;
}

inline AdmissibleSolution elementary_from_theta(u64 p, const ZpkMatrix& theta, const Permutation& omega) {
  const std::size_t b = omega.size(), i0 = theta.rows();
  ZpkContext ctx(p, 1);
  ZpkMatrix Q = ZpkMatrix::identity(ctx, b);
  for (std::size_t i = 0; i < i0; ++i)
    for (std::size_t j = 0; j < theta.cols(); ++j) Q.set(i, i0 + j, theta(i, j));
  return {p, 1, std::vector<unsigned>(i0, 0), std::move(Q), omega};
}

inline std::vector<AdmissibleSolution> elementary_solutions(u64 p, std::size_t i0, const Permutation& omega,
                                                            const std::vector<IntMatrix>& S_list,
                                                            const SearchCaps& caps = {}) {
  const std::size_t b = omega.size();
  if (i0 >= b && b > 0) fail(Errc::precondition, "cut index must be below the Betti number");
  if (i0 == 0) return {trivial_solution(p, 1, b)};
  std::vector<AdmissibleSolution> out;
  for (const auto& th : elementary_thetas(p, i0, omega, S_list, caps)) out.push_back(elementary_from_theta(p, th, omega));
  return out;
}

// ---------------------------------------------------------------------------
// Orbits of omega under omega -> omega tau^beta on ordered set partitions.

struct SigmaClassRep {
  std::vector<std::size_t> blocks;  // i_0 < ... < i_s
  std::vector<Permutation> representatives;
};

namespace detail {

inline std::vector<int> block_labels_of_positions(std::size_t b, const std::vector<std::size_t>& blocks) {
  std::vector<int> lab(b, static_cast<int>(blocks.size()));
  for (std::size_t pos = 0; pos < b; ++pos)
    for (std::size_t e = 0; e < blocks.size(); ++e)
      if (pos < blocks[e]) {
        lab[pos] = static_cast<int>(e);
        break;
      }
  return lab;
}

// label[x] = index of the block containing omega(x).
inline std::vector<int> sigma_key(const Permutation& omega, const std::vector<int>& pos_label) {
  std::vector<int> key(omega.size());
  for (std::size_t x = 0; x < omega.size(); ++x) key[x] = pos_label[static_cast<std::size_t>(omega(static_cast<int>(x)))];
  return key;
}

// Lexicographically smallest permutation with the given key.
inline Permutation sigma_word(const std::vector<int>& key, const std::vector<int>& pos_label) {
  std::vector<int> img(key.size());
  std::map<int, std::vector<int>> slots;
  for (std::size_t pos = 0; pos < pos_label.size(); ++pos) slots[pos_label[pos]].push_back(static_cast<int>(pos));
  std::map<int, std::size_t> used;
  for (std::size_t x = 0; x < key.size(); ++x) img[x] = slots[key[x]][used[key[x]]++];
  return Permutation(img);
}

}  // namespace detail

// Canonical representative of the class of omega.
inline Permutation sigma_canonical(const Permutation& omega, const std::vector<std::size_t>& blocks,
                                   const std::vector<Permutation>& taus) {
  auto pos_label = detail::block_labels_of_positions(omega.size(), blocks);
  std::set<std::vector<int>> orbit{detail::sigma_key(omega, pos_label)};
  std::vector<std::vector<int>> todo(orbit.begin(), orbit.end());
  while (!todo.empty()) {
    auto key = todo.back();
    todo.pop_back();
    for (const auto& tau : taus) {
      std::vector<int> next(key.size());
      for (std::size_t x = 0; x < key.size(); ++x) next[x] = key[static_cast<std::size_t>(tau(static_cast<int>(x)))];
      if (orbit.insert(next).second) todo.push_back(std::move(next));
    }
  }
  Permutation best = detail::sigma_word(*orbit.begin(), pos_label);
  for (const auto& key : orbit) best = std::min(best, detail::sigma_word(key, pos_label), [](const auto& a, const auto& c) {
                                     return a.images() < c.images();
                                   });
  return best;
}

inline SigmaClassRep sigma_classes(std::size_t b, const std::vector<std::size_t>& blocks,
                                   const std::vector<Permutation>& taus) {
  for (std::size_t e = 0; e < blocks.size(); ++e)
    if (blocks[e] > b || (e > 0 && blocks[e] <= blocks[e - 1])) fail(Errc::precondition, "block boundaries must increase within [0, b]");
  auto pos_label = detail::block_labels_of_positions(b, blocks);
  // Enumerate keys: assignments of labels with the right block sizes.
  std::vector<int> base = pos_label;
  std::sort(base.begin(), base.end());
  std::set<std::vector<int>> unseen;
  do {
    unseen.insert(base);
  } while (std::next_permutation(base.begin(), base.end()));
  SigmaClassRep out{blocks, {}};
  while (!unseen.empty()) {
    std::vector<int> start = *unseen.begin();
    std::vector<std::vector<int>> todo{start};
    std::vector<std::vector<int>> orbit{start};
    unseen.erase(start);
    while (!todo.empty()) {
      auto key = todo.back();
      todo.pop_back();
      for (const auto& tau : taus) {
        std::vector<int> next(key.size());
        for (std::size_t x = 0; x < key.size(); ++x) next[x] = key[static_cast<std::size_t>(tau(static_cast<int>(x)))];
        auto it = unseen.find(next);
        if (it != unseen.end()) {
          unseen.erase(it);
          orbit.push_back(next);
          todo.push_back(std::move(next));
        }
      }
    }
    Permutation best = detail::sigma_word(orbit.front(), pos_label);
    for (const auto& key : orbit) {
      Permutation w = detail::sigma_word(key, pos_label);
      if (w.images() < best.images()) best = w;
    }
    out.representatives.push_back(best);
  }
  std::sort(out.representatives.begin(), out.representatives.end(),
            [](const Permutation& a, const Permutation& c) { return a.images() < c.images(); });
  return out;
}

// ---------------------------------------------------------------------------
// Bounded search for fixed (p, k, r, omega).

class ElementaryCache {
 public:
  ElementaryCache(u64 p, const std::vector<IntMatrix>& S_list, SearchCaps caps)
      : p_(p), S_(S_list), caps_(caps) {}

  const std::vector<ZpkMatrix>& get(std::size_t i0, const Permutation& omega) {
    auto key = std::make_pair(i0, omega.images());
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, elementary_thetas(p_, i0, omega, S_, caps_)).first;
    return it->second;
  }
  u64 p() const { return p_; }
  const std::vector<IntMatrix>& S() const { return S_; }
  const SearchCaps& caps() const { return caps_; }

 private:
  u64 p_;
  std::vector<IntMatrix> S_;
  SearchCaps caps_;
  std::map<std::pair<std::size_t, std::vector<int>>, std::vector<ZpkMatrix>> cache_;
};

namespace detail {

// Q mod p assembled from one elementary Theta per cut: a row in the block
// ending at cut c copies the corresponding row of Theta_c to the right of c.
inline std::vector<ZpkMatrix> level_one(ElementaryCache& cache, const std::vector<unsigned>& R,
                                        const Permutation& omega, const std::vector<ZpkMatrix>& T1) {
  const std::size_t b = R.size();
  const u64 p = cache.p();
  ZpkContext ctx(p, 1);
  std::vector<std::size_t> cuts;
  for (std::size_t c = 1; c < b; ++c)
    if (R[c - 1] < R[c]) cuts.push_back(c);
  std::vector<const std::vector<ZpkMatrix>*> lists;
  u128 total = 1;
  for (std::size_t c : cuts) {
    lists.push_back(&cache.get(c, omega));
    total *= lists.back()->size();
    if (total == 0) return {};
    if (total > cache.caps().candidate_cap) fail(Errc::cap_exceeded, "level-one candidate product exceeds cap");
  }
  std::vector<std::size_t> owner(b, b);  // cut bounding each row
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t c : cuts)
      if (i < c) {
        owner[i] = c;
        break;
      }
  std::vector<ZpkMatrix> out;
  std::vector<std::size_t> idx(cuts.size(), 0);
  while (true) {
    ZpkMatrix Q = ZpkMatrix::identity(ctx, b);
    for (std::size_t e = 0; e < cuts.size(); ++e) {
      const std::size_t c = cuts[e];
      const std::size_t lo = e == 0 ? 0 : cuts[e - 1];
      const ZpkMatrix& th = (*lists[e])[idx[e]];
      for (std::size_t i = lo; i < c; ++i)
        for (std::size_t j = c; j < b; ++j) Q.set(i, j, th(i, j - c));
    }
    ZpkMatrix Qinv = inverse(Q);
    bool ok = true;
    for (std::size_t g = 0; g < T1.size() && ok; ++g) {
      ZpkMatrix M = Q * T1[g] * Qinv;
      for (std::size_t i = 0; i < b && ok; ++i)
        for (std::size_t j = i + 1; j < b && ok; ++j)
          if (R[j] > R[i] && M(i, j) != 0) ok = false;
    }
    if (ok) out.push_back(std::move(Q));
    std::size_t e = cuts.size();
    while (e > 0) {
      --e;
      if (++idx[e] < lists[e]->size()) break;
      idx[e] = 0;
      if (e == 0) return out;
    }
    if (cuts.empty()) return out;
  }
}

// Candidates correct modulo p^t (entry (i,j) known mod p^{min(R_j-R_i, t)})
// lifted to modulo p^{t+1}.
inline std::vector<ZpkMatrix> lift_level(const std::vector<ZpkMatrix>& cands, unsigned t, const std::vector<unsigned>& R,
                                         const std::vector<IntMatrix>& S_list, const Permutation& omega,
                                         const SearchCaps& caps) {
  if (cands.empty()) return {};
  const std::size_t b = R.size();
  const u64 p = cands.front().ctx().p();
  ZpkContext next(p, t + 1);
  const u64 pt = next.pow_p(t);
  std::vector<ZpkMatrix> T;
  for (const auto& S : S_list) T.push_back(conjugate_by(S, omega, next));
  std::vector<std::pair<std::size_t, std::size_t>> pos;
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = i + 1; j < b; ++j)
      if (R[j] >= R[i] + t + 1) pos.emplace_back(i, j);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> var;
  for (std::size_t v = 0; v < pos.size(); ++v) var[pos[v]] = v;
  std::vector<ZpkMatrix> out;
  for (const auto& cand : cands) {
    ZpkMatrix Q = cand.with_context(next);
    ZpkMatrix Qinv = inverse(Q);
    LinearSystemFp sys(p, pos.size());
    bool dead = false;
    for (const auto& Tg : T) {
      ZpkMatrix M = Q * Tg * Qinv;
      ZpkMatrix A = Qinv * M;
      for (auto [i, j] : pos) {
        if (M(i, j) % pt != 0) {
          dead = true;
          break;
        }
        std::vector<u64> coef(pos.size(), 0);
        for (auto [q, s] : pos) {
          u64 c = 0;
          if (q == i) c = A(s, j) % p;
          c = (c + p - detail::mulmod(M(i, q) % p, Qinv(s, j) % p, p)) % p;
          coef[var[{q, s}]] = c;
        }
        u64 m = (M(i, j) / pt) % p;
        sys.add_equation(std::move(coef), (p - m) % p);
      }
      if (dead) break;
    }
    if (dead) continue;
    for (const auto& e : sys.solutions(caps.candidate_cap)) {
      ZpkMatrix Q2 = Q;
      for (std::size_t v = 0; v < pos.size(); ++v)
        if (e[v]) Q2.set(pos[v].first, pos[v].second, next.add(Q2(pos[v].first, pos[v].second), next.mul(e[v], pt)));
      out.push_back(std::move(Q2));
      if (out.size() > caps.candidate_cap) fail(Errc::cap_exceeded, "lifted candidates exceed cap");
    }
  }
  return out;
}

}  // namespace detail

// All solutions with the given k, degree vector r (length l) and omega.
inline std::vector<AdmissibleSolution> search_fixed(ElementaryCache& cache, unsigned k, const std::vector<unsigned>& r,
                                                    const Permutation& omega) {
  const u64 p = cache.p();
  const std::size_t b = omega.size();
  if (r.empty()) return {trivial_solution(p, k, b)};
  if (r.size() >= b) fail(Errc::precondition, "l must be below the Betti number");
  std::vector<unsigned> R = r;
  R.resize(b, k);
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] >= k || (i > 0 && r[i] < r[i - 1])) fail(Errc::precondition, "degrees must be nondecreasing and below k");
  ZpkContext ctx1(p, 1);
  std::vector<ZpkMatrix> T1;
  for (const auto& S : cache.S()) T1.push_back(conjugate_by(S, omega, ctx1));
  std::vector<ZpkMatrix> cands = detail::level_one(cache, R, omega, T1);
  const unsigned top = k - R[0];
  for (unsigned t = 1; t < top && !cands.empty(); ++t)
    cands = detail::lift_level(cands, t, R, cache.S(), omega, cache.caps());
  ZpkContext ctx(p, k);
  std::vector<AdmissibleSolution> out;
  for (const auto& Q : cands) {
    AdmissibleSolution s{p, k, r, Q.with_context(ctx), omega};
    if (!check_star(s, cache.S())) throw std::logic_error("search produced a candidate failing (*)");
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

// Degree vector for blocks i_0 < ... < i_s and exponents c_1 < ... < c_s.
inline std::vector<unsigned> degrees_for(const std::vector<std::size_t>& blocks, const std::vector<unsigned>& c) {
  std::vector<unsigned> r(blocks.front(), 0);
  for (std::size_t e = 1; e < blocks.size(); ++e) r.resize(blocks[e], c[e - 1]);
  return r;
}

// Every solution for the block tuple and omega with k <= k_max.
inline std::vector<AdmissibleSolution> search_solutions(ElementaryCache& cache, const std::vector<std::size_t>& blocks,
                                                        const Permutation& omega, unsigned k_max) {
  if (blocks.empty()) fail(Errc::precondition, "empty block tuple");
  const std::size_t s = blocks.size() - 1;
  std::vector<AdmissibleSolution> out;
  std::vector<unsigned> c;
  // c_1 < ... < c_s drawn from {1..k-1}
  auto rec = [&](auto&& self, unsigned k, unsigned lo) -> void {
    if (c.size() == s) {
      auto r = degrees_for(blocks, c);
      if (r.empty()) return;
      auto part = search_fixed(cache, k, r, omega);
      out.insert(out.end(), part.begin(), part.end());
      return;
    }
    for (unsigned v = lo; v < k; ++v) {
      c.push_back(v);
      self(self, k, v + 1);
      c.pop_back();
    }
  };
  for (unsigned k = 1; k <= k_max; ++k) rec(rec, k, 1);
  return out;
}

// ---------------------------------------------------------------------------
// Operations on solutions.

inline AdmissibleSolution shift_solution(const AdmissibleSolution& s, unsigned c) {
  if (c == 0) fail(Errc::precondition, "shift must be positive");
  ZpkContext ctx(s.p, s.k + c);
  std::vector<unsigned> r = s.r;
  for (auto& x : r) x += c;
  return {s.p, s.k + c, std::move(r), s.Q.with_context(ctx), s.omega};
}

// Reduction at the jump after row i (1-based count of rows above it).
inline AdmissibleSolution reduce_solution(const AdmissibleSolution& s, std::size_t i, unsigned r) {
  auto R = s.padded_degrees();
  const std::size_t b = s.b();
  if (i == 0 || i >= b || R[i - 1] >= R[i]) fail(Errc::precondition, "no degree jump at the requested index");
  if (r == 0 || r > R[i] - R[i - 1]) fail(Errc::precondition, "target exponent outside [1, r_{i+1} - r_i]");
  ZpkContext ctx(s.p, r);
  ZpkMatrix Q = s.Q.with_context(ctx);
  ZpkMatrix Q1(ctx, i, i), Q2(ctx, i, b - i);
  for (std::size_t a = 0; a < i; ++a) {
    for (std::size_t c = 0; c < i; ++c) Q1.set(a, c, Q(a, c));
    for (std::size_t c = i; c < b; ++c) Q2.set(a, c - i, Q(a, c));
  }
  ZpkMatrix th = inverse(Q1) * Q2;
  ZpkMatrix Qbar = ZpkMatrix::identity(ctx, b);
  for (std::size_t a = 0; a < i; ++a)
    for (std::size_t c = i; c < b; ++c) Qbar.set(a, c, th(a, c - i));
  return {s.p, r, std::vector<unsigned>(i, 0), std::move(Qbar), s.omega};
}

inline AdmissibleSolution conjugate_solution(const AdmissibleSolution& s, const Permutation& sigma) {
  auto R = s.padded_degrees();
  if (sigma.size() != s.b()) fail(Errc::precondition, "permutation degree differs from b");
  for (std::size_t i = 0; i < s.b(); ++i)
    if (R[static_cast<std::size_t>(sigma(static_cast<int>(i)))] != R[i])
      fail(Errc::precondition, "permutation does not preserve the degree blocks");
  const auto& ctx = s.Q.ctx();
  ZpkMatrix Ms = ZpkMatrix::permutation(ctx, sigma);
  return {s.p, s.k, s.r, Ms * s.Q * ZpkMatrix::permutation(ctx, sigma.inverse()), compose(sigma, s.omega)};
}

// ---------------------------------------------------------------------------
// Isomorphism classes: same (p, k, r) and Q'omega' ~_P Q omega S^beta for some
// beta in the full group.

struct SolutionClass {
  AdmissibleSolution representative;
  std::vector<std::size_t> members;  // indices into the input list
};

inline std::vector<SolutionClass> isomorphism_classes(const std::vector<AdmissibleSolution>& sols,
                                                      const std::vector<IntMatrix>& S_full) {
  const std::size_t n = sols.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::tuple<u64, unsigned, std::vector<unsigned>>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[{sols[i].p, sols[i].k, sols[i].r}].push_back(i);
  for (const auto& [key, idx] : groups) {
    if (idx.size() < 2) continue;
    const auto& ctx = sols[idx[0]].Q.ctx();
    const auto R = sols[idx[0]].padded_degrees();
    std::vector<ZpkMatrix> Sb;
    for (const auto& S : S_full) Sb.push_back(S.to_zpk(ctx));
    std::vector<ZpkMatrix> qo, qo_inv;
    for (std::size_t i : idx) {
      qo.push_back(sols[i].subgroup().q_omega());
      qo_inv.push_back(inverse(qo.back()));
    }
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t c = a + 1; c < idx.size(); ++c) {
        if (find(idx[a]) == find(idx[c])) continue;
        for (const auto& S : Sb)
          if (degree_condition(qo[a] * S * qo_inv[c], R)) {
            parent[find(idx[a])] = find(idx[c]);
            break;
          }
      }
  }
  std::map<std::size_t, std::vector<std::size_t>> comps;
  for (std::size_t i = 0; i < n; ++i) comps[find(i)].push_back(i);
  std::vector<SolutionClass> out;
  for (auto& [root, members] : comps) {
    std::size_t best = members.front();
    for (std::size_t i : members)
      if (canonical_less(sols[i], sols[best])) best = i;
    out.push_back({sols[best], members});
  }
  std::sort(out.begin(), out.end(), [](const SolutionClass& a, const SolutionClass& b) {
    const auto& x = a.representative;
    const auto& y = b.representative;
    if (x.p != y.p) return x.p < y.p;
    if (x.k != y.k) return x.k < y.k;
    if (x.r.size() != y.r.size()) return x.r.size() > y.r.size();
    if (x.r != y.r) return x.r < y.r;
    return canonical_less(x, y);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Problem setup and the full pipeline.

struct SearchProblem {
  SpanningTree tree;
  std::vector<Automorphism> G_gens;
  std::vector<Automorphism> G;         // closure
  std::vector<IntMatrix> S_gens;       // induced matrices of G_gens
  std::vector<Automorphism> full_aut;  // closure
  std::vector<IntMatrix> S_full;
  std::vector<IntMatrix> S_G;          // induced matrices of the closure of G
  std::vector<Automorphism> aut_g_tree;
  std::vector<Permutation> taus;
  bool g_normal = false;
};

inline SearchProblem make_search_problem(const SpanningTree& t, const std::vector<Automorphism>& G_gens,
                                         const std::vector<Automorphism>& full_gens, std::size_t max_order = 1u << 16) {
  SearchProblem pr{t, G_gens, {}, {}, {}, {}, {}, {}, {}, false};
  pr.G = group_closure(t.graph(), G_gens, max_order);
  pr.full_aut = full_gens.empty() ? pr.G : group_closure(t.graph(), full_gens, max_order);
  std::set<Automorphism> full(pr.full_aut.begin(), pr.full_aut.end());
  for (const auto& g : pr.G)
    if (!full.count(g)) fail(Errc::precondition, "G is not contained in the full group");
  for (const auto& g : G_gens) pr.S_gens.push_back(induced_matrix(t, g));
  for (const auto& g : pr.full_aut) pr.S_full.push_back(induced_matrix(t, g));
  for (const auto& g : pr.G) pr.S_G.push_back(induced_matrix(t, g));
  pr.aut_g_tree = aut_g_tree_subgroup(pr.full_aut, pr.G, t);
  for (const auto& beta : pr.aut_g_tree) pr.taus.push_back(tau_factorize(t, beta).tau);
  std::set<Automorphism> gs(pr.G.begin(), pr.G.end());
  pr.g_normal = true;
  for (const auto& beta : pr.full_aut)
    for (const auto& g : pr.G)
      if (!gs.count(compose(compose(beta, g), beta.inverse()))) pr.g_normal = false;
  return pr;
}

struct SearchConfig {
  std::vector<u64> primes;
  unsigned k_max = 1;
  SearchCaps caps;
  unsigned threads = 1;
};

inline std::string family_tag(const AdmissibleSolution& s) {
  if (s.r.empty()) return "trivial";
  if (s.r.front() > 0) return "shift";
  std::set<unsigned> nonzero;
  for (unsigned x : s.r)
    if (x) nonzero.insert(x);
  if (!nonzero.empty()) return "mixed";
  return s.k == 1 ? "elementary" : "pure";
}

struct ClassifiedSolution {
  AdmissibleSolution solution;  // canonical representative
  std::string family;
  std::size_t raw_count;        // solutions merged into the class
  // The class's members split up to isomorphisms lying over G only. Two
  // members differ here when just an automorphism outside G relates them.
  std::vector<AdmissibleSolution> variants;
};

struct PrimeReport {
  u64 p = 0;
  std::vector<std::size_t> P0;                      // admissible cut indices i_0, including 0
  std::vector<std::vector<std::size_t>> P;          // block tuples
  std::map<unsigned, std::vector<ClassifiedSolution>> classes;  // by k
};

struct Classification {
  std::vector<PrimeReport> primes;
  bool g_normal = false;
};

inline std::vector<std::size_t> compute_P0(ElementaryCache& cache, std::size_t b, const std::vector<Permutation>& taus) {
  std::vector<std::size_t> out{0};
  for (std::size_t i0 = 1; i0 < b; ++i0) {
    for (const auto& w : sigma_classes(b, {i0}, taus).representatives)
      if (!cache.get(i0, w).empty()) {
        out.push_back(i0);
        break;
      }
  }
  return out;
}

// Strictly increasing tuples drawn from P0, minus the lone (0).
inline std::vector<std::vector<std::size_t>> compute_P(const std::vector<std::size_t>& P0) {
  std::vector<std::size_t> v = P0;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = v.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> t;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) t.push_back(v[i]);
    if (t == std::vector<std::size_t>{0}) continue;
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline PrimeReport classify_prime(const SearchProblem& pr, u64 p, unsigned k_max, const SearchCaps& caps) {
  const std::size_t b = pr.tree.betti_number();
  ElementaryCache cache(p, pr.S_gens, caps);
  PrimeReport rep;
  rep.p = p;
  rep.P0 = compute_P0(cache, b, pr.taus);
  rep.P = compute_P(rep.P0);
  std::map<unsigned, std::vector<AdmissibleSolution>> core;
  for (const auto& blocks : rep.P) {
    if (blocks.front() == 0) continue;  // produced by shifting below
    for (const auto& w : sigma_classes(b, blocks, pr.taus).representatives)
      for (auto& s : search_solutions(cache, blocks, w, k_max)) core[s.k].push_back(std::move(s));
  }
  for (unsigned k = 1; k <= k_max; ++k) {
    std::vector<AdmissibleSolution> all = core[k];
    for (unsigned c = 1; c < k; ++c)
      for (const auto& s : core[k - c]) all.push_back(shift_solution(s, c));
    all.push_back(trivial_solution(p, k, b));
    auto classes = isomorphism_classes(all, pr.S_full);
    auto& bucket = rep.classes[k];
    for (auto& cl : classes) {
      std::vector<AdmissibleSolution> members;
      for (std::size_t i : cl.members) members.push_back(all[i]);
      std::vector<AdmissibleSolution> variants;
      for (auto& v : isomorphism_classes(members, pr.S_G)) variants.push_back(std::move(v.representative));
      std::string tag = family_tag(cl.representative);
      bucket.push_back({std::move(cl.representative), tag, cl.members.size(), std::move(variants)});
    }
  }
  return rep;
}

inline Classification classify(const SearchProblem& pr, const SearchConfig& cfg) {
  if (cfg.k_max == 0) fail(Errc::invalid_argument, "k_max must be at least 1");
  std::vector<u64> primes = cfg.primes;
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (u64 p : primes)
    if (!is_prime(p)) fail(Errc::invalid_argument, std::to_string(p) + " is not prime");
  Classification out;
  out.g_normal = pr.g_normal;
  out.primes.resize(primes.size());
  std::vector<std::exception_ptr> errors(primes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < primes.size();) {
      try {
        out.primes[i] = classify_prime(pr, primes[i], cfg.k_max, cfg.caps);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned nthreads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(primes.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace covlift
