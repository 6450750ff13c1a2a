#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "covlift/error.hpp"
#include "covlift/fp_solve.hpp"
#include "covlift/graph.hpp"
#include "covlift/search.hpp"
#include "covlift/zpk.hpp"

namespace covlift {

struct PrimePower {
  u64 p;
  unsigned e;
};

inline PrimePower factor_prime_power(u64 n) {
  if (n < 2) fail(Errc::invalid_argument, "group factor must exceed 1");
  u64 p = 0;
  for (u64 q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      p = q;
      break;
    }
  if (p == 0) return {n, 1};
  unsigned e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  if (n != 1) fail(Errc::invalid_argument, "group factor is not a prime power");
  return {p, e};
}

// Finite abelian group as a product of cyclic prime-power factors, kept in the
// order given.
class AbelianGroupSpec {
 public:
  AbelianGroupSpec() = default;
  explicit AbelianGroupSpec(std::vector<u64> factors) : factors_(std::move(factors)) {
    for (u64 f : factors_) pp_.push_back(factor_prime_power(f));
  }
  // Z_{p^{k_1}} x ... x Z_{p^{k_n}}
  static AbelianGroupSpec p_group(u64 p, const std::vector<unsigned>& exps) {
    std::vector<u64> f;
    for (unsigned e : exps) {
      u64 m = 1;
      for (unsigned i = 0; i < e; ++i) m *= p;
      f.push_back(m);
    }
    return AbelianGroupSpec(std::move(f));
  }

  const std::vector<u64>& factors() const { return factors_; }
  const std::vector<PrimePower>& prime_powers() const { return pp_; }
  std::size_t rank() const { return factors_.size(); }
  u64 order() const {
    u128 n = 1;
    for (u64 f : factors_) {
      n *= f;
      if (n > UINT64_MAX) fail(Errc::cap_exceeded, "group order exceeds 64 bits");
    }
    return static_cast<u64>(n);
  }
  std::vector<u64> primes() const {
    std::vector<u64> ps;
    for (const auto& x : pp_) ps.push_back(x.p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return ps;
  }
  bool is_p_group() const { return primes().size() <= 1; }

  std::vector<u64> zero() const { return std::vector<u64>(factors_.size(), 0); }
  std::vector<u64> reduce(const std::vector<i64>& x) const {
    check_len(x.size());
    std::vector<u64> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      i64 m = static_cast<i64>(factors_[i]);
      i64 v = x[i] % m;
      out[i] = static_cast<u64>(v < 0 ? v + m : v);
    }
    return out;
  }
  std::vector<u64> add(const std::vector<u64>& a, const std::vector<u64>& b) const {
    check_len(a.size());
    check_len(b.size());
    std::vector<u64> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) % factors_[i];
    return out;
  }
  std::vector<u64> neg(const std::vector<u64>& a) const {
    std::vector<u64> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] == 0 ? 0 : factors_[i] - a[i];
    return out;
  }
  std::vector<u64> scale(const std::vector<u64>& a, u64 c) const {
    std::vector<u64> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = detail::mulmod(a[i], c % factors_[i], factors_[i]);
    return out;
  }
  // Mixed-radix index of an element and back.
  u64 index_of(const std::vector<u64>& a) const {
    u64 idx = 0;
    for (std::size_t i = 0; i < a.size(); ++i) idx = idx * factors_[i] + a[i];
    return idx;
  }
  std::vector<u64> element(u64 idx) const {
    std::vector<u64> a(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
      a[i] = idx % factors_[i];
      idx /= factors_[i];
    }
    return a;
  }

  friend bool operator==(const AbelianGroupSpec& a, const AbelianGroupSpec& b) { return a.factors_ == b.factors_; }

 private:
  void check_len(std::size_t n) const {
    if (n != factors_.size()) fail(Errc::invalid_argument, "element length differs from group rank");
  }
  std::vector<u64> factors_;
  std::vector<PrimePower> pp_;
};

// Isomorphism type: sorted list of factor orders.
inline std::vector<u64> group_invariants(const AbelianGroupSpec& g) {
  std::vector<u64> f = g.factors();
  std::sort(f.begin(), f.end());
  return f;
}

// T-reduced voltages: values[i] is phi(x_i); tree arcs carry 0.
struct VoltageAssignment {
  AbelianGroupSpec group;
  std::vector<std::vector<u64>> values;

  std::size_t betti_number() const { return values.size(); }
  std::vector<u64> on_arc(const SpanningTree& t, const Arc& a) const {
    auto [i, s] = t.cotree_position(a);
    if (i < 0) return group.zero();
    const auto& v = values[static_cast<std::size_t>(i)];
    return s > 0 ? v : group.neg(v);
  }
};

// phi(x_i)_eta = ((Q omega)^{-1})_{i, b+1-eta} for eta = 1..b-i0, reduced mod
// p^{r_{b+1-eta}}.
inline VoltageAssignment voltage_from_solution(const AdmissibleSolution& s) {
  const std::size_t b = s.b();
  const std::size_t i0 = s.i0();
  const std::size_t n = b - i0;
  auto R = s.padded_degrees();
  std::vector<unsigned> exps(n);
  for (std::size_t e = 0; e < n; ++e) exps[e] = R[b - 1 - e];
  ZpkMatrix inv = inverse(s.subgroup().q_omega());
  VoltageAssignment v{AbelianGroupSpec::p_group(s.p, exps), {}};
  for (std::size_t i = 0; i < b; ++i) {
    std::vector<u64> x(n);
    for (std::size_t e = 0; e < n; ++e) x[e] = inv(i, b - 1 - e) % v.group.factors()[e];
    v.values.push_back(std::move(x));
  }
  return v;
}

// Projection onto the factors belonging to prime p.
inline VoltageAssignment primary_part(const VoltageAssignment& phi, u64 p) {
  std::vector<u64> f;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < phi.group.rank(); ++i)
    if (phi.group.prime_powers()[i].p == p) {
      keep.push_back(i);
      f.push_back(phi.group.factors()[i]);
    }
  VoltageAssignment out{AbelianGroupSpec(f), {}};
  for (const auto& v : phi.values) {
    std::vector<u64> x;
    for (std::size_t i : keep) x.push_back(v[i]);
    out.values.push_back(std::move(x));
  }
  return out;
}

inline VoltageAssignment fibered_product(const VoltageAssignment& a, const VoltageAssignment& b) {
  if (a.values.size() != b.values.size()) fail(Errc::invalid_argument, "voltage assignments on different Betti numbers");
  std::vector<u64> f = a.group.factors();
  f.insert(f.end(), b.group.factors().begin(), b.group.factors().end());
  VoltageAssignment out{AbelianGroupSpec(f), {}};
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    auto x = a.values[i];
    x.insert(x.end(), b.values[i].begin(), b.values[i].end());
    out.values.push_back(std::move(x));
  }
  return out;
}

// The voltages generate the group. For each prime the p-part is generated iff
// the voltages span its Frattini quotient over F_p.
inline bool is_connected_voltage(const VoltageAssignment& phi) {
  for (u64 p : phi.group.primes()) {
    VoltageAssignment part = primary_part(phi, p);
    const std::size_t n = part.group.rank();
    LinearSystemFp sys(p, phi.values.size());
    for (std::size_t e = 0; e < n; ++e) {
      std::vector<u64> col;
      for (const auto& v : part.values) col.push_back(v[e] % p);
      sys.add_equation(std::move(col), 0);
    }
    sys.reduce();
    if (sys.pivots().size() != n) return false;
  }
  return true;
}

// {w in (Z/p^K)^b : sum_i w_i phi(x_i) = 0} for a p-group voltage; K defaults to
// the exponent of the group.
inline SubgroupForm kernel_form(const VoltageAssignment& phi, unsigned K = 0) {
  auto ps = phi.group.primes();
  if (ps.size() != 1) fail(Errc::invalid_argument, "kernel_form needs a nontrivial p-group");
  const u64 p = ps[0];
  unsigned kmax = 0;
  for (const auto& pp : phi.group.prime_powers()) kmax = std::max(kmax, pp.e);
  if (K == 0) K = kmax;
  if (K < kmax) fail(Errc::precondition, "ambient exponent below group exponent");
  ZpkContext ctx(p, K);
  const std::size_t b = phi.values.size(), n = phi.group.rank();
  ZpkMatrix F(ctx, b, n);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t e = 0; e < n; ++e)
      F.set(i, e, ctx.mul(phi.values[i][e], ctx.pow_p(K - phi.group.prime_powers()[e].e)));
  auto nf = normal_form(F);
  ZpkMatrix gens(ctx, b, b);
  for (std::size_t i = 0; i < b; ++i) {
    u64 scale = i < nf.degrees.size() ? ctx.pow_p(K - nf.degrees[i]) : 1;
    for (std::size_t j = 0; j < b; ++j) gens.set(i, j, ctx.mul(scale, nf.Q(i, j)));
  }
  return subgroup_canonical_form(gens);
}

// Derived cover on V x A; vertex (v, a) has index v * |A| + index_of(a).
// adjacency[x][t] is the neighbour over the t-th base neighbour of v.
struct CoveringGraph {
  Graph base;
  AbelianGroupSpec group;
  std::size_t fiber = 0;
  std::vector<std::vector<std::size_t>> adjacency;

  std::size_t vertex_count() const { return adjacency.size(); }
  std::size_t edge_count() const {
    std::size_t s = 0;
    for (const auto& a : adjacency) s += a.size();
    return s / 2;
  }
  int base_vertex_of(std::size_t x) const { return static_cast<int>(x / fiber); }
  std::vector<u64> fiber_element_of(std::size_t x) const { return group.element(x % fiber); }
  std::size_t vertex_id(int v, const std::vector<u64>& a) const { return static_cast<std::size_t>(v) * fiber + group.index_of(a); }
  std::size_t neighbor_over(std::size_t x, int w) const {
    const auto& nb = base.neighbors(base_vertex_of(x));
    auto it = std::lower_bound(nb.begin(), nb.end(), w);
    if (it == nb.end() || *it != w) fail(Errc::invalid_argument, "no base edge for requested lift");
    return adjacency[x][static_cast<std::size_t>(it - nb.begin())];
  }
  std::string vertex_name(std::size_t x) const {
    std::string s = std::to_string(base_vertex_of(x)) + ":(";
    auto a = fiber_element_of(x);
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + ")";
  }
  std::size_t component_count() const {
    std::vector<std::size_t> uf(adjacency.size());
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](std::size_t x) {
      while (uf[x] != x) x = uf[x] = uf[uf[x]];
      return x;
    };
    std::size_t comps = adjacency.size();
    for (std::size_t x = 0; x < adjacency.size(); ++x)
      for (std::size_t y : adjacency[x]) {
        std::size_t a = find(x), c = find(y);
        if (a != c) {
          uf[a] = c;
          --comps;
        }
      }
    return comps;
  }
};

inline CoveringGraph build_covering(const SpanningTree& t, const VoltageAssignment& phi, u64 cap = 1u << 22) {
  const Graph& g = t.graph();
  if (phi.values.size() != t.betti_number()) fail(Errc::invalid_argument, "voltage count differs from Betti number");
  const u64 fiber = phi.group.order();
  if (static_cast<u128>(fiber) * static_cast<u64>(g.vertex_count()) > cap) fail(Errc::cap_exceeded, "cover too large");
  CoveringGraph c{g, phi.group, static_cast<std::size_t>(fiber), {}};
  c.adjacency.assign(static_cast<std::size_t>(fiber) * static_cast<std::size_t>(g.vertex_count()), {});
  for (int u = 0; u < g.vertex_count(); ++u) {
    std::vector<std::vector<u64>> volt;
    for (int w : g.neighbors(u)) volt.push_back(phi.on_arc(t, {u, w}));
    for (u64 ai = 0; ai < fiber; ++ai) {
      auto a = phi.group.element(ai);
      auto& adj = c.adjacency[c.vertex_id(u, a)];
      for (std::size_t s = 0; s < g.neighbors(u).size(); ++s)
        adj.push_back(c.vertex_id(g.neighbors(u)[s], phi.group.add(volt[s], a)));
    }
  }
  return c;
}

}  // namespace covlift
