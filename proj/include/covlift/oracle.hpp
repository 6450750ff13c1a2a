#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "covlift/covering.hpp"
#include "covlift/error.hpp"
#include "covlift/graph.hpp"
#include "covlift/homology.hpp"
#include "covlift/zpk.hpp"

namespace covlift {

namespace detail {

inline unsigned group_exponent(const VoltageAssignment& phi) {
  unsigned k = 0;
  for (const auto& pp : phi.group.prime_powers()) k = std::max(k, pp.e);
  return k;
}

// Kernel of E(phi^(p)) in (Z/p^K)^b, K the larger of the two p-exponents.
inline std::pair<SubgroupForm, SubgroupForm> kernel_pair(const VoltageAssignment& a, const VoltageAssignment& b, u64 p) {
  VoltageAssignment pa = primary_part(a, p), pb = primary_part(b, p);
  unsigned K = std::max({group_exponent(pa), group_exponent(pb), 1u});
  auto kf = [&](const VoltageAssignment& v) {
    if (v.group.rank() == 0) return subgroup_canonical_form(ZpkMatrix::identity(ZpkContext(p, K), v.values.size()));
    return kernel_form(v, K);
  };
  return {kf(pa), kf(pb)};
}

inline std::vector<u64> union_primes(const VoltageAssignment& a, const VoltageAssignment& b) {
  auto pa = a.group.primes(), pb = b.group.primes();
  pa.insert(pa.end(), pb.begin(), pb.end());
  std::sort(pa.begin(), pa.end());
  pa.erase(std::unique(pa.begin(), pa.end()), pa.end());
  return pa;
}

}  // namespace detail

// ker E(phi) = ker E(psi).
inline bool equivalent_coverings(const VoltageAssignment& phi, const VoltageAssignment& psi) {
  for (u64 p : detail::union_primes(phi, psi)) {
    auto [ka, kb] = detail::kernel_pair(phi, psi, p);
    if (!same_subgroup(ka, kb)) return false;
  }
  return true;
}

// beta_*(ker E(phi)) = ker E(psi) for the given induced matrix of beta.
inline bool pushes_kernel_to(const VoltageAssignment& phi, const VoltageAssignment& psi, const IntMatrix& S) {
  for (u64 p : detail::union_primes(phi, psi)) {
    auto [ka, kb] = detail::kernel_pair(phi, psi, p);
    if (!same_subgroup(subgroup_image(ka, S.to_zpk(ka.ctx)), kb)) return false;
  }
  return true;
}

inline bool lifts_homological(const SpanningTree& t, const VoltageAssignment& phi, const Automorphism& alpha) {
  return pushes_kernel_to(phi, phi, induced_matrix(t, alpha));
}

inline std::optional<Automorphism> isomorphic_coverings(const SpanningTree& t, const VoltageAssignment& phi,
                                                        const VoltageAssignment& psi,
                                                        const std::vector<Automorphism>& full_aut) {
  if (group_invariants(phi.group) != group_invariants(psi.group)) return std::nullopt;
  for (const auto& beta : full_aut)
    if (pushes_kernel_to(phi, psi, induced_matrix(t, beta))) return beta;
  return std::nullopt;
}

struct LiftWitness {
  Automorphism alpha;
  std::vector<std::size_t> map;  // cover vertex -> cover vertex
  std::string method;
};

// Verifies that m is an isomorphism from cover a to cover b lying over alpha.
inline bool verify_map_over(const CoveringGraph& a, const CoveringGraph& b, const Automorphism& alpha,
                            const std::vector<std::size_t>& m) {
  if (m.size() != a.vertex_count() || a.vertex_count() != b.vertex_count()) return false;
  std::vector<char> hit(m.size(), 0);
  for (std::size_t x = 0; x < m.size(); ++x) {
    if (m[x] >= m.size() || hit[m[x]]) return false;
    hit[m[x]] = 1;
    if (b.base_vertex_of(m[x]) != alpha(a.base_vertex_of(x))) return false;
  }
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y : a.adjacency[x]) {
      const auto& adj = b.adjacency[m[x]];
      if (std::find(adj.begin(), adj.end(), m[y]) == adj.end()) return false;
    }
  return true;
}

inline bool verify_lift(const CoveringGraph& c, const Automorphism& alpha, const std::vector<std::size_t>& m) {
  return verify_map_over(c, c, alpha, m);
}

// Anchors (v0, 0) of a at each point of b's fiber over alpha(v0) and
// propagates along edges; a must be connected.
inline std::optional<LiftWitness> isomorphism_over(const CoveringGraph& a, const CoveringGraph& b,
                                                   const Automorphism& alpha, u64 cap = 1u << 24) {
  if (static_cast<u128>(a.vertex_count()) * a.fiber > cap) fail(Errc::cap_exceeded, "combinatorial lift search too large");
  if (a.component_count() != 1) fail(Errc::precondition, "combinatorial lift search needs a connected cover");
  if (a.vertex_count() != b.vertex_count()) return std::nullopt;
  const std::size_t n = a.vertex_count();
  const std::size_t anchor = a.vertex_id(0, a.group.zero());
  for (std::size_t h = 0; h < b.fiber; ++h) {
    std::vector<std::size_t> m(n, n);
    m[anchor] = static_cast<std::size_t>(alpha(0)) * b.fiber + h;
    std::vector<std::size_t> stack{anchor};
    bool ok = true;
    while (!stack.empty() && ok) {
      std::size_t x = stack.back();
      stack.pop_back();
      const auto& nb = a.base.neighbors(a.base_vertex_of(x));
      for (std::size_t s = 0; s < nb.size(); ++s) {
        std::size_t y = a.adjacency[x][s];
        std::size_t target = b.neighbor_over(m[x], alpha(nb[s]));
        if (m[y] == n) {
          m[y] = target;
          stack.push_back(y);
        } else if (m[y] != target) {
          ok = false;
          break;
        }
      }
    }
    if (ok && verify_map_over(a, b, alpha, m)) return LiftWitness{alpha, std::move(m), "combinatorial"};
  }
  return std::nullopt;
}

inline std::optional<LiftWitness> lifts_combinatorial(const CoveringGraph& c, const Automorphism& alpha,
                                                      u64 cap = 1u << 24) {
  return isomorphism_over(c, c, alpha, cap);
}

// ---------------------------------------------------------------------------
// Brute-force classification by enumerating every T-reduced voltage
// assignment. Kernels are computed as explicit element sets so this path does
// not share the normal-form code.

struct OracleClass {
  VoltageAssignment representative;
  std::size_t assignments = 0;  // connected admissible assignments in the class
  std::size_t kernels = 0;      // distinct kernels in the class
};

namespace detail {

// Elements of {w in Z_N^b : sum w_i phi(x_i) = 0}, N the group exponent,
// encoded in mixed radix.
inline std::vector<u64> kernel_elements(const VoltageAssignment& phi, u64 N) {
  const std::size_t b = phi.values.size();
  u64 total = 1;
  for (std::size_t i = 0; i < b; ++i) total *= N;
  std::vector<u64> out;
  std::vector<u64> w(b, 0);
  for (u64 idx = 0; idx < total; ++idx) {
    u64 x = idx;
    for (std::size_t i = b; i-- > 0;) {
      w[i] = x % N;
      x /= N;
    }
    std::vector<u64> s = phi.group.zero();
    for (std::size_t i = 0; i < b; ++i)
      if (w[i]) s = phi.group.add(s, phi.group.scale(phi.values[i], w[i]));
    if (std::all_of(s.begin(), s.end(), [](u64 v) { return v == 0; })) out.push_back(idx);
  }
  return out;
}

inline std::vector<u64> push_elements(const std::vector<u64>& elems, const IntMatrix& S, u64 N) {
  const std::size_t b = S.rows();
  std::vector<u64> out;
  out.reserve(elems.size());
  std::vector<u64> w(b);
  for (u64 idx : elems) {
    u64 x = idx;
    for (std::size_t i = b; i-- > 0;) {
      w[i] = x % N;
      x /= N;
    }
    u64 y = 0;
    for (std::size_t j = 0; j < b; ++j) {
      i64 s = 0;
      for (std::size_t i = 0; i < b; ++i) s += static_cast<i64>(w[i]) * S(i, j);
      i64 r = s % static_cast<i64>(N);
      y = y * N + static_cast<u64>(r < 0 ? r + static_cast<i64>(N) : r);
    }
    out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline std::vector<OracleClass> brute_force_classify(const SpanningTree& t, const std::vector<Automorphism>& G_gens,
                                                     const AbelianGroupSpec& A,
                                                     const std::vector<Automorphism>& full_aut, u64 cap = 1u << 24) {
  const std::size_t b = t.betti_number();
  const u64 order = A.order();
  u128 total = 1;
  for (std::size_t i = 0; i < b; ++i) {
    total *= order;
    if (total > cap) fail(Errc::cap_exceeded, "voltage space exceeds cap");
  }
  u64 N = 1;
  for (u64 f : A.factors()) N = std::lcm(N, f);
  std::vector<IntMatrix> SG, SF;
  for (const auto& g : G_gens) SG.push_back(induced_matrix(t, g));
  for (const auto& g : full_aut) SF.push_back(induced_matrix(t, g));
  std::map<std::vector<u64>, std::pair<VoltageAssignment, std::size_t>> by_kernel;
  for (u64 idx = 0; idx < static_cast<u64>(total); ++idx) {
    VoltageAssignment phi{A, {}};
    u64 x = idx;
    for (std::size_t i = 0; i < b; ++i) {
      phi.values.push_back(A.element(x % order));
      x /= order;
    }
    std::reverse(phi.values.begin(), phi.values.end());
    if (!is_connected_voltage(phi)) continue;
    auto ker = detail::kernel_elements(phi, N);
    bool ok = true;
    for (const auto& S : SG)
      if (detail::push_elements(ker, S, N) != ker) {
        ok = false;
        break;
      }
    if (!ok) continue;
    auto it = by_kernel.find(ker);
    if (it == by_kernel.end()) by_kernel.emplace(std::move(ker), std::make_pair(phi, std::size_t{1}));
    else ++it->second.second;
  }
  std::vector<const std::vector<u64>*> keys;
  for (const auto& kv : by_kernel) keys.push_back(&kv.first);
  std::map<const std::vector<u64>*, std::size_t> pos;
  for (std::size_t i = 0; i < keys.size(); ++i) pos[keys[i]] = i;
  std::vector<std::size_t> uf(keys.size());
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](std::size_t a) {
    while (uf[a] != a) a = uf[a] = uf[uf[a]];
    return a;
  };
  for (std::size_t i = 0; i < keys.size(); ++i)
    for (const auto& S : SF) {
      auto img = detail::push_elements(*keys[i], S, N);
      auto it = by_kernel.find(img);
      if (it == by_kernel.end()) continue;  // image not G-admissible
      std::size_t j = pos[&it->first];
      uf[find(i)] = find(j);
    }
  std::map<std::size_t, OracleClass> classes;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto& cl = classes.try_emplace(find(i), OracleClass{by_kernel.at(*keys[i]).first, 0, 0}).first->second;
    cl.assignments += by_kernel.at(*keys[i]).second;
    ++cl.kernels;
  }
  std::vector<OracleClass> out;
  for (auto& kv : classes) out.push_back(std::move(kv.second));
  return out;
}

}  // namespace covlift
