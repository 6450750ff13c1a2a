#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covlift/covering.hpp"
#include "covlift/error.hpp"
#include "covlift/graph.hpp"
#include "covlift/homology.hpp"
#include "covlift/search.hpp"
#include "covlift/zpk.hpp"

namespace covlift {

// Vertices are the 2-subsets of {a,b,c,d,e}:
// 0=ab 1=cd 2=ce 3=de 4=ae 5=be 6=ad 7=bd 8=ac 9=bc; adjacent iff disjoint.
inline const std::vector<std::string>& petersen_vertex_labels() {
  static const std::vector<std::string> labels{"ab", "cd", "ce", "de", "ae", "be", "ad", "bd", "ac", "bc"};
  return labels;
}

struct PetersenData {
  Graph graph;
  SpanningTree tree;
  std::vector<Automorphism> alphas;  // alpha_1 .. alpha_4
};

inline PetersenData petersen() {
  const auto& lab = petersen_vertex_labels();
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j)
      if (lab[i].find_first_of(lab[j]) == std::string::npos) edges.emplace_back(i, j);
  Graph g(10, edges);
  std::vector<Arc> cotree{{5, 8}, {7, 8}, {4, 7}, {4, 9}, {6, 9}, {5, 6}};
  SpanningTree t = spanning_tree(g, 0, std::nullopt, cotree);
  std::vector<Automorphism> alphas;
  for (const char* c : {"(13)(67)(49)(58)", "(19)(56)(28)(03)", "(123)(468)(579)", "(45)(67)(89)"})
    alphas.emplace_back(g, Permutation::from_cycles(c, 10, 0));
  return {g, t, alphas};
}

// The induced matrices of alpha_1..alpha_4 in the cotree basis, transcribed.
inline std::vector<IntMatrix> petersen_printed_induced_matrices() {
  return {
      IntMatrix::from_rows({{-1, 0, 0, 0, 0, 0},
                            {0, 0, 0, 0, 0, -1},
                            {0, 0, 0, 0, -1, 0},
                            {0, 0, 0, -1, 0, 0},
                            {0, 0, -1, 0, 0, 0},
                            {0, -1, 0, 0, 0, 0}}),
      IntMatrix::from_rows({{0, 0, 0, 0, -1, 0},
                            {0, -1, 0, 0, 0, 0},
                            {0, 1, 1, -1, 0, 0},
                            {0, 0, 0, -1, 0, 0},
                            {-1, 0, 0, 0, 0, 0},
                            {1, 0, 0, 0, -1, -1}}),
      IntMatrix::from_rows({{0, 0, -1, 0, 0, 0},
                            {0, 0, 0, -1, 0, 0},
                            {0, 0, 0, 0, 1, 0},
                            {0, 0, 0, 0, 0, -1},
                            {-1, 0, 0, 0, 0, 0},
                            {0, 1, 0, 0, 0, 0}}),
      IntMatrix::from_rows({{0, 0, 0, 1, 0, 0},
                            {0, 0, 0, 0, 1, 0},
                            {0, 0, 0, 0, 0, 1},
                            {1, 0, 0, 0, 0, 0},
                            {0, 1, 0, 0, 0, 0},
                            {0, 0, 1, 0, 0, 0}}),
  };
}

// ---------------------------------------------------------------------------
// Roots of x^2 - x - 1 in Z/p^s, sorted.

inline std::vector<u64> golden_roots(u64 p, unsigned s) {
  ZpkContext ctx(p, s);
  const u64 m = ctx.modulus();
  auto f = [&](u64 x) { return ctx.sub(ctx.sub(ctx.mul(x, x), x), 1 % m); };
  std::vector<u64> out;
  if (m <= (u64{1} << 20)) {
    for (u64 x = 0; x < m; ++x)
      if (f(x) == 0) out.push_back(x);
    return out;
  }
  // Hensel lifting from simple roots mod p; f'(x) = 2x - 1.
  ZpkContext c1(p, 1);
  for (u64 x = 0; x < p; ++x) {
    if (c1.sub(c1.sub(c1.mul(x, x), x), 1) != 0) continue;
    u64 d = c1.sub(c1.add(x, x), 1);
    if (d == 0) continue;  // repeated root: no lift claimed here
    u64 y = x;
    for (int it = 0; it < 7; ++it) {
      u64 fy = f(y);
      if (fy == 0) break;
      u64 dy = ctx.sub(ctx.add(y, y), 1);
      y = ctx.sub(y, ctx.mul(fy, ctx.inverse(dy)));
    }
    if (f(y) == 0) out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Symbolic entries: constant + same * lambda_{+-} + other * lambda_{-+}.

struct SymEntry {
  i64 constant = 0;
  int same = 0;
  int other = 0;
};

// "1", "-1", "L" (lambda with the row's sign), "-L", "M" (the other root), "-M".
inline SymEntry parse_sym(const std::string& s) {
  if (s == "L") return {0, 1, 0};
  if (s == "-L") return {0, -1, 0};
  if (s == "M") return {0, 0, 1};
  if (s == "-M") return {0, 0, -1};
  try {
    std::size_t used = 0;
    i64 v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return {v, 0, 0};
  } catch (const std::exception&) {
    fail(Errc::parse, "bad symbolic entry '" + s + "'");
  }
}

inline i64 resolve_sym(const SymEntry& e, i64 lam_same, i64 lam_other) {
  return e.constant + e.same * lam_same + e.other * lam_other;
}

// Paper matrices Q_1, Q'_1, Q_2, Q_3, Q_3^{+-} with the cut they belong to.
struct NamedQ {
  std::string name;
  std::size_t i0;
  std::vector<std::vector<std::string>> rows;
};

inline const std::vector<NamedQ>& petersen_q_matrices() {
  static const std::vector<NamedQ> qs{
      {"Q1", 5, {{"1", "0", "0", "0", "0", "1"}, {"0", "1", "0", "0", "0", "1"}, {"0", "0", "1", "0", "0", "1"},
                 {"0", "0", "0", "1", "0", "1"}, {"0", "0", "0", "0", "1", "1"}, {"0", "0", "0", "0", "0", "1"}}},
      {"Q1'", 5, {{"1", "0", "0", "0", "0", "0"}, {"0", "1", "0", "0", "0", "1"}, {"0", "0", "1", "0", "0", "0"},
                  {"0", "0", "0", "1", "0", "1"}, {"0", "0", "0", "0", "1", "0"}, {"0", "0", "0", "0", "0", "1"}}},
      {"Q2", 4, {{"1", "0", "0", "0", "1", "0"}, {"0", "1", "0", "0", "0", "1"}, {"0", "0", "1", "0", "1", "0"},
                 {"0", "0", "0", "1", "0", "1"}, {"0", "0", "0", "0", "1", "0"}, {"0", "0", "0", "0", "0", "1"}}},
      {"Q3", 3, {{"1", "0", "0", "3", "3", "4"}, {"0", "1", "0", "3", "2", "2"}, {"0", "0", "1", "3", "4", "3"},
                 {"0", "0", "0", "1", "0", "0"}, {"0", "0", "0", "0", "1", "0"}, {"0", "0", "0", "0", "0", "1"}}},
      {"Q3pm", 3, {{"1", "0", "0", "L", "M", "-1"}, {"0", "1", "0", "L", "-L", "-L"}, {"0", "0", "1", "L", "-1", "M"},
                   {"0", "0", "0", "1", "0", "0"}, {"0", "0", "0", "0", "1", "0"}, {"0", "0", "0", "0", "0", "1"}}},
  };
  return qs;
}

// Instantiates a named matrix over Z/p^k with the given lambda pair (ignored
// when the matrix has no lambda entries).
inline ZpkMatrix petersen_q(const std::string& name, u64 p, unsigned k, i64 lam_same = 0, i64 lam_other = 0) {
  for (const auto& q : petersen_q_matrices()) {
    if (q.name != name) continue;
    std::vector<std::vector<i64>> rows;
    for (const auto& r : q.rows) {
      std::vector<i64> row;
      for (const auto& e : r) row.push_back(resolve_sym(parse_sym(e), lam_same, lam_other));
      rows.push_back(std::move(row));
    }
    return ZpkMatrix::from_rows(ZpkContext(p, k), rows);
  }
  fail(Errc::invalid_argument, "unknown matrix " + name);
}

// ---------------------------------------------------------------------------
// Tables of coverings.

enum class PrimeCondition { any, equals, pm1_mod10 };

struct FixtureRow {
  std::string name;           // as printed, with "±" for paired rows
  std::string group_text;     // as printed
  std::vector<std::string> exponents;  // per voltage component: "1", "k", "k-1", "c"
  std::vector<std::vector<std::string>> columns;  // six columns, one entry per component
  PrimeCondition prime_condition = PrimeCondition::any;
  u64 prime = 0;              // for PrimeCondition::equals
  bool needs_k_gt_1 = false;
  bool has_c = false;         // family indexed by 1 <= c < k
  bool paired = false;        // carries lambda_{+-}
  std::string condition_text;
  std::string admissible_for;  // "S5" (full group) or "A5" (index-2 subgroup)
  std::string transitivity;    // "3-arc" or "2-arc"
};

struct FixtureTable {
  std::string title;
  std::vector<FixtureRow> rows;
};

inline std::pair<FixtureTable, FixtureTable> expected_tables() {
  using V = std::vector<std::string>;
  FixtureTable t1{"Elementary abelian coverings", {}};
  auto add1 = [&](std::string name, std::string grp, V exps, std::vector<V> cols, PrimeCondition pc, u64 prime,
                  bool paired, std::string cond, std::string adm) {
    FixtureRow r;
    r.name = std::move(name);
    r.group_text = std::move(grp);
    r.exponents = std::move(exps);
    r.columns = std::move(cols);
    r.prime_condition = pc;
    r.prime = prime;
    r.paired = paired;
    r.condition_text = std::move(cond);
    r.admissible_for = adm;
    r.transitivity = adm == "S5" ? "3-arc" : "2-arc";
    t1.rows.push_back(std::move(r));
  };
  add1("X(2,1)", "Z_2", {"1"}, {{"1"}, {"1"}, {"1"}, {"1"}, {"1"}, {"1"}}, PrimeCondition::equals, 2, false, "", "S5");
  add1("X'(2,1)", "Z_2", {"1"}, {{"1"}, {"0"}, {"1"}, {"0"}, {"1"}, {"0"}}, PrimeCondition::equals, 2, false, "", "A5");
  add1("X(2,2)", "Z_2^2", {"1", "1"}, {{"1", "0"}, {"0", "1"}, {"1", "0"}, {"0", "1"}, {"1", "0"}, {"0", "1"}},
       PrimeCondition::equals, 2, false, "", "S5");
  add1("X(5,3)", "Z_5^3", {"1", "1", "1"},
       {{"1", "0", "0"}, {"1", "3", "4"}, {"0", "0", "1"}, {"3", "1", "1"}, {"0", "1", "0"}, {"1", "4", "3"}},
       PrimeCondition::equals, 5, false, "", "S5");
  add1("X^±(p,3)", "Z_p^3", {"1", "1", "1"},
       {{"1", "0", "0"}, {"1", "L", "-1"}, {"0", "0", "1"}, {"L", "1", "1"}, {"0", "1", "0"}, {"1", "-1", "L"}},
       PrimeCondition::pm1_mod10, 0, true, "p≡±1 (mod 10)", "A5");
  add1("X(p,6)", "Z_p^6", V(6, "1"),
       {{"1", "0", "0", "0", "0", "0"},
        {"0", "0", "0", "0", "0", "1"},
        {"0", "0", "0", "0", "1", "0"},
        {"0", "0", "0", "1", "0", "0"},
        {"0", "0", "1", "0", "0", "0"},
        {"0", "1", "0", "0", "0", "0"}},
       PrimeCondition::any, 0, false, "p arbitrary", "S5");

  FixtureTable t2{"New families of abelian coverings", {}};
  auto add2 = [&](std::string name, std::string grp, V exps, std::vector<V> cols, PrimeCondition pc, u64 prime,
                  bool paired, bool has_c, std::string cond, std::string adm) {
    FixtureRow r;
    r.name = std::move(name);
    r.group_text = std::move(grp);
    r.exponents = std::move(exps);
    r.columns = std::move(cols);
    r.prime_condition = pc;
    r.prime = prime;
    r.paired = paired;
    r.needs_k_gt_1 = true;
    r.has_c = has_c;
    r.condition_text = std::move(cond);
    r.admissible_for = adm;
    r.transitivity = adm == "S5" ? "3-arc" : "2-arc";
    t2.rows.push_back(std::move(r));
  };
  add2("X_{k,1}(2,6)", "Z_{2^{k-1}}^5 x Z_{2^k}", {"k", "k-1", "k-1", "k-1", "k-1", "k-1"},
       {{"-1", "0", "0", "0", "0", "1"},
        {"-1", "0", "0", "0", "1", "0"},
        {"-1", "0", "0", "1", "0", "0"},
        {"-1", "0", "1", "1", "0", "0"},
        {"-1", "1", "0", "0", "0", "0"},
        {"1", "0", "0", "0", "0", "0"}},
       PrimeCondition::equals, 2, false, false, "k>1", "S5");
  add2("X'_{k,1}(2,6)", "Z_{2^{k-1}}^5 x Z_{2^k}", {"k", "k-1", "k-1", "k-1", "k-1", "k-1"},
       {{"0", "0", "0", "0", "0", "1"},
        {"-1", "0", "0", "0", "1", "0"},
        {"0", "0", "0", "1", "0", "0"},
        {"-1", "0", "1", "0", "0", "0"},
        {"0", "1", "0", "0", "0", "0"},
        {"1", "0", "0", "0", "0", "0"}},
       PrimeCondition::equals, 2, false, false, "k>1", "A5");
  add2("X_{k,2}(2,6)", "Z_{2^{k-1}}^4 x Z_{2^k}^2", {"k", "k", "k-1", "k-1", "k-1", "k-1"},
       {{"0", "1", "0", "0", "0", "1"},
        {"1", "0", "0", "0", "1", "0"},
        {"0", "1", "0", "1", "0", "0"},
        {"1", "0", "1", "0", "0", "0"},
        {"0", "1", "0", "0", "0", "0"},
        {"1", "0", "0", "0", "0", "0"}},
       PrimeCondition::equals, 2, false, false, "k>1", "S5");
  add2("X^±_{k,3}(p,3)", "Z_{p^k}^3", {"k", "k", "k"},
       {{"0", "0", "1"}, {"0", "1", "0"}, {"1", "-M", "-L"}, {"L", "L", "-L"}, {"-M", "1", "-L"}, {"1", "0", "0"}},
       PrimeCondition::pm1_mod10, 0, true, false, "k>1", "A5");
  add2("X_{k,3}(5,6)", "Z_{5^{k-1}}^3 x Z_{5^k}^3", {"k", "k", "k", "k-1", "k-1", "k-1"},
       {{"0", "0", "1", "0", "0", "0"},
        {"0", "1", "0", "0", "0", "0"},
        {"1", "2", "2", "0", "0", "1"},
        {"3", "3", "2", "0", "1", "0"},
        {"2", "1", "2", "1", "0", "0"},
        {"1", "0", "0", "0", "0", "0"}},
       PrimeCondition::equals, 5, false, false, "k>1", "S5");
  add2("X^±_{k,c,3}(p,6)", "Z_{p^c}^3 x Z_{p^k}^3", {"k", "k", "k", "c", "c", "c"},
       {{"0", "0", "1", "0", "0", "0"},
        {"0", "1", "0", "0", "0", "0"},
        {"1", "-M", "-L", "0", "0", "1"},
        {"L", "L", "-L", "0", "1", "0"},
        {"-M", "1", "-L", "1", "0", "0"},
        {"1", "0", "0", "0", "0", "0"}},
       PrimeCondition::pm1_mod10, 0, true, true, "k>c≥1", "A5");
  add2("X_{k,6}(p,6)", "Z_{p^k}^6", V(6, "k"),
       {{"1", "0", "0", "0", "0", "0"},
        {"0", "1", "0", "0", "0", "0"},
        {"0", "0", "1", "0", "0", "0"},
        {"0", "0", "0", "1", "0", "0"},
        {"0", "0", "0", "0", "1", "0"},
        {"0", "0", "0", "0", "0", "1"}},
       PrimeCondition::any, 0, false, false, "p arbitrary, k>1", "S5");
  return {t1, t2};
}

// A table row made concrete at (p, k[, c][, sign]).
struct FixtureInstance {
  std::string name;
  std::string row;  // row name as printed
  u64 p;
  unsigned k;
  unsigned c = 0;
  int sign = 0;  // +1 / -1 for paired rows
  VoltageAssignment voltage;
  bool full_group_admissible;
};

inline bool row_applies(const FixtureRow& r, u64 p, unsigned k) {
  switch (r.prime_condition) {
    case PrimeCondition::equals:
      if (p != r.prime) return false;
      break;
    case PrimeCondition::pm1_mod10:
      if (p % 10 != 1 && p % 10 != 9) return false;
      break;
    case PrimeCondition::any:
      break;
  }
  return r.needs_k_gt_1 ? k > 1 : k == 1;
}

inline std::vector<FixtureInstance> instantiate_row(const FixtureRow& r, u64 p, unsigned k) {
  std::vector<FixtureInstance> out;
  if (!row_applies(r, p, k)) return out;
  std::vector<unsigned> cs = r.has_c ? std::vector<unsigned>{} : std::vector<unsigned>{0};
  if (r.has_c)
    for (unsigned c = 1; c < k; ++c) cs.push_back(c);
  for (unsigned c : cs) {
    auto exp_of = [&](const std::string& e) -> unsigned {
      if (e == "1") return 1;
      if (e == "k") return k;
      if (e == "k-1") return k - 1;
      if (e == "c") return c;
      fail(Errc::parse, "bad exponent " + e);
    };
    std::vector<unsigned> exps;
    for (const auto& e : r.exponents) exps.push_back(exp_of(e));
    AbelianGroupSpec A = AbelianGroupSpec::p_group(p, exps);
    std::vector<std::pair<int, std::pair<i64, i64>>> variants;
    if (r.paired) {
      // lambda lives modulo p^{k-c} for the c-indexed row, modulo p^k otherwise
      auto roots = golden_roots(p, r.has_c ? k - c : k);
      if (roots.size() != 2) fail(Errc::precondition, "expected two golden roots for " + r.name);
      variants.push_back({+1, {static_cast<i64>(roots[0]), static_cast<i64>(roots[1])}});
      variants.push_back({-1, {static_cast<i64>(roots[1]), static_cast<i64>(roots[0])}});
    } else {
      variants.push_back({0, {0, 0}});
    }
    for (auto [sign, lam] : variants) {
      VoltageAssignment v{A, {}};
      for (const auto& col : r.columns) {
        std::vector<i64> x;
        for (const auto& e : col) x.push_back(resolve_sym(parse_sym(e), lam.first, lam.second));
        v.values.push_back(A.reduce(x));
      }
      std::string name = r.name;
      auto subst = [&](const std::string& from, const std::string& to) {
        for (std::size_t pos; (pos = name.find(from)) != std::string::npos;) name.replace(pos, from.size(), to);
      };
      if (r.paired) subst("±", sign > 0 ? "+" : "-");
      subst("k,", std::to_string(k) + ",");
      if (r.has_c) subst("c,", std::to_string(c) + ",");
      subst("(p,", "(" + std::to_string(p) + ",");
      out.push_back({name, r.name, p, k, c, sign, std::move(v), r.admissible_for == "S5"});
    }
  }
  return out;
}

inline std::vector<FixtureInstance> instantiate_tables(u64 p, unsigned k) {
  auto [t1, t2] = expected_tables();
  std::vector<FixtureInstance> out;
  for (const auto* t : {&t1, &t2})
    for (const auto& r : t->rows) {
      auto part = instantiate_row(r, p, k);
      out.insert(out.end(), part.begin(), part.end());
    }
  return out;
}

}  // namespace covlift
