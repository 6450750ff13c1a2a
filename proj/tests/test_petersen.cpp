#include <gtest/gtest.h>

#include "support.hpp"

using namespace covlift;
using namespace covlift::testing;

namespace {

struct Fixture {
  PetersenData P = petersen();
  std::vector<Automorphism> G = group_closure(P.graph, hgens(P));
  std::vector<Automorphism> full = group_closure(P.graph, P.alphas);
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

std::vector<std::string> names(u64 p, unsigned k) {
  std::vector<std::string> out;
  for (const auto& f : instantiate_tables(p, k)) out.push_back(f.name);
  return out;
}

using Cases = std::vector<std::pair<u64, unsigned>>;

}  // namespace

TEST(PetersenData, LabelsAreKneser) {
  const auto& lab = petersen_vertex_labels();
  ASSERT_EQ(lab.size(), 10u);
  EXPECT_EQ(std::set<std::string>(lab.begin(), lab.end()).size(), 10u);
  const Graph& g = fx().P.graph;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      bool disjoint = lab[i].find_first_of(lab[j]) == std::string::npos;
      EXPECT_EQ(g.has_edge(i, j), disjoint && i != j);
    }
}

TEST(PetersenData, GoldenRoots) {
  EXPECT_TRUE(golden_roots(2, 1).empty());
  EXPECT_TRUE(golden_roots(3, 2).empty());
  EXPECT_EQ(golden_roots(5, 1), std::vector<u64>{3});
  EXPECT_EQ(golden_roots(11, 1), (std::vector<u64>{4, 8}));
  for (u64 p : {11u, 19u, 29u, 31u, 41u})
    for (unsigned s : {1u, 2u, 3u, 5u, 8u}) {
      auto roots = golden_roots(p, s);
      ASSERT_EQ(roots.size(), 2u) << p << "^" << s;
      ZpkContext c(p, s);
      for (u64 x : roots) EXPECT_EQ(c.sub(c.sub(c.mul(x, x), x), 1), 0u);
      // the two roots sum to 1
      EXPECT_EQ(c.add(roots[0], roots[1]), 1u);
      // reduction is compatible with the smaller modulus
      if (s > 1) {
        auto lower = golden_roots(p, s - 1);
        std::set<u64> red{roots[0] % c.pow_p(s - 1), roots[1] % c.pow_p(s - 1)};
        EXPECT_EQ(red, std::set<u64>(lower.begin(), lower.end()));
      }
    }
}

TEST(PetersenData, SymbolicEntries) {
  EXPECT_EQ(resolve_sym(parse_sym("L"), 4, 8), 4);
  EXPECT_EQ(resolve_sym(parse_sym("-L"), 4, 8), -4);
  EXPECT_EQ(resolve_sym(parse_sym("M"), 4, 8), 8);
  EXPECT_EQ(resolve_sym(parse_sym("-M"), 4, 8), -8);
  EXPECT_EQ(resolve_sym(parse_sym("-1"), 4, 8), -1);
  EXPECT_EQ(resolve_sym(parse_sym("3"), 4, 8), 3);
  EXPECT_THROW(parse_sym("Z"), Error);
  EXPECT_THROW(petersen_q("Q9", 2, 1), Error);
}

TEST(Tables, Shape) {
  auto [t1, t2] = expected_tables();
  EXPECT_EQ(t1.rows.size(), 6u);
  EXPECT_EQ(t2.rows.size(), 7u);
  for (const auto* t : {&t1, &t2})
    for (const auto& r : t->rows) {
      EXPECT_EQ(r.columns.size(), 6u) << r.name;
      for (const auto& col : r.columns) EXPECT_EQ(col.size(), r.exponents.size()) << r.name;
      EXPECT_TRUE(r.admissible_for == "S5" || r.admissible_for == "A5");
    }
  for (const auto& r : t1.rows) EXPECT_FALSE(r.needs_k_gt_1);
  for (const auto& r : t2.rows) EXPECT_TRUE(r.needs_k_gt_1);
}

TEST(Tables, Instantiation) {
  EXPECT_EQ(names(2, 1), (std::vector<std::string>{"X(2,1)", "X'(2,1)", "X(2,2)", "X(2,6)"}));
  EXPECT_EQ(names(5, 1), (std::vector<std::string>{"X(5,3)", "X(5,6)"}));
  EXPECT_EQ(names(11, 1), (std::vector<std::string>{"X^+(11,3)", "X^-(11,3)", "X(11,6)"}));
  EXPECT_EQ(names(3, 1), std::vector<std::string>{"X(3,6)"});
  EXPECT_EQ(names(7, 2), std::vector<std::string>{"X_{2,6}(7,6)"});
  EXPECT_EQ(names(11, 3).size(), 7u);
  auto x53 = instantiate_tables(5, 1)[0];
  ASSERT_EQ(x53.name, "X(5,3)");
  EXPECT_EQ(x53.voltage.values[1], (std::vector<u64>{1, 3, 4}));
  EXPECT_EQ(x53.voltage.group.factors(), (std::vector<u64>{5, 5, 5}));
  // the c-indexed pair takes lambda modulo p^{k-c}
  for (const auto& f : instantiate_tables(11, 3)) {
    if (f.c == 0) continue;
    u64 q = f.c == 1 ? 11 : 121;
    EXPECT_EQ(group_invariants(f.voltage.group), (std::vector<u64>{q, q, q, 1331, 1331, 1331}));
  }
}

TEST(Tables, RowsAreConnectedAndAdmissible) {
  const auto& t = fx().P.tree;
  for (auto [p, k] : Cases{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {5, 1}, {5, 2}, {5, 3}, {11, 1}, {11, 2}, {11, 3}, {19, 2}}) {
    for (const auto& f : instantiate_tables(p, k)) {
      EXPECT_TRUE(is_connected_voltage(f.voltage)) << f.name;
      for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(lifts_homological(t, f.voltage, fx().P.alphas[i])) << f.name;
      EXPECT_EQ(lifts_homological(t, f.voltage, fx().P.alphas[3]), f.full_group_admissible) << f.name;
    }
  }
}

TEST(Tables, RowsArePairwiseDistinct) {
  const auto& t = fx().P.tree;
  for (auto [p, k] : Cases{{2, 1}, {2, 2}, {2, 3}, {5, 1}, {5, 2}, {11, 1}, {11, 2}, {11, 3}}) {
    auto inst = instantiate_tables(p, k);
    for (std::size_t i = 0; i < inst.size(); ++i)
      for (std::size_t j = i + 1; j < inst.size(); ++j) {
        const auto& a = inst[i];
        const auto& b = inst[j];
        bool partners = a.row == b.row && a.c == b.c && a.sign != 0;
        // every pair is distinct over G; only the lambda partners meet over the full group
        EXPECT_FALSE(isomorphic_coverings(t, a.voltage, b.voltage, fx().G)) << a.name << " " << b.name;
        EXPECT_EQ(isomorphic_coverings(t, a.voltage, b.voltage, fx().full).has_value(), partners)
            << a.name << " " << b.name;
      }
  }
}
