#include <gtest/gtest.h>

#include "support.hpp"

using namespace covlift;
using namespace covlift::testing;

TEST(Homology, ArcClasses) {
  PetersenData P = petersen();
  const Arc x3 = P.tree.cotree_arcs()[2];
  HomologyVector e3(6, 0);
  e3[2] = 1;
  EXPECT_EQ(arc_homology_class(P.tree, x3), e3);
  e3[2] = -1;
  EXPECT_EQ(arc_homology_class(P.tree, x3.reversed()), e3);
  for (const Edge& e : P.tree.tree_edges()) EXPECT_EQ(arc_homology_class(P.tree, {e.u, e.v}), HomologyVector(6, 0));
}

TEST(Homology, WalkClasses) {
  PetersenData P = petersen();
  for (std::size_t i = 0; i < 6; ++i) {
    Walk L = fundamental_loop(P.tree, P.tree.cotree_arcs()[i]);
    HomologyVector e(6, 0);
    e[i] = 1;
    EXPECT_EQ(walk_homology_class(P.tree, L), e);
    EXPECT_EQ(walk_homology_class(P.tree, concat(L, L.reversed())), HomologyVector(6, 0));
  }
  Walk inside_tree = concat(tree_walk(P.tree, 9), tree_walk(P.tree, 9).reversed());
  EXPECT_EQ(walk_homology_class(P.tree, inside_tree), HomologyVector(6, 0));
  // a loop traversed twice has twice the class
  Walk L4 = fundamental_loop(P.tree, P.tree.cotree_arcs()[3]);
  EXPECT_EQ(walk_homology_class(P.tree, concat(L4, L4)), (HomologyVector{0, 0, 0, 2, 0, 0}));
  EXPECT_THROW(walk_homology_class(P.tree, Walk{{0, 0}}), Error);
}

TEST(Homology, PrintedInducedMatrices) {
  PetersenData P = petersen();
  auto printed = petersen_printed_induced_matrices();
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(induced_matrix(P.tree, P.alphas[i]), printed[i]) << "alpha_" << i + 1;
  EXPECT_EQ(induced_matrix(P.tree, Automorphism::identity(10)), IntMatrix::identity(6));
}

TEST(Homology, CompositionRuleAndDeterminants) {
  PetersenData P = petersen();
  auto full = group_closure(P.graph, P.alphas);
  std::map<Automorphism, IntMatrix> S;
  for (const auto& a : full) S.emplace(a, induced_matrix(P.tree, a));
  for (const auto& a : full) {
    i64 d = S.at(a).determinant();
    EXPECT_TRUE(d == 1 || d == -1);
    EXPECT_EQ(S.at(a) * S.at(a.inverse()), IntMatrix::identity(6));
  }
  for (std::size_t i = 0; i < full.size(); i += 7)
    for (std::size_t j = 0; j < full.size(); j += 5)
      EXPECT_EQ(S.at(compose(full[i], full[j])), S.at(full[j]) * S.at(full[i]));
}

TEST(Homology, TauFactorizations) {
  PetersenData P = petersen();
  EXPECT_EQ(tau_factorize(P.tree, P.alphas[0]).tau.to_cycles(1), "(26)(35)");
  EXPECT_EQ(tau_factorize(P.tree, P.alphas[2]).tau.to_cycles(1), "(153)(264)");
  EXPECT_EQ(tau_factorize(P.tree, P.alphas[3]).tau.to_cycles(1), "(14)(25)(36)");
  try {
    tau_factorize(P.tree, P.alphas[1]);
    FAIL() << "alpha_2 moves the tree";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_tree_preserving);
  }
  for (std::size_t i : {0u, 2u, 3u}) {
    auto f = tau_factorize(P.tree, P.alphas[i]);
    IntMatrix D = IntMatrix::identity(6), M(6, 6);
    for (std::size_t r = 0; r < 6; ++r) D(r, r) = f.signs[r];
    for (std::size_t j = 0; j < 6; ++j) M(static_cast<std::size_t>(f.tau(static_cast<int>(j))), j) = 1;
    EXPECT_EQ(D * M, induced_matrix(P.tree, P.alphas[i]));
  }
}

TEST(Homology, AutGTree) {
  PetersenData P = petersen();
  auto full = group_closure(P.graph, P.alphas);
  auto H = group_closure(P.graph, hgens(P));
  auto sub = aut_g_tree_subgroup(full, H, P.tree);
  auto expected = group_closure(P.graph, {P.alphas[0], P.alphas[2], P.alphas[3]});
  EXPECT_EQ(sub.size(), 12u);
  EXPECT_EQ(std::set<Automorphism>(sub.begin(), sub.end()), std::set<Automorphism>(expected.begin(), expected.end()));
  // with G the whole group every tree-preserving automorphism qualifies
  std::vector<Automorphism> tp;
  for (const auto& a : full)
    if (preserves_tree(P.tree, a)) tp.push_back(a);
  EXPECT_EQ(aut_g_tree_subgroup(full, full, P.tree), tp);
  SpanningTree t = spanning_tree(triangle());
  auto tri = all_automorphisms(triangle());
  auto trivial = group_closure(triangle(), {});
  std::vector<Automorphism> tri_tp;
  for (const auto& a : tri)
    if (preserves_tree(t, a)) tri_tp.push_back(a);
  EXPECT_EQ(aut_g_tree_subgroup(tri, trivial, t).size(), tri_tp.size());
}
