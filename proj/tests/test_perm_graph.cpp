#include <gtest/gtest.h>

#include "support.hpp"

using namespace covlift;
using namespace covlift::testing;

namespace {

int cotree_crossings(const SpanningTree& t, const Walk& w, std::size_t* which = nullptr) {
  int n = 0;
  for (std::size_t i = 0; i + 1 < w.vertices.size(); ++i) {
    auto [idx, s] = t.cotree_position({w.vertices[i], w.vertices[i + 1]});
    if (idx >= 0) {
      ++n;
      if (which) *which = static_cast<std::size_t>(idx);
    }
  }
  return n;
}

}  // namespace

TEST(Permutation, CycleParsingFollowsArrowOrder) {
  Permutation p = Permutation::from_cycles("(14253)", 6, 1);
  EXPECT_EQ(p(0), 3);
  EXPECT_EQ(p(3), 1);
  EXPECT_EQ(p(1), 4);
  EXPECT_EQ(p(4), 2);
  EXPECT_EQ(p(2), 0);
  EXPECT_EQ(p(5), 5);
  EXPECT_EQ(p.to_cycles(1), "(14253)");
}

TEST(Permutation, SeparatedLabelsAndIdentity) {
  Permutation p = Permutation::from_cycles("(1, 12)(3 4)", 13, 0);
  EXPECT_EQ(p(1), 12);
  EXPECT_EQ(p(12), 1);
  EXPECT_EQ(p(3), 4);
  EXPECT_TRUE(Permutation::from_cycles("id", 4).is_identity());
  EXPECT_TRUE(Permutation::from_cycles("()", 4).is_identity());
  EXPECT_EQ(Permutation::identity(5).to_cycles(), "id");
}

TEST(Permutation, ParseErrors) {
  EXPECT_THROW(Permutation::from_cycles("(12", 4), Error);
  EXPECT_THROW(Permutation::from_cycles("(1x)", 4), Error);
  EXPECT_THROW(Permutation::from_cycles("(12)(23)", 4), Error);
  EXPECT_THROW(Permutation::from_cycles("(19)", 4), Error);
  EXPECT_THROW(Permutation(std::vector<int>{0, 0, 1}), Error);
}

TEST(Permutation, CompositionAppliesRightFirst) {
  Permutation a = Permutation::from_cycles("(01)", 3), b = Permutation::from_cycles("(12)", 3);
  Permutation ab = compose(a, b);
  EXPECT_EQ(ab(1), 2);  // b: 1 -> 2, a fixes 2
  EXPECT_EQ(ab(2), 0);
  EXPECT_TRUE(compose(ab, ab.inverse()).is_identity());
  EXPECT_EQ(all_permutations(4).size(), 24u);
}

TEST(Graph, PetersenStructure) {
  PetersenData P = petersen();
  EXPECT_EQ(P.graph.vertex_count(), 10);
  EXPECT_EQ(P.graph.edge_count(), 15u);
  for (int v = 0; v < 10; ++v) EXPECT_EQ(P.graph.neighbors(v).size(), 3u);
  EXPECT_EQ(girth(P.graph), 5u);
  EXPECT_EQ(P.graph.betti_number(), 6u);
}

TEST(Graph, TriangleAndValidation) {
  Graph g = build_graph(3, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_EQ(g.betti_number(), 1u);
  EXPECT_THROW(build_graph(2, {{0, 0}, {0, 1}}), Error);
  EXPECT_THROW(build_graph(3, {{0, 1}, {1, 0}, {1, 2}}), Error);
  EXPECT_THROW(build_graph(4, {{0, 1}, {2, 3}}), Error);
  EXPECT_THROW(build_graph(2, {{0, 5}}), Error);
}

TEST(SpanningTree, PetersenExplicitArcs) {
  PetersenData P = petersen();
  ASSERT_EQ(P.tree.betti_number(), 6u);
  std::vector<Arc> expected{{5, 8}, {7, 8}, {4, 7}, {4, 9}, {6, 9}, {5, 6}};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(P.tree.cotree_arcs()[i].tail, expected[i].tail);
    EXPECT_EQ(P.tree.cotree_arcs()[i].head, expected[i].head);
  }
  std::vector<Edge> tree;
  for (const Edge& e : P.graph.edges())
    if (P.tree.is_tree_edge(e.u, e.v)) tree.push_back(e);
  SpanningTree t2 = spanning_tree(P.graph, 0, tree, expected);
  EXPECT_EQ(t2.tree_edges().size(), 9u);
}

TEST(SpanningTree, DefaultsAndErrors) {
  Graph g = triangle();
  SpanningTree t = spanning_tree(g);
  ASSERT_EQ(t.cotree_arcs().size(), 1u);
  EXPECT_EQ(t.cotree_arcs()[0].tail, 1);
  EXPECT_EQ(t.cotree_arcs()[0].head, 2);
  Graph sq = c4_chord();
  EXPECT_THROW(spanning_tree(sq, 0, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}}), Error);
  EXPECT_THROW(spanning_tree(sq, 0, std::vector<Edge>{{0, 1}, {1, 2}}), Error);
  // default arcs come out sorted by endpoints with min -> max orientation
  SpanningTree ts = spanning_tree(k4());
  for (std::size_t i = 0; i < ts.cotree_arcs().size(); ++i) {
    EXPECT_LT(ts.cotree_arcs()[i].tail, ts.cotree_arcs()[i].head);
    if (i) {
      auto a = ts.cotree_arcs()[i - 1], b = ts.cotree_arcs()[i];
      EXPECT_LT(std::make_pair(a.tail, a.head), std::make_pair(b.tail, b.head));
    }
  }
}

TEST(Walks, TreeWalks) {
  Graph path(3, {{0, 1}, {1, 2}});
  SpanningTree t = spanning_tree(path);
  EXPECT_EQ(tree_walk(t, 0).vertices, std::vector<int>{0});
  EXPECT_EQ(tree_walk(t, 2).vertices, (std::vector<int>{0, 1, 2}));
  PetersenData P = petersen();
  for (int v = 0; v < 10; ++v) {
    Walk w = tree_walk(P.tree, v);
    EXPECT_TRUE(w.valid_in(P.graph));
    EXPECT_EQ(w.vertices.front(), 0);
    EXPECT_EQ(w.vertices.back(), v);
    EXPECT_LE(w.vertices.size(), 10u);
    for (std::size_t i = 0; i + 1 < w.vertices.size(); ++i) EXPECT_TRUE(P.tree.is_tree_edge(w.vertices[i], w.vertices[i + 1]));
    for (std::size_t i = 0; i + 2 < w.vertices.size(); ++i) EXPECT_NE(w.vertices[i], w.vertices[i + 2]);
  }
}

TEST(Walks, FundamentalLoopsCrossOneCotreeEdge) {
  PetersenData P = petersen();
  for (std::size_t i = 0; i < 6; ++i) {
    Walk w = fundamental_loop(P.tree, P.tree.cotree_arcs()[i]);
    EXPECT_TRUE(w.closed());
    EXPECT_TRUE(w.valid_in(P.graph));
    std::size_t which = 99;
    EXPECT_EQ(cotree_crossings(P.tree, w, &which), 1);
    EXPECT_EQ(which, i);
  }
  for (const Edge& e : P.tree.tree_edges()) EXPECT_EQ(cotree_crossings(P.tree, fundamental_loop(P.tree, {e.u, e.v})), 0);
  SpanningTree t = spanning_tree(triangle());
  Walk tri = fundamental_loop(t, t.cotree_arcs()[0]);
  EXPECT_EQ(tri.vertices, (std::vector<int>{0, 1, 2, 0}));
}

TEST(Automorphisms, PetersenGroups) {
  PetersenData P = petersen();
  auto full = group_closure(P.graph, P.alphas);
  auto H = group_closure(P.graph, hgens(P));
  EXPECT_EQ(full.size(), 120u);
  EXPECT_EQ(H.size(), 60u);
  EXPECT_EQ(group_closure(P.graph, {}).size(), 1u);
  EXPECT_THROW(group_closure(P.graph, P.alphas, 100), Error);
  std::set<Automorphism> hs(H.begin(), H.end());
  for (const auto& a : H)
    for (const auto& b : H) EXPECT_TRUE(hs.count(compose(a, b)));
  for (const auto& a : H) EXPECT_TRUE(hs.count(a.inverse()));
  // brute force over all 10! permutations finds the same 120 automorphisms
  EXPECT_EQ(all_automorphisms(P.graph).size(), 120u);
}

TEST(Automorphisms, ValidationIsExact) {
  PetersenData P = petersen();
  EXPECT_THROW(Automorphism(P.graph, Permutation::from_cycles("(01)", 10)), Error);
  std::set<Automorphism> full;
  for (const auto& a : group_closure(P.graph, P.alphas)) full.insert(a);
  std::vector<int> v(10);
  std::iota(v.begin(), v.end(), 0);
  std::size_t accepted = 0, trials = 20000;
  for (std::size_t i = 0; i < trials; ++i) {
    std::shuffle(v.begin(), v.end(), rng());
    Permutation p(v);
    bool ok = Automorphism::is_automorphism(P.graph, p);
    EXPECT_EQ(ok, full.count(Automorphism(P.graph, ok ? p : Permutation::identity(10))) && ok);
    accepted += ok;
  }
  // 120 / 10! ~ 3.3e-5: essentially nothing is accepted at random
  EXPECT_LE(accepted, 5u);
}

TEST(Automorphisms, TreePreservation) {
  PetersenData P = petersen();
  EXPECT_TRUE(preserves_tree(P.tree, P.alphas[0]));
  EXPECT_FALSE(preserves_tree(P.tree, P.alphas[1]));
  EXPECT_TRUE(preserves_tree(P.tree, P.alphas[2]));
  EXPECT_TRUE(preserves_tree(P.tree, P.alphas[3]));
}
