#include <gtest/gtest.h>

#include <functional>
#include <optional>

#include "covlift/io.hpp"
#include "support.hpp"

using namespace covlift;
using namespace covlift::testing;
using covlift::io::json;

namespace {

std::optional<Errc> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST(Io, GraphRoundTrip) {
  PetersenData P = petersen();
  json j = io::graph_to_json(P.tree, hgens(P), P.alphas);
  EXPECT_EQ(j.at("schema"), io::kSchema);
  auto in = io::graph_from_json(json::parse(j.dump()));
  EXPECT_TRUE(in.graph == P.graph);
  ASSERT_EQ(in.tree.cotree_arcs().size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(in.tree.cotree_arcs()[i], P.tree.cotree_arcs()[i]);
  auto gens = io::automorphisms_from_json(in.extra.at("generators"), in.graph);
  ASSERT_EQ(gens.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(gens[i], P.alphas[i]);
  EXPECT_EQ(io::automorphisms_from_json(in.extra.at("full_aut"), in.graph).size(), 4u);
}

TEST(Io, ShippedPetersenFile) {
  auto in = io::graph_from_json(io::read_json_file(COVLIFT_DATA_DIR "/petersen.json"));
  PetersenData P = petersen();
  EXPECT_TRUE(in.graph == P.graph);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(in.tree.cotree_arcs()[i], P.tree.cotree_arcs()[i]);
  EXPECT_EQ(io::automorphisms_from_json(in.extra.at("full_aut"), in.graph), P.alphas);
}

TEST(Io, DefaultTreeAndTriangle) {
  auto in = io::graph_from_json(json::parse(R"({"vertices": 3, "edges": [[0,1],[1,2],[0,2]]})"));
  EXPECT_EQ(in.tree.betti_number(), 1u);
  EXPECT_TRUE(in.extra.empty());
}

TEST(Io, GraphErrors) {
  EXPECT_EQ(code_of([] { io::parse_json_text("{\"vertices\": 3,", "x"); }), Errc::parse);
  EXPECT_EQ(code_of([] { io::graph_from_json(json::parse("[1,2]")); }), Errc::parse);
  EXPECT_EQ(code_of([] { io::graph_from_json(json::parse(R"({"edges": []})")); }), Errc::parse);
  EXPECT_EQ(code_of([] { io::graph_from_json(json::parse(R"({"vertices": 3, "edges": [[0,1,2]]})")); }), Errc::parse);
  EXPECT_EQ(code_of([] { io::graph_from_json(json::parse(R"({"vertices": "three", "edges": []})")); }), Errc::parse);
  EXPECT_EQ(code_of([] { io::read_json_file("/nonexistent/graph.json"); }), Errc::parse);
  EXPECT_THROW(io::graph_from_json(json::parse(R"({"vertices": 2, "edges": [[0,0]]})")), Error);
}

TEST(Io, Generators) {
  PetersenData P = petersen();
  auto a = io::automorphisms_from_text("(13)(67)(49)(58); (123)(468)(579)", P.graph);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0], P.alphas[0]);
  EXPECT_EQ(a[1], P.alphas[2]);
  auto b = io::automorphisms_from_text(R"j(["(45)(67)(89)", [0,1,2,3,5,4,7,6,9,8]])j", P.graph);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], P.alphas[3]);
  EXPECT_EQ(b[1], P.alphas[3]);
  EXPECT_EQ(code_of([&] { io::automorphisms_from_text("(01)", P.graph); }), Errc::not_automorphism);
  EXPECT_EQ(code_of([&] { io::automorphisms_from_text("(01", P.graph); }), Errc::parse);
  EXPECT_EQ(code_of([&] { io::automorphisms_from_text("[[0,1]]", P.graph); }), Errc::parse);
  EXPECT_EQ(code_of([&] { io::automorphisms_from_json(json::parse("{}"), P.graph); }), Errc::parse);
}

TEST(Io, MatrixAndVoltageRoundTrip) {
  ZpkContext c(3, 2);
  for (int t = 0; t < 20; ++t) {
    ZpkMatrix m = random_matrix(c, 3, 4);
    EXPECT_EQ(io::matrix_from_json(json::parse(io::matrix_to_json(m).dump())), m);
  }
  auto fixtures = instantiate_tables(11, 2);
  for (const auto& f : fixtures) {
    VoltageAssignment back = io::voltage_from_json(json::parse(io::voltage_to_json(f.voltage).dump()));
    EXPECT_EQ(back.group, f.voltage.group);
    EXPECT_EQ(back.values, f.voltage.values);
  }
  // negative entries are reduced into the factor
  auto v = io::voltage_from_json(json::parse(R"({"group": [4, 2], "columns": [[-1, 3], [2, 0]]})"));
  EXPECT_EQ(v.values[0], (std::vector<u64>{3, 1}));
  EXPECT_EQ(code_of([] { io::voltage_from_json(json::parse(R"({"group": [6], "columns": []})")); }),
            Errc::invalid_argument);
  EXPECT_EQ(code_of([] { io::matrix_from_json(json::parse(R"({"p": 2, "rows": []})")); }), Errc::parse);
  EXPECT_EQ(io::group_text(AbelianGroupSpec({4, 2})), "Z_4 x Z_2");
  EXPECT_EQ(io::group_text(AbelianGroupSpec(std::vector<u64>{})), "1");
}

TEST(Io, SolutionAndClassification) {
  PetersenData P = petersen();
  SearchProblem pr = make_search_problem(P.tree, hgens(P), P.alphas);
  Classification cl = classify(pr, {{2}, 1, {}, 1});
  json j = io::classification_to_json(cl);
  EXPECT_EQ(j.at("schema"), io::kSchema);
  const auto& classes = j.at("primes").at(0).at("levels").at(0).at("classes");
  EXPECT_EQ(classes.size(), 4u);
  for (const auto& c : classes) {
    EXPECT_TRUE(c.contains("family_tag"));
    EXPECT_TRUE(c.contains("voltage"));
    EXPECT_EQ(c.at("Q").size(), 6u);
  }
  // output is a pure function of the classification
  EXPECT_EQ(j.dump(), io::classification_to_json(classify(pr, {{2}, 1, {}, 1})).dump());
  AdmissibleSolution s{2, 1, std::vector<unsigned>(5, 0), petersen_q("Q1", 2, 1), Permutation::identity(6)};
  json sj = io::solution_to_json(s);
  EXPECT_EQ(sj.at("l"), 5);
  EXPECT_EQ(sj.at("omega_cycles"), "id");
}

TEST(Io, CoveringExport) {
  PetersenData P = petersen();
  CoveringGraph c = build_covering(P.tree, instantiate_tables(2, 1)[0].voltage);
  json j = io::covering_to_json(c);
  EXPECT_EQ(j.at("vertices"), 20);
  EXPECT_EQ(j.at("edges").size(), 30u);
  std::string list = io::covering_edge_list(c);
  EXPECT_EQ(std::count(list.begin(), list.end(), '\n'), 30);
  EXPECT_EQ(list.substr(0, 5), "0:(0)");
}

TEST(Io, TablesMatchShippedFiles) {
  auto [t1, t2] = expected_tables();
  EXPECT_EQ(io::fixture_table_to_json(t1), io::read_json_file(COVLIFT_DATA_DIR "/table1.json"));
  EXPECT_EQ(io::fixture_table_to_json(t2), io::read_json_file(COVLIFT_DATA_DIR "/table2.json"));
  EXPECT_EQ(io::petersen_graph_json(), io::read_json_file(COVLIFT_DATA_DIR "/petersen.json"));
}
