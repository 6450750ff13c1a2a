#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "covlift/covering.hpp"
#include "covlift/error.hpp"
#include "covlift/graph.hpp"
#include "covlift/oracle.hpp"
#include "covlift/petersen.hpp"
#include "covlift/search.hpp"
#include "covlift/zpk.hpp"

namespace covlift::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "covlift/1";

// Runs f and turns nlohmann errors into Errc::parse.
template <class F>
auto parsing(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(Errc::parse, what + ": " + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse, "cannot open " + path);
  return parsing(path, [&] { return json::parse(in); });
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  return parsing(what, [&] { return json::parse(text); });
}

// ---------------------------------------------------------------------------
// Graph input: {"vertices", "edges", "tree_edges"?, "cotree_arcs"?, "base_vertex"?}

struct GraphInput {
  Graph graph;
  SpanningTree tree;
  json extra;  // optional "generators" and "full_aut" entries, passed through
};

inline GraphInput graph_from_json(const json& j) {
  return parsing("graph", [&] {
    if (!j.is_object()) fail(Errc::parse, "graph file must be a JSON object");
    int n = j.at("vertices").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) fail(Errc::parse, "edges must be [u, v] pairs");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    Graph g(n, edges);
    int base = j.value("base_vertex", 0);
    std::optional<std::vector<Edge>> tree;
    std::optional<std::vector<Arc>> arcs;
    if (j.contains("tree_edges")) {
      tree.emplace();
      for (const auto& e : j.at("tree_edges")) {
        int u = e.at(0).get<int>(), v = e.at(1).get<int>();
        tree->push_back({std::min(u, v), std::max(u, v)});
      }
    }
    if (j.contains("cotree_arcs")) {
      arcs.emplace();
      for (const auto& a : j.at("cotree_arcs")) arcs->push_back({a.at(0).get<int>(), a.at(1).get<int>()});
    }
    SpanningTree t = spanning_tree(g, base, tree, arcs);
    json extra = json::object();
    for (const char* key : {"generators", "full_aut", "labels"})
      if (j.contains(key)) extra[key] = j.at(key);
    return GraphInput{g, t, extra};
  });
}

inline json graph_to_json(const SpanningTree& t, const std::vector<Automorphism>& gens = {},
                          const std::vector<Automorphism>& full = {}) {
  json j;
  j["schema"] = kSchema;
  j["vertices"] = t.graph().vertex_count();
  json edges = json::array();
  for (const Edge& e : t.graph().edges()) edges.push_back({e.u, e.v});
  j["edges"] = edges;
  j["base_vertex"] = t.base_vertex();
  json arcs = json::array();
  for (const Arc& a : t.cotree_arcs()) arcs.push_back({a.tail, a.head});
  j["cotree_arcs"] = arcs;
  auto cycles = [](const std::vector<Automorphism>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.perm().to_cycles(0));
    return a;
  };
  if (!gens.empty()) j["generators"] = cycles(gens);
  if (!full.empty()) j["full_aut"] = cycles(full);
  return j;
}

// A permutation given as a cycle string (0-based labels) or an image array.
inline Permutation permutation_from_json(const json& j, std::size_t n) {
  return parsing("permutation", [&] {
    if (j.is_string()) return Permutation::from_cycles(j.get<std::string>(), n, 0);
    auto img = j.get<std::vector<int>>();
    if (img.size() != n) fail(Errc::parse, "permutation array has wrong length");
    return Permutation(std::move(img));
  });
}

inline std::vector<Automorphism> automorphisms_from_json(const json& j, const Graph& g) {
  if (!j.is_array()) fail(Errc::parse, "generator list must be an array");
  std::vector<Automorphism> out;
  for (const auto& x : j) out.emplace_back(g, permutation_from_json(x, static_cast<std::size_t>(g.vertex_count())));
  return out;
}

// Command-line generator lists: a JSON array, or cycle strings separated by ';'.
inline std::vector<Automorphism> automorphisms_from_text(const std::string& text, const Graph& g) {
  std::size_t first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '[') return automorphisms_from_json(parse_json_text(text, "generator list"), g);
  std::vector<Automorphism> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.emplace_back(g, Permutation::from_cycles(item, static_cast<std::size_t>(g.vertex_count()), 0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matrices, solutions, voltages.

inline json matrix_to_json(const ZpkMatrix& m) {
  json j;
  j["p"] = m.ctx().p();
  j["k"] = m.ctx().k();
  j["rows"] = m.to_rows();
  return j;
}

inline ZpkMatrix matrix_from_json(const json& j) {
  return parsing("matrix", [&] {
    ZpkContext ctx(j.at("p").get<u64>(), j.at("k").get<unsigned>());
    return ZpkMatrix::from_rows(ctx, j.at("rows").get<std::vector<std::vector<i64>>>());
  });
}

inline json solution_to_json(const AdmissibleSolution& s) {
  json j;
  j["p"] = s.p;
  j["k"] = s.k;
  j["l"] = s.l();
  j["r"] = s.r;
  j["Q"] = s.Q.to_rows();
  j["omega"] = s.omega.images();
  j["omega_cycles"] = s.omega.to_cycles(1);
  return j;
}

// One column per cotree arc, as in the printed tables.
inline json voltage_to_json(const VoltageAssignment& v) {
  json j;
  j["schema"] = kSchema;
  j["group"] = v.group.factors();
  j["columns"] = v.values;
  return j;
}

inline VoltageAssignment voltage_from_json(const json& j) {
  return parsing("voltage", [&] {
    AbelianGroupSpec A(j.at("group").get<std::vector<u64>>());
    VoltageAssignment v{A, {}};
    for (const auto& c : j.at("columns")) v.values.push_back(A.reduce(c.get<std::vector<i64>>()));
    return v;
  });
}

inline std::string group_text(const AbelianGroupSpec& g) {
  if (g.rank() == 0) return "1";
  std::string s;
  for (std::size_t i = 0; i < g.rank(); ++i) s += (i ? " x Z_" : "Z_") + std::to_string(g.factors()[i]);
  return s;
}

inline json classification_to_json(const Classification& c) {
  json j;
  j["schema"] = kSchema;
  j["g_normal"] = c.g_normal;
  json primes = json::array();
  for (const auto& rep : c.primes) {
    json pj;
    pj["p"] = rep.p;
    pj["P0"] = rep.P0;
    pj["P"] = rep.P;
    json levels = json::array();
    std::size_t class_id = 0;
    for (const auto& [k, classes] : rep.classes) {
      json lj;
      lj["k"] = k;
      json cls = json::array();
      for (const auto& cl : classes) {
        json cj = solution_to_json(cl.solution);
        cj["class_id"] = class_id++;
        cj["family_tag"] = cl.family;
        cj["raw_count"] = cl.raw_count;
        VoltageAssignment v = voltage_from_solution(cl.solution);
        cj["group"] = group_text(v.group);
        cj["voltage"] = voltage_to_json(v);
        json vars = json::array();
        for (const auto& var : cl.variants) {
          json vj = solution_to_json(var);
          vj["voltage"] = voltage_to_json(voltage_from_solution(var));
          vars.push_back(vj);
        }
        cj["variants"] = vars;
        cls.push_back(cj);
      }
      lj["classes"] = cls;
      levels.push_back(lj);
    }
    pj["levels"] = levels;
    primes.push_back(pj);
  }
  j["primes"] = primes;
  return j;
}

// ---------------------------------------------------------------------------
// Covers, normal forms, fixture tables.

inline json covering_to_json(const CoveringGraph& c) {
  json j;
  j["schema"] = kSchema;
  j["group"] = c.group.factors();
  j["vertices"] = c.vertex_count();
  j["edge_count"] = c.edge_count();
  j["components"] = c.component_count();
  json edges = json::array();
  for (std::size_t x = 0; x < c.vertex_count(); ++x)
    for (std::size_t y : c.adjacency[x])
      if (x < y) edges.push_back({c.vertex_name(x), c.vertex_name(y)});
  j["edges"] = edges;
  return j;
}

// One "u:(..) v:(..)" pair per line.
inline std::string covering_edge_list(const CoveringGraph& c) {
  std::string s;
  for (std::size_t x = 0; x < c.vertex_count(); ++x)
    for (std::size_t y : c.adjacency[x])
      if (x < y) s += c.vertex_name(x) + " " + c.vertex_name(y) + "\n";
  return s;
}

inline json normal_form_to_json(const NormalFormResult& nf) {
  json j;
  j["schema"] = kSchema;
  j["Q"] = matrix_to_json(nf.Q);
  j["S"] = matrix_to_json(nf.S);
  j["X0"] = matrix_to_json(nf.X0);
  j["degrees"] = nf.degrees;
  return j;
}

inline json subgroup_to_json(const SubgroupForm& f) {
  json j;
  j["p"] = f.ctx.p();
  j["k"] = f.ctx.k();
  j["l"] = f.l;
  j["r"] = f.r;
  j["Q"] = f.Q.to_rows();
  j["omega"] = f.omega.images();
  j["omega_cycles"] = f.omega.to_cycles(1);
  return j;
}

inline const char* condition_name(PrimeCondition c) {
  switch (c) {
    case PrimeCondition::any:
      return "any";
    case PrimeCondition::equals:
      return "equals";
    case PrimeCondition::pm1_mod10:
      return "pm1_mod10";
  }
  return "any";
}

inline json fixture_table_to_json(const FixtureTable& t) {
  json j;
  j["schema"] = kSchema;
  j["title"] = t.title;
  json rows = json::array();
  for (const auto& r : t.rows) {
    json rj;
    rj["name"] = r.name;
    rj["group"] = r.group_text;
    rj["exponents"] = r.exponents;
    rj["columns"] = r.columns;
    rj["prime_condition"] = condition_name(r.prime_condition);
    if (r.prime_condition == PrimeCondition::equals) rj["prime"] = r.prime;
    rj["k_gt_1"] = r.needs_k_gt_1;
    rj["indexed_by_c"] = r.has_c;
    rj["paired"] = r.paired;
    rj["condition"] = r.condition_text;
    rj["admissible_for"] = r.admissible_for;
    rj["transitivity"] = r.transitivity;
    rows.push_back(rj);
  }
  j["rows"] = rows;
  return j;
}

inline json petersen_graph_json() {
  auto P = petersen();
  json j = graph_to_json(P.tree, {P.alphas[0], P.alphas[1], P.alphas[2]}, P.alphas);
  j["labels"] = petersen_vertex_labels();
  return j;
}

}  // namespace covlift::io
