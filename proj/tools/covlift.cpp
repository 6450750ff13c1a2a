// covlift command-line front end.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "covlift/covlift.hpp"
#include "covlift/io.hpp"

namespace {

using covlift::io::json;
using namespace covlift;

enum ExitCode { kOk = 0, kFailure = 1, kParse = 2, kCap = 3 };

struct Common {
  std::string graph_path;
  std::string gens;
  std::string full_aut;
  std::string format = "json";
  std::string out;
  u64 cap = 0;
};

struct Loaded {
  io::GraphInput input;
  std::vector<Automorphism> gens;
  std::vector<Automorphism> full;
};

Loaded load(const Common& c) {
  if (c.graph_path.empty()) fail(Errc::parse, "--graph is required");
  Loaded l{io::graph_from_json(io::read_json_file(c.graph_path)), {}, {}};
  const Graph& g = l.input.graph;
  if (!c.gens.empty()) l.gens = io::automorphisms_from_text(c.gens, g);
  else if (l.input.extra.contains("generators")) l.gens = io::automorphisms_from_json(l.input.extra["generators"], g);
  if (!c.full_aut.empty()) l.full = io::automorphisms_from_text(c.full_aut, g);
  else if (l.input.extra.contains("full_aut")) l.full = io::automorphisms_from_json(l.input.extra["full_aut"], g);
  else l.full = l.gens;
  return l;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) fail(Errc::invalid_argument, "cannot write " + c.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string join(const std::vector<u64>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

std::string columns_text(const VoltageAssignment& v) {
  std::string s;
  for (std::size_t i = 0; i < v.values.size(); ++i) s += (i ? " " : "") + std::string("(") + join(v.values[i]) + ")";
  return s;
}

std::vector<u64> parse_u64_list(const std::string& text) {
  std::vector<u64> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(Errc::parse, "bad integer list: " + text);
    }
  }
  return out;
}

unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("COVLIFT_THREADS")) {
    try {
      unsigned v = static_cast<unsigned>(std::stoul(env));
      if (v > 0) return std::min(v, hw);
    } catch (const std::exception&) {
      fail(Errc::parse, "COVLIFT_THREADS must be a positive integer");
    }
  }
  return hw;
}

// ---------------------------------------------------------------------------

int cmd_classify(const Common& c, const std::string& primes, unsigned kmax) {
  Loaded l = load(c);
  if (l.gens.empty()) fail(Errc::parse, "no generators given (--gens or \"generators\" in the graph file)");
  SearchConfig cfg;
  cfg.primes = parse_u64_list(primes);
  if (cfg.primes.empty()) fail(Errc::parse, "--primes is required");
  cfg.k_max = kmax;
  if (c.cap) cfg.caps.node_cap = cfg.caps.candidate_cap = c.cap;
  cfg.threads = thread_count();
  SearchProblem pr = make_search_problem(l.input.tree, l.gens, l.full);
  Classification cl = classify(pr, cfg);
  if (c.format == "json") {
    emit(c, dump(io::classification_to_json(cl)));
  } else if (c.format == "tsv") {
    std::string s = "p\tk\tclass_id\tfamily\tl\tr\tomega\tgroup\tvariants\tcolumns\n";
    for (const auto& rep : cl.primes) {
      std::size_t id = 0;
      for (const auto& [k, classes] : rep.classes)
        for (const auto& x : classes) {
          std::vector<u64> r(x.solution.r.begin(), x.solution.r.end());
          VoltageAssignment v = voltage_from_solution(x.solution);
          s += std::to_string(rep.p) + "\t" + std::to_string(k) + "\t" + std::to_string(id++) + "\t" + x.family +
               "\t" + std::to_string(x.solution.l()) + "\t" + join(r) + "\t" + x.solution.omega.to_cycles(1) + "\t" +
               io::group_text(v.group) + "\t" + std::to_string(x.variants.size()) + "\t" + columns_text(v) + "\n";
        }
    }
    emit(c, s);
  } else {
    std::ostringstream o;
    o << "G of order " << pr.G.size() << ", full group of order " << pr.full_aut.size()
      << (pr.g_normal ? ", G normal" : ", G not normal") << "\n";
    for (const auto& rep : cl.primes) {
      std::vector<u64> p0(rep.P0.begin(), rep.P0.end());
      o << "p = " << rep.p << "  P0 = {" << join(p0, ", ") << "}\n";
      for (const auto& [k, classes] : rep.classes) {
        o << "  k = " << k << ": " << classes.size() << " classes\n";
        for (const auto& x : classes) {
          std::vector<u64> r(x.solution.r.begin(), x.solution.r.end());
          VoltageAssignment v = voltage_from_solution(x.solution);
          o << "    [" << x.family << "] l=" << x.solution.l() << " r=(" << join(r) << ") omega="
            << x.solution.omega.to_cycles(1) << "  " << io::group_text(v.group);
          if (x.variants.size() > 1) o << "  (" << x.variants.size() << " variants over G)";
          o << "\n      " << columns_text(v) << "\n";
        }
      }
    }
    emit(c, o.str());
  }
  return kOk;
}

int cmd_verify(const Common& c, const std::string& voltage_path) {
  Loaded l = load(c);
  VoltageAssignment phi = io::voltage_from_json(io::read_json_file(voltage_path));
  const u64 cap = c.cap ? c.cap : u64{1} << 24;
  json j;
  j["schema"] = io::kSchema;
  j["group"] = phi.group.factors();
  j["connected"] = is_connected_voltage(phi);
  bool combinatorial = static_cast<u128>(phi.group.order()) * l.input.graph.vertex_count() <= cap;
  std::optional<CoveringGraph> cover;
  if (combinatorial && is_connected_voltage(phi)) cover = build_covering(l.input.tree, phi, cap);
  auto check = [&](const std::vector<Automorphism>& list) {
    json arr = json::array();
    for (const auto& a : list) {
      json e;
      e["automorphism"] = a.perm().to_cycles(0);
      e["homological"] = lifts_homological(l.input.tree, phi, a);
      if (cover) e["combinatorial"] = lifts_combinatorial(*cover, a, cap).has_value();
      arr.push_back(e);
    }
    return arr;
  };
  j["generators"] = check(l.gens);
  bool all = true;
  for (const auto& e : j["generators"]) all = all && e["homological"].get<bool>();
  j["G_admissible"] = all;
  if (c.format == "json") {
    emit(c, dump(j));
  } else {
    std::string s = c.format == "tsv" ? "automorphism\thomological\tcombinatorial\n" : "";
    if (c.format != "tsv")
      s += std::string("connected: ") + (j["connected"].get<bool>() ? "yes" : "no") + "\nG-admissible: " +
           (all ? "yes" : "no") + "\n";
    for (const auto& e : j["generators"]) {
      std::string comb = e.contains("combinatorial") ? (e["combinatorial"].get<bool>() ? "yes" : "no") : "-";
      std::string hom = e["homological"].get<bool>() ? "yes" : "no";
      if (c.format == "tsv") s += e["automorphism"].get<std::string>() + "\t" + hom + "\t" + comb + "\n";
      else s += "  " + e["automorphism"].get<std::string>() + ": lifts " + hom + " (combinatorial " + comb + ")\n";
    }
    emit(c, s);
  }
  return kOk;
}

int cmd_cover(const Common& c, const std::string& voltage_path) {
  Loaded l = load(c);
  VoltageAssignment phi = io::voltage_from_json(io::read_json_file(voltage_path));
  CoveringGraph cover = build_covering(l.input.tree, phi, c.cap ? c.cap : u64{1} << 22);
  if (c.format == "json") emit(c, dump(io::covering_to_json(cover)));
  else emit(c, io::covering_edge_list(cover));
  return kOk;
}

int cmd_oracle(const Common& c, const std::string& group) {
  Loaded l = load(c);
  AbelianGroupSpec A(parse_u64_list(group));
  if (A.rank() == 0) fail(Errc::parse, "--group is required, e.g. 2,2");
  std::vector<Automorphism> full = group_closure(l.input.graph, l.full);
  auto classes = brute_force_classify(l.input.tree, l.gens, A, full, c.cap ? c.cap : u64{1} << 24);
  json j;
  j["schema"] = io::kSchema;
  j["group"] = A.factors();
  json arr = json::array();
  for (const auto& cl : classes) {
    json e;
    e["assignments"] = cl.assignments;
    e["kernels"] = cl.kernels;
    e["representative"] = io::voltage_to_json(cl.representative);
    arr.push_back(e);
  }
  j["classes"] = arr;
  if (c.format == "json") {
    emit(c, dump(j));
  } else {
    std::string s = c.format == "tsv" ? "class\tassignments\tkernels\tcolumns\n"
                                      : std::to_string(classes.size()) + " classes over " + io::group_text(A) + "\n";
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const auto& cl = classes[i];
      if (c.format == "tsv")
        s += std::to_string(i) + "\t" + std::to_string(cl.assignments) + "\t" + std::to_string(cl.kernels) + "\t" +
             columns_text(cl.representative) + "\n";
      else
        s += "  " + std::to_string(i) + ": " + columns_text(cl.representative) + "  (" +
             std::to_string(cl.assignments) + " assignments, " + std::to_string(cl.kernels) + " kernels)\n";
    }
    emit(c, s);
  }
  return kOk;
}

int cmd_normal_form(const Common& c, const std::string& matrix_path) {
  ZpkMatrix x = io::matrix_from_json(io::read_json_file(matrix_path));
  NormalFormResult nf = normal_form(x);
  json j = io::normal_form_to_json(nf);
  j["subgroup"] = io::subgroup_to_json(subgroup_canonical_form(x));
  if (c.format == "json") {
    emit(c, dump(j));
  } else {
    std::vector<u64> d(nf.degrees.begin(), nf.degrees.end());
    SubgroupForm f = subgroup_canonical_form(x);
    std::vector<u64> r(f.r.begin(), f.r.end());
    emit(c, "degrees\t" + join(d) + "\nsubgroup_r\t" + join(r) + "\nsubgroup_omega\t" + f.omega.to_cycles(1) + "\n");
  }
  return kOk;
}

int cmd_tables(const Common& c, const std::string& which) {
  auto [t1, t2] = expected_tables();
  json j;
  if (which == "1") j = io::fixture_table_to_json(t1);
  else if (which == "2") j = io::fixture_table_to_json(t2);
  else if (which == "petersen") j = io::petersen_graph_json();
  else fail(Errc::parse, "--which must be 1, 2 or petersen");
  emit(c, dump(j));
  return kOk;
}

void add_common(CLI::App* sub, Common& c, bool graph = true) {
  if (graph) {
    sub->add_option("--graph", c.graph_path, "graph JSON file");
    sub->add_option("--gens", c.gens, "generators of G: cycle strings separated by ';' or a JSON array");
    sub->add_option("--full-aut", c.full_aut, "generators of the full automorphism group used for isomorphism");
  }
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "tsv", "pretty"}));
  sub->add_option("--cap", c.cap, "enumeration cap");
  sub->add_option("--out", c.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covlift: abelian regular coverings admitting lifts of a graph automorphism group"};
  app.require_subcommand(1);
  Common common;
  std::string primes, voltage, group, matrix, which = "1";
  unsigned kmax = 1;

  auto* classify_cmd = app.add_subcommand("classify", "classify G-admissible abelian coverings per prime");
  add_common(classify_cmd, common);
  classify_cmd->add_option("--primes", primes, "comma-separated primes")->required();
  classify_cmd->add_option("--kmax", kmax, "largest exponent k")->check(CLI::PositiveNumber);

  auto* verify_cmd = app.add_subcommand("verify", "test connectivity and liftability of a voltage assignment");
  add_common(verify_cmd, common);
  verify_cmd->add_option("--voltage", voltage, "voltage JSON file")->required();

  auto* cover_cmd = app.add_subcommand("cover", "emit the derived covering graph");
  add_common(cover_cmd, common);
  cover_cmd->add_option("--voltage", voltage, "voltage JSON file")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force classification over a small abelian group");
  add_common(oracle_cmd, common);
  oracle_cmd->add_option("--group", group, "cyclic factor orders, e.g. 2,2")->required();

  auto* nf_cmd = app.add_subcommand("normal-form", "normal form and subgroup presentation of a matrix over Z/p^k");
  add_common(nf_cmd, common, false);
  nf_cmd->add_option("--matrix", matrix, "matrix JSON file {p, k, rows}")->required();

  auto* tables_cmd = app.add_subcommand("tables", "emit the Petersen fixture tables or graph");
  add_common(tables_cmd, common, false);
  tables_cmd->add_option("--which", which, "1, 2 or petersen");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (*classify_cmd) return cmd_classify(common, primes, kmax);
    if (*verify_cmd) return cmd_verify(common, voltage);
    if (*cover_cmd) return cmd_cover(common, voltage);
    if (*oracle_cmd) return cmd_oracle(common, group);
    if (*nf_cmd) return cmd_normal_form(common, matrix);
    if (*tables_cmd) return cmd_tables(common, which);
  } catch (const Error& e) {
    std::cerr << "covlift: " << e.what() << "\n";
    if (e.code() == Errc::parse) return kParse;
    if (e.code() == Errc::cap_exceeded) return kCap;
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "covlift: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
