// Classifies the arc-transitive 2-primary coverings of the Petersen graph for
// k <= 3 and checks one of them by building the cover explicitly.

#include <iostream>

#include "covlift/covlift.hpp"

int main() {
  using namespace covlift;
  PetersenData P = petersen();
  std::vector<Automorphism> H{P.alphas[0], P.alphas[1], P.alphas[2]};
  SearchProblem pr = make_search_problem(P.tree, H, P.alphas);
  Classification cl = classify(pr, SearchConfig{{2}, 3, {}, 1});

  for (const auto& [k, classes] : cl.primes[0].classes) {
    std::cout << "k = " << k << ": " << classes.size() << " classes\n";
    for (const auto& c : classes) {
      VoltageAssignment phi = voltage_from_solution(c.solution);
      std::cout << "  " << c.family << ", |A| = " << phi.group.order()
                << (lifts_homological(P.tree, phi, P.alphas[3]) ? ", 3-arc-transitive" : ", 2-arc-transitive")
                << "\n";
    }
  }

  // X(2,2): a 40-vertex cover to which the whole S_5 lifts.
  VoltageAssignment x22 = instantiate_tables(2, 1)[2].voltage;
  CoveringGraph cover = build_covering(P.tree, x22);
  auto lift = lifts_combinatorial(cover, P.alphas[3]);
  std::cout << "X(2,2): " << cover.vertex_count() << " vertices, " << cover.edge_count() << " edges, alpha_4 "
            << (lift ? "lifts" : "does not lift") << "\n";
  return 0;
}
