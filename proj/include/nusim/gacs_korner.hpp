#pragma once

#include <vector>

#include "nusim/prob.hpp"

namespace nusim {

// Gacs-Korner common part of a joint pmf: the maximal random variable that is
// a deterministic function of X and of Y almost surely. Computed as the
// connected components of the bipartite support graph.
struct CommonPart {
  Alphabet u_alphabet;
  // Component label per X (resp. Y) symbol; -1 for symbols with zero marginal
  // mass (they belong to no component).
  std::vector<Index> u_of_x;
  std::vector<Index> u_of_y;
  Pmf u_pmf;

  Index label_of_x(Index x) const { return u_of_x.at(std::size_t(x)); }
  Index label_of_y(Index y) const { return u_of_y.at(std::size_t(y)); }
};

// Components are labeled in increasing order of their smallest X symbol.
// Masses below kSupportZero are treated as structural zeros.
CommonPart common_part(const JointPmf& joint);

// True iff the common part carries randomness (at least two labels).
bool is_nontrivial(const CommonPart& cp);

}  // namespace nusim
