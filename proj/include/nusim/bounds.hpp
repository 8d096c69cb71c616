#pragma once

#include <string>

#include "nusim/common.hpp"

namespace nusim {

// Inputs for the closed-form finite-n bounds that pair with the simulated
// quantities.
struct BoundInputs {
  Index n = 1;
  Real delta = 0;          // typicality level
  Real mu = 0;             // smallest supported joint mass
  Index size_x = 2;        // |X| (|A| for the list bound)
  Index size_y = 2;        // |Y| (|B|)
  Index size_u = 1;        // |U|
  Real i_xy_given_u = 0;   // conditional mutual information, bits
  Real rate_col = 0;       // column rate of the superposition table
  Real rate_flat = 0;      // rate of the flat table in the list bound
  Real i_ab = 0;           // mutual information for the list bound
  Real head_epsilon = 0;   // seeded sampler: mass outside the head set
  Index head_size = 1;     // seeded sampler: |head|
  Index seed_count = 1;    // seeded sampler: number of seeds
  Real coupling_v = 0;     // variational distance for the coupling bound
};

struct BoundValues {
  // expected KL gap of a conditionally generated table against its target
  Real superposition_kl_bound = 0;
  // expected count of jointly typical codewords for an independent block
  Real list_size_bound = 0;
  // seeded sampler distance: head_epsilon + head_size / seed_count
  Real sampler_bound = 0;
  // optimal-coupling mismatch probability: V / 2
  Real coupling_mismatch_bound = 0;
  // sign-convention note for the list bound
  std::string list_bound_note;
};

BoundValues eval_bounds(const BoundInputs& b);

}  // namespace nusim
