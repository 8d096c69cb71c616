#pragma once

#include <span>
#include <vector>

#include "nusim/prob.hpp"
#include "nusim/rng.hpp"

namespace nusim {

// Strong letter typicality in the multiplicative form:
// |N(a|x)/n - p(a)| <= delta * p(a) for every letter a, with N(a|x) = 0
// whenever p(a) = 0. Joint typicality of a pair/triple is letter typicality
// of the flattened joint pmf.
struct TypicalityParams {
  Real delta;  // in (0,1)

  explicit TypicalityParams(Real d) : delta(d) {
    if (!(d > 0.0) || !(d < 1.0)) throw ConfigError("typicality delta must be in (0,1)");
  }
};

bool is_letter_typical(std::span<const int> tuple, const Pmf& base, const TypicalityParams& params);

// Combine per-position symbol ids of two (three) sequences into ids over the
// flattened pair (triple) alphabet, row-major in variable order.
std::vector<int> zip_pair(std::span<const int> a, std::span<const int> b, Index b_size);
std::vector<int> zip_triple(std::span<const int> a, std::span<const int> b, std::span<const int> c,
                            Index b_size, Index c_size);

enum class EvalMode { kExact, kMonteCarlo };

struct ProbEstimate {
  Real value = 0;
  Real std_error = 0;  // zero for exact evaluations
  bool exact = true;
};

// Probability that an i.i.d. block of length n drawn from `base` is letter
// typical. Exact mode enumerates type classes; Monte-Carlo mode samples
// `trials` blocks from the stream.
ProbEstimate typicality_probability(const Pmf& base, Index n, const TypicalityParams& params,
                                    EvalMode mode, Index trials = 0, RngStream* rng = nullptr);

}  // namespace nusim
