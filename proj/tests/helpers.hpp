#pragma once

#include <vector>

#include "nusim/prob.hpp"
#include "nusim/rng.hpp"

namespace nusim::testing {

// Random pmf with strictly positive entries (exponential spacings normalized).
inline Pmf random_pmf(Alphabet alphabet, RngStream& rng) {
  Vec mass(alphabet.size());
  for (Index i = 0; i < mass.size(); ++i) {
    mass(i) = -std::log(1.0 - rng.next_double() + 1e-12);
  }
  mass /= mass.sum();
  return Pmf(std::move(alphabet), std::move(mass));
}

// Random pmf where roughly `zero_fraction` of the symbols carry no mass.
inline Pmf random_sparse_pmf(Alphabet alphabet, RngStream& rng, Real zero_fraction) {
  Vec mass(alphabet.size());
  for (Index i = 0; i < mass.size(); ++i) {
    const bool zero = rng.next_double() < zero_fraction && i > 0;
    mass(i) = zero ? 0.0 : -std::log(1.0 - rng.next_double() + 1e-12);
  }
  mass /= mass.sum();
  return Pmf(std::move(alphabet), std::move(mass));
}

inline JointPmf random_joint(Alphabet a, Alphabet b, RngStream& rng) {
  Vec mass(a.size() * b.size());
  for (Index i = 0; i < mass.size(); ++i) {
    mass(i) = -std::log(1.0 - rng.next_double() + 1e-12);
  }
  mass /= mass.sum();
  return JointPmf({std::move(a), std::move(b)}, std::move(mass));
}

// Doubly symmetric binary source: X uniform, Y = X xor Bernoulli(p).
inline JointPmf dsbs(Real p) {
  Vec mass(4);
  mass << (1.0 - p) / 2, p / 2, p / 2, (1.0 - p) / 2;
  return JointPmf({Alphabet::binary(), Alphabet::binary()}, std::move(mass));
}

// Block-diagonal joint over {0..3}x{0..3}: blocks {0,1} and {2,3}, uniform
// within each block, with the given block masses.
inline JointPmf block_diag_4x4(Real mass0, Real mass1) {
  Alphabet a4 = Alphabet::indexed("s", 4);
  Vec mass = Vec::Zero(16);
  for (Index x = 0; x < 2; ++x) {
    for (Index y = 0; y < 2; ++y) mass(x * 4 + y) = mass0 / 4;
  }
  for (Index x = 2; x < 4; ++x) {
    for (Index y = 2; y < 4; ++y) mass(x * 4 + y) = mass1 / 4;
  }
  return JointPmf({a4, a4}, std::move(mass));
}

// Brute-force coupling search: explores the coupling polytope of (p, q) by
// marginal-preserving 2x2 mass rotations from the independent coupling, with
// diagonal-greedy moves mixed in. Returns the smallest mismatch probability
// found.
inline Real coupling_oracle_best_mismatch(const Pmf& p, const Pmf& q, RngStream& rng,
                                          int random_steps = 400) {
  const Index n = p.size();
  Mat joint(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) joint(i, j) = p(i) * q(j);
  }
  auto mismatch = [&joint, n]() {
    Real diag = 0;
    for (Index i = 0; i < n; ++i) diag += joint(i, i);
    return 1.0 - diag;
  };
  Real best = mismatch();
  for (int step = 0; step < random_steps; ++step) {
    const Index a = Index(rng.next_below(std::uint64_t(n)));
    const Index c = Index(rng.next_below(std::uint64_t(n)));
    const Index b = Index(rng.next_below(std::uint64_t(n)));
    const Index d = Index(rng.next_below(std::uint64_t(n)));
    if (a == c || b == d) continue;
    const Real lambda = std::min(joint(a, b), joint(c, d)) * rng.next_double();
    joint(a, b) -= lambda;
    joint(c, d) -= lambda;
    joint(a, d) += lambda;
    joint(c, b) += lambda;
    best = std::min(best, mismatch());
  }
  // diagonal-greedy passes: rotate row/column off-diagonal mass onto (a,a);
  // this provably reaches the maximum achievable diagonal
  for (int pass = 0; pass < 8 * int(n) * int(n); ++pass) {
    bool moved = false;
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n && !moved; ++b) {
        if (b == a || joint(a, b) <= 1e-15) continue;
        for (Index c = 0; c < n && !moved; ++c) {
          if (c == a || joint(c, a) <= 1e-15) continue;
          const Real lambda = std::min(joint(a, b), joint(c, a));
          joint(a, b) -= lambda;
          joint(c, a) -= lambda;
          joint(a, a) += lambda;
          joint(c, b) += lambda;
          moved = true;
        }
      }
      if (moved) break;
    }
    best = std::min(best, mismatch());
    if (!moved) break;
  }
  return best;
}

}  // namespace nusim::testing
