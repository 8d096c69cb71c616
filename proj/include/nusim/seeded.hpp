#pragma once

#include <optional>
#include <vector>

#include "nusim/prob.hpp"

namespace nusim {

// Deterministic table emulating one draw from `target` using a uniform seed
// over [0, seed_size). Built by the cumulative-floor construction: head
// symbols (in canonical order) get the seed intervals between consecutive
// floor(cumulative * seed_size) boundaries; leftover seeds map to the first
// head symbol so the table is total.
class SeededSampler {
 public:
  SeededSampler(Pmf target, Index seed_size, std::optional<std::vector<Index>> head_set);

  Index sample(Index seed) const { return table_.at(std::size_t(seed)); }
  Index seed_size() const { return Index(table_.size()); }
  const Pmf& target() const { return target_; }
  const std::vector<Index>& head() const { return head_; }
  const std::vector<Index>& table() const { return table_; }

  // Pmf of the table output under a uniform seed.
  Pmf induced_pmf() const;
  // L1 distance between induced_pmf and the target.
  Real l1_distance() const;
  // Certified bound: (mass outside the head set) + |head| / seed_size.
  Real distance_bound() const { return epsilon_ + Real(head_.size()) / Real(seed_size()); }
  // Largest |target(b) - induced(b)| over head symbols.
  Real max_head_deviation() const;
  Real head_epsilon() const { return epsilon_; }

 private:
  Pmf target_;
  std::vector<Index> head_;   // canonical (index) order
  std::vector<Index> table_;  // seed -> symbol index
  Real epsilon_;              // mass outside the head set
};

// Smallest set of highest-mass outcomes reaching the given mass (ties broken
// toward smaller canonical index), returned in canonical order.
std::vector<Index> high_mass_head_set(const Pmf& q, Real min_mass);

inline constexpr Real kDefaultHeadMass = 1.0 - 1e-6;

SeededSampler pmf_from_seed(const Pmf& q, Index ell,
                            std::optional<std::vector<Index>> head_set = std::nullopt);

// Near-uniform bits from a source block: tuple -> ceil(F * bins) where F is
// the lexicographic cumulative mass including the tuple's own mass. The
// per-bin deviation from 1/bins is at most the largest tuple mass, so the
// distance to uniform is at most 2 * bins * max tuple mass (asserted at
// construction).
class Extractor {
 public:
  Extractor(Pmf source, Index block_len, Index bins);

  Index bins() const { return bins_; }
  Index block_len() const { return block_len_; }
  const Pmf& source() const { return source_; }

  // Bin index in [0, bins) for a block of symbol ids.
  Index map(std::span<const int> tuple) const;
  // Exact distance of the bin distribution to uniform.
  Real v_to_uniform() const { return v_to_uniform_; }
  Real bound() const;
  // Exact bin distribution under the i.i.d. source.
  Pmf bin_pmf() const;

 private:
  Pmf source_;
  Index block_len_;
  Index bins_;
  std::vector<Index> bin_of_tuple_;  // lexicographic tuple index -> bin
  Vec bin_mass_;
  Real v_to_uniform_;
};

Extractor extract_intrinsic(const Pmf& p, Index n, Index bins);

// One seeded sampler per condition value, each built against its conditional
// target restricted to a high-mass head set.
class ConditionalEmulator {
 public:
  ConditionalEmulator(std::vector<Pmf> targets, Index seed_bins, Real head_mass = kDefaultHeadMass);

  Index num_conditions() const { return Index(samplers_.size()); }
  Index seed_bins() const { return seed_bins_; }
  Index evaluate(Index condition, Index seed) const {
    return samplers_.at(std::size_t(condition)).sample(seed);
  }
  const SeededSampler& sampler(Index condition) const {
    return samplers_.at(std::size_t(condition));
  }

 private:
  std::vector<SeededSampler> samplers_;
  Index seed_bins_;
};

ConditionalEmulator emulate_conditional(std::vector<Pmf> targets, Index seed_bins,
                                        Real head_mass = kDefaultHeadMass);

}  // namespace nusim
