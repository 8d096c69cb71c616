#include "nusim/seeded.hpp"

#include <algorithm>
#include <cmath>

namespace nusim {

SeededSampler::SeededSampler(Pmf target, Index seed_size,
                             std::optional<std::vector<Index>> head_set)
    : target_(std::move(target)) {
  if (seed_size < 1) throw ConfigError("seeded sampler: seed size must be >= 1");
  head_ = head_set.value_or(target_.support());
  if (head_.empty()) throw ConfigError("seeded sampler: empty head set");
  std::sort(head_.begin(), head_.end());
  Real head_mass = 0;
  for (Index b : head_) {
    if (b < 0 || b >= target_.size()) throw ConfigError("seeded sampler: head symbol out of range");
    head_mass += target_(b);
  }
  epsilon_ = std::max(0.0, 1.0 - head_mass);

  table_.assign(std::size_t(seed_size), head_.front());
  Real cum = 0;
  Index boundary = 0;  // N_{i-1}
  for (Index b : head_) {
    cum += target_(b);
    const Index next = Index(std::floor(cum * Real(seed_size)));
    for (Index s = boundary; s < std::min(next, seed_size); ++s) table_[std::size_t(s)] = b;
    boundary = next;
  }
  // seeds at or past the last boundary keep the first head symbol
}

Pmf SeededSampler::induced_pmf() const {
  Vec mass = Vec::Zero(target_.size());
  for (Index s : table_) mass(s) += 1.0 / Real(table_.size());
  return Pmf(target_.alphabet(), std::move(mass));
}

Real SeededSampler::l1_distance() const { return variational_distance(induced_pmf(), target_); }

Real SeededSampler::max_head_deviation() const {
  const Pmf ind = induced_pmf();
  Real worst = 0;
  for (Index b : head_) worst = std::max(worst, std::abs(ind(b) - target_(b)));
  return worst;
}

std::vector<Index> high_mass_head_set(const Pmf& q, Real min_mass) {
  std::vector<Index> order(std::size_t(q.size()));
  for (Index i = 0; i < q.size(); ++i) order[std::size_t(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&q](Index a, Index b) { return q(a) > q(b); });
  std::vector<Index> head;
  Real mass = 0;
  for (Index i : order) {
    head.push_back(i);
    mass += q(i);
    if (mass >= min_mass) break;
  }
  std::sort(head.begin(), head.end());
  return head;
}

SeededSampler pmf_from_seed(const Pmf& q, Index ell, std::optional<std::vector<Index>> head_set) {
  return SeededSampler(q, ell, std::move(head_set));
}

Extractor::Extractor(Pmf source, Index block_len, Index bins)
    : source_(std::move(source)), block_len_(block_len), bins_(bins) {
  const Index total = checked_power(source_.size(), block_len_);
  if (bins_ < 1) throw ConfigError("extractor: bins must be >= 1");
  if (bins_ > total) throw ConfigError("extractor: more bins than tuples");

  bin_of_tuple_.resize(std::size_t(total));
  bin_mass_ = Vec::Zero(bins_);
  std::vector<int> digits(std::size_t(block_len_), 0);
  Real cum = 0;
  Real p_max = 0;
  for (Index idx = 0; idx < total; ++idx) {
    Real m = 1.0;
    for (Index pos = 0; pos < block_len_; ++pos) m *= source_(digits[std::size_t(pos)]);
    cum += m;
    p_max = std::max(p_max, m);
    Index bin = Index(std::ceil(cum * Real(bins_))) - 1;
    bin = std::clamp<Index>(bin, 0, bins_ - 1);
    bin_of_tuple_[std::size_t(idx)] = bin;
    bin_mass_(bin) += m;
    for (Index pos = block_len_ - 1; pos >= 0; --pos) {
      if (++digits[std::size_t(pos)] < source_.size()) break;
      digits[std::size_t(pos)] = 0;
    }
  }
  bin_mass_ /= bin_mass_.sum();
  v_to_uniform_ = (bin_mass_ - 1.0 / Real(bins_)).abs().sum();

  // interval construction: every bin's mass is within one tuple mass of 1/bins
  const Real per_bin = (bin_mass_ - 1.0 / Real(bins_)).abs().maxCoeff();
  if (per_bin > p_max + 1e-12) {
    throw Error("extractor: per-bin deviation exceeds the interval bound");
  }
  if (v_to_uniform_ > 2.0 * Real(bins_) * p_max + 1e-9) {
    throw Error("extractor: distance to uniform exceeds the construction bound");
  }
}

Index Extractor::map(std::span<const int> tuple) const {
  if (Index(tuple.size()) != block_len_) throw ConfigError("extractor: block length mismatch");
  Index idx = 0;
  for (int s : tuple) {
    if (s < 0 || Index(s) >= source_.size()) throw ConfigError("extractor: symbol out of range");
    idx = idx * source_.size() + s;
  }
  return bin_of_tuple_[std::size_t(idx)];
}

Real Extractor::bound() const {
  Real p_max = 1;  // max tuple mass = per-symbol max to the n-th power
  const Real sym_max = source_.max_mass();
  for (Index i = 0; i < block_len_; ++i) p_max *= sym_max;
  return 2.0 * Real(bins_) * p_max;
}

Pmf Extractor::bin_pmf() const { return Pmf(Alphabet::indexed("bin", bins_), bin_mass_); }

Extractor extract_intrinsic(const Pmf& p, Index n, Index bins) { return Extractor(p, n, bins); }

ConditionalEmulator::ConditionalEmulator(std::vector<Pmf> targets, Index seed_bins, Real head_mass)
    : seed_bins_(seed_bins) {
  if (targets.empty()) throw ConfigError("conditional emulator: no targets");
  samplers_.reserve(targets.size());
  for (auto& t : targets) {
    std::vector<Index> head = high_mass_head_set(t, head_mass);
    samplers_.emplace_back(std::move(t), seed_bins, std::move(head));
  }
}

ConditionalEmulator emulate_conditional(std::vector<Pmf> targets, Index seed_bins,
                                        Real head_mass) {
  return ConditionalEmulator(std::move(targets), seed_bins, head_mass);
}

}  // namespace nusim
