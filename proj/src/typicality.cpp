#include "nusim/typicality.hpp"

#include <cmath>

namespace nusim {

namespace {

// Per-letter admissible count windows for blocks of length n.
struct CountWindows {
  std::vector<Index> lo;
  std::vector<Index> hi;  // inclusive; hi < lo encodes an empty window
};

CountWindows windows(const Pmf& base, Index n, Real delta) {
  CountWindows w;
  const Index a = base.size();
  w.lo.resize(std::size_t(a));
  w.hi.resize(std::size_t(a));
  for (Index s = 0; s < a; ++s) {
    const Real p = base(s);
    if (p <= kSupportZero) {
      w.lo[std::size_t(s)] = 0;
      w.hi[std::size_t(s)] = 0;  // only a zero count is admissible
      continue;
    }
    const Real lo = Real(n) * p * (1.0 - delta);
    const Real hi = Real(n) * p * (1.0 + delta);
    w.lo[std::size_t(s)] = Index(std::ceil(lo - 1e-12));
    w.hi[std::size_t(s)] = Index(std::floor(hi + 1e-12));
  }
  return w;
}

// Sum over admissible count vectors of multinomial(n; counts) * prod p^count.
// Binomial factors are built by a running product so small cases stay exact.
Real sum_typical_types(const Pmf& base, Index n, const CountWindows& w) {
  const Index a = base.size();
  Real total = 0;
  // depth-first over symbols; weight carries multinomial * probability mass
  auto rec = [&](auto&& self, Index sym, Index used, Real weight) -> void {
    if (weight <= 0) return;
    if (sym == a - 1) {
      const Index c = n - used;
      if (c < w.lo[std::size_t(sym)] || c > w.hi[std::size_t(sym)]) return;
      Real term = weight;
      const Real p = base(sym);
      if (c > 0 && p <= kSupportZero) return;
      for (Index i = 0; i < c; ++i) term *= p;
      total += term;
      return;
    }
    const Real p = base(sym);
    for (Index c = w.lo[std::size_t(sym)]; c <= std::min(w.hi[std::size_t(sym)], n - used); ++c) {
      if (c > 0 && p <= kSupportZero) break;
      Real term = weight;
      // multiply the binomial C(n - used, c) and p^c incrementally
      for (Index i = 0; i < c; ++i) {
        term *= Real(n - used - i) / Real(i + 1) * p;
      }
      self(self, sym + 1, used + c, term);
    }
  };
  rec(rec, 0, 0, 1.0);
  return total;
}

}  // namespace

bool is_letter_typical(std::span<const int> tuple, const Pmf& base,
                       const TypicalityParams& params) {
  const Index n = Index(tuple.size());
  std::vector<Index> counts(std::size_t(base.size()), 0);
  for (int s : tuple) {
    if (s < 0 || Index(s) >= base.size()) throw ConfigError("typicality: symbol out of range");
    ++counts[std::size_t(s)];
  }
  for (Index s = 0; s < base.size(); ++s) {
    const Real p = base(s);
    const Real freq = Real(counts[std::size_t(s)]) / Real(n);
    if (p <= kSupportZero) {
      if (counts[std::size_t(s)] != 0) return false;
      continue;
    }
    if (std::abs(freq - p) > params.delta * p + 1e-12) return false;
  }
  return true;
}

std::vector<int> zip_pair(std::span<const int> a, std::span<const int> b, Index b_size) {
  if (a.size() != b.size()) throw ConfigError("zip: length mismatch");
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = int(Index(a[i]) * b_size + b[i]);
  return out;
}

std::vector<int> zip_triple(std::span<const int> a, std::span<const int> b, std::span<const int> c,
                            Index b_size, Index c_size) {
  if (a.size() != b.size() || a.size() != c.size()) throw ConfigError("zip: length mismatch");
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = int((Index(a[i]) * b_size + b[i]) * c_size + c[i]);
  }
  return out;
}

ProbEstimate typicality_probability(const Pmf& base, Index n, const TypicalityParams& params,
                                    EvalMode mode, Index trials, RngStream* rng) {
  if (mode == EvalMode::kExact) {
    checked_power(base.size(), n);  // budget guard
    ProbEstimate est;
    est.value = sum_typical_types(base, n, windows(base, n, params.delta));
    est.exact = true;
    return est;
  }
  if (trials <= 0 || rng == nullptr) throw ConfigError("mc typicality needs trials and a stream");
  // inverse-CDF sampling per symbol in canonical order
  Index hits = 0;
  std::vector<int> tuple(static_cast<std::size_t>(n), 0);
  for (Index t = 0; t < trials; ++t) {
    for (Index i = 0; i < n; ++i) {
      const Real u = rng->next_double();
      Real acc = 0;
      int chosen = int(base.size()) - 1;
      for (Index s = 0; s < base.size(); ++s) {
        acc += base(s);
        if (u < acc) {
          chosen = int(s);
          break;
        }
      }
      tuple[std::size_t(i)] = chosen;
    }
    if (is_letter_typical(tuple, base, params)) ++hits;
  }
  ProbEstimate est;
  est.value = Real(hits) / Real(trials);
  est.std_error = std::sqrt(std::max(est.value * (1.0 - est.value), 0.0) / Real(trials));
  est.exact = false;
  return est;
}

}  // namespace nusim
