#include "nusim/codebook.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

namespace nusim {

Index RateConfig::size_for(Index n, Real rate) {
  const Real raw = std::exp2(Real(n) * rate);
  if (raw > Real(kMaxCodebookSymbols)) throw BudgetError("codebook size exceeds budget");
  return std::max<Index>(1, Index(std::llround(raw)));
}

Index RateConfig::size(const std::string& name) const {
  auto it = rates.find(name);
  if (it == rates.end()) throw ConfigError("rate not configured: " + name);
  return size_for(n, it->second);
}

Codebook::Codebook(Alphabet alphabet, Index rows, Index cols, Index n,
                   std::vector<Symbol> words, std::string rng_tag)
    : alphabet_(std::move(alphabet)), rows_(rows), cols_(cols), n_(n), words_(std::move(words)),
      rng_tag_(std::move(rng_tag)) {
  if (rows_ < 1 || cols_ < 1 || n_ < 1) throw ConfigError("codebook: bad dimensions");
  if (Index(words_.size()) != rows_ * cols_ * n_) throw ConfigError("codebook: word table size");
}

SuperCodebook::SuperCodebook(Alphabet u_alphabet, Alphabet x_alphabet, Alphabet y_alphabet,
                             Index n, Index num_u, Index x_rows, Index x_cols, Index y_rows,
                             std::vector<Symbol> u_words, std::vector<Symbol> x_words,
                             std::vector<Symbol> y_words)
    : u_alphabet_(std::move(u_alphabet)), x_alphabet_(std::move(x_alphabet)),
      y_alphabet_(std::move(y_alphabet)), n_(n), num_u_(num_u), x_rows_(x_rows), x_cols_(x_cols),
      y_rows_(y_rows), u_words_(std::move(u_words)), x_words_(std::move(x_words)),
      y_words_(std::move(y_words)) {
  if (Index(u_words_.size()) != num_u_ * n_ ||
      Index(x_words_.size()) != num_u_ * x_rows_ * x_cols_ * n_ ||
      Index(y_words_.size()) != num_u_ * y_rows_ * n_) {
    throw ConfigError("superposition codebook: table sizes");
  }
}

int sample_symbol(const Pmf& p, RngStream& rng) {
  const Real u = rng.next_double();
  Real acc = 0;
  int last_supported = 0;
  for (Index s = 0; s < p.size(); ++s) {
    if (p(s) <= 0) continue;
    last_supported = int(s);
    acc += p(s);
    if (u < acc) return int(s);
  }
  return last_supported;
}

namespace {

void check_symbol_range(const Alphabet& a) {
  if (a.size() > 256) throw BudgetError("codeword alphabets are limited to 256 symbols");
}

}  // namespace

Codebook gen_codebook(const Pmf& q, Index rows, Index cols, Index n, RngStream& rng,
                      std::string rng_tag) {
  check_symbol_range(q.alphabet());
  if (rows * cols > kMaxCodebookSymbols / n) throw BudgetError("codebook generation budget");
  std::vector<Symbol> words(std::size_t(rows * cols * n));
  for (auto& w : words) w = Symbol(sample_symbol(q, rng));
  return Codebook(q.alphabet(), rows, cols, n, std::move(words), std::move(rng_tag));
}

Codebook gen_codebook(const Pmf& q, const RateConfig& rc, RngStream& rng, std::string rng_tag) {
  return gen_codebook(q, rc.size("R"), rc.size("R_prime"), rc.n, rng, std::move(rng_tag));
}

SuperCodebook gen_superposition(const JointPmf& joint_uxy, Index num_u, Index x_rows,
                                Index x_cols, Index y_rows, Index n, RngStream& rng) {
  if (joint_uxy.num_vars() != 3) throw ConfigError("superposition: (U,X,Y) joint required");
  check_symbol_range(joint_uxy.axis(0));
  check_symbol_range(joint_uxy.axis(1));
  check_symbol_range(joint_uxy.axis(2));
  if (x_rows * x_cols > kMaxCodebookSymbols / n || y_rows > kMaxCodebookSymbols / n) {
    throw BudgetError("superposition generation budget");
  }
  const Pmf qu = joint_uxy.marginal(0);
  const Channel x_given_u = joint_uxy.conditional(1, 0);
  const Channel y_given_u = joint_uxy.conditional(2, 0);

  std::vector<Symbol> u_words(std::size_t(num_u * n));
  for (auto& w : u_words) w = Symbol(sample_symbol(qu, rng));

  std::vector<Pmf> x_rows_by_u, y_rows_by_u;
  for (Index u = 0; u < qu.size(); ++u) {
    x_rows_by_u.push_back(x_given_u.row(u));
    y_rows_by_u.push_back(y_given_u.row(u));
  }

  std::vector<Symbol> x_words(std::size_t(num_u * x_rows * x_cols * n));
  std::vector<Symbol> y_words(std::size_t(num_u * y_rows * n));
  for (Index i = 0; i < num_u; ++i) {
    const Symbol* uw = &u_words[std::size_t(i * n)];
    for (Index jk = 0; jk < x_rows * x_cols; ++jk) {
      Symbol* dst = &x_words[std::size_t((i * x_rows * x_cols + jk) * n)];
      for (Index t = 0; t < n; ++t) dst[t] = Symbol(sample_symbol(x_rows_by_u[uw[t]], rng));
    }
    for (Index l = 0; l < y_rows; ++l) {
      Symbol* dst = &y_words[std::size_t((i * y_rows + l) * n)];
      for (Index t = 0; t < n; ++t) dst[t] = Symbol(sample_symbol(y_rows_by_u[uw[t]], rng));
    }
  }
  return SuperCodebook(joint_uxy.axis(0), joint_uxy.axis(1), joint_uxy.axis(2), n, num_u, x_rows,
                       x_cols, y_rows, std::move(u_words), std::move(x_words),
                       std::move(y_words));
}

namespace {

// Accumulate the product distribution of channel rows selected by `word`
// into `acc` with the given weight, via iterative tensor expansion.
void accumulate_word_output(const Channel& ch, std::span<const Symbol> word, Real weight,
                            Vec& scratch_a, Vec& scratch_b, Vec& acc) {
  const Index ny = ch.output_alphabet().size();
  Index len = 1;
  scratch_a(0) = weight;
  Vec* cur = &scratch_a;
  Vec* nxt = &scratch_b;
  for (Symbol w : word) {
    for (Index t = 0; t < len; ++t) {
      const Real base = (*cur)(t);
      for (Index y = 0; y < ny; ++y) (*nxt)(t * ny + y) = base * ch(y, w);
    }
    std::swap(cur, nxt);
    len *= ny;
  }
  acc.head(len) += cur->head(len);
}

}  // namespace

Pmf induced_output_pmf(const Codebook& cb, const Channel& ch) {
  if (ch.input_alphabet() != cb.alphabet()) throw ConfigError("induced output: channel mismatch");
  const Index total = checked_power(ch.output_alphabet().size(), cb.n(), kMaxExactOutputTuples);
  Vec acc = Vec::Zero(total);
  Vec sa(total), sb(total);
  const Real weight = 1.0 / Real(cb.word_count());
  for (Index w = 0; w < cb.word_count(); ++w) {
    accumulate_word_output(ch, cb.word_flat(w), weight, sa, sb, acc);
  }
  return Pmf(Alphabet::power(ch.output_alphabet(), cb.n()), std::move(acc));
}

GapEstimate resolvability_gap(const Codebook& cb, const Channel& ch, const Pmf& target,
                              EvalMode mode, Index trials, RngStream* rng) {
  if (mode == EvalMode::kExact) {
    GapEstimate est;
    est.value = variational_distance(induced_output_pmf(cb, ch), product_extend(target, cb.n()));
    return est;
  }
  if (trials <= 0 || rng == nullptr) throw ConfigError("mc gap needs trials and a stream");
  // plug-in estimate from empirical frequencies of sampled outputs
  std::unordered_map<Index, Index> counts;
  std::vector<int> out(std::size_t(cb.n()));
  const Index ny = ch.output_alphabet().size();
  for (Index t = 0; t < trials; ++t) {
    const Index w = Index(rng->next_below(std::uint64_t(cb.word_count())));
    auto word = cb.word_flat(w);
    for (Index i = 0; i < cb.n(); ++i) {
      const Pmf row = ch.row(word[std::size_t(i)]);
      out[std::size_t(i)] = sample_symbol(row, *rng);
    }
    ++counts[tuple_to_index(out, ny)];
  }
  Real v = 0;
  Real covered = 0;
  for (const auto& [idx, c] : counts) {
    Real pm = 1.0;
    auto tup = index_to_tuple(idx, ny, cb.n());
    for (int s : tup) pm *= target(s);
    v += std::abs(Real(c) / Real(trials) - pm);
    covered += pm;
  }
  GapEstimate est;
  est.value = v + (1.0 - covered);
  est.exact = false;
  est.undersampled = Real(trials) < 10.0 * std::exp2(Real(cb.n()) * target.entropy_bits());
  return est;
}

GapEstimate kl_gap_superposition(const SuperCodebook& scb, SuperTier tier, const Channel& ch_pair,
                                 const Pmf& target, EvalMode mode, Index trials, RngStream* rng) {
  const Index nu = scb.num_u();
  const Index inner = tier == SuperTier::kX ? scb.x_rows() * scb.x_cols() : scb.y_rows();
  const Index tier_size =
      tier == SuperTier::kX ? scb.x_alphabet().size() : scb.y_alphabet().size();
  if (ch_pair.input_alphabet().size() != tier_size * scb.u_alphabet().size()) {
    throw ConfigError("superposition kl: pair channel input size mismatch");
  }
  const Index ny = ch_pair.output_alphabet().size();
  auto pair_word = [&](Index i, Index inner_idx, std::vector<Symbol>& buf) {
    const auto uw = scb.u_word(i);
    const auto tw = tier == SuperTier::kX
                        ? scb.x_word(i, inner_idx / scb.x_cols(), inner_idx % scb.x_cols())
                        : scb.y_word(i, inner_idx);
    buf.resize(std::size_t(scb.n()));
    for (Index t = 0; t < scb.n(); ++t) {
      buf[std::size_t(t)] = Symbol(Index(tw[std::size_t(t)]) * scb.u_alphabet().size() +
                                   uw[std::size_t(t)]);
    }
  };

  if (mode == EvalMode::kExact) {
    const Index total = checked_power(ny, scb.n(), kMaxExactOutputTuples);
    Vec acc = Vec::Zero(total);
    Vec sa(total), sb(total);
    const Real weight = 1.0 / Real(nu * inner);
    std::vector<Symbol> buf;
    for (Index i = 0; i < nu; ++i) {
      for (Index v = 0; v < inner; ++v) {
        pair_word(i, v, buf);
        accumulate_word_output(ch_pair, buf, weight, sa, sb, acc);
      }
    }
    Pmf induced(Alphabet::power(ch_pair.output_alphabet(), scb.n()), std::move(acc));
    GapEstimate est;
    est.value = kl_divergence_bits(induced, product_extend(target, scb.n()));
    return est;
  }
  if (trials <= 0 || rng == nullptr) throw ConfigError("mc kl needs trials and a stream");
  std::unordered_map<Index, Index> counts;
  std::vector<Symbol> buf;
  std::vector<int> out(std::size_t(scb.n()));
  for (Index t = 0; t < trials; ++t) {
    const Index i = Index(rng->next_below(std::uint64_t(nu)));
    const Index v = Index(rng->next_below(std::uint64_t(inner)));
    pair_word(i, v, buf);
    for (Index p = 0; p < scb.n(); ++p) {
      out[std::size_t(p)] = sample_symbol(ch_pair.row(buf[std::size_t(p)]), *rng);
    }
    ++counts[tuple_to_index(out, ny)];
  }
  Real kl = 0;
  bool support_violation = false;
  for (const auto& [idx, c] : counts) {
    Real pm = 1.0;
    for (int s : index_to_tuple(idx, ny, scb.n())) pm *= target(s);
    const Real f = Real(c) / Real(trials);
    if (pm <= kSupportZero) {
      support_violation = true;
      continue;
    }
    kl += f * std::log2(f / pm);
  }
  GapEstimate est;
  est.value = support_violation ? std::numeric_limits<Real>::infinity() : std::max(kl, 0.0);
  est.exact = false;
  est.undersampled = Real(trials) < 10.0 * std::exp2(Real(scb.n()) * target.entropy_bits());
  return est;
}

std::vector<Index> list_size(const Codebook& cb, std::span<const int> b, const JointPmf& joint,
                             Real delta) {
  if (joint.num_vars() != 2) throw ConfigError("list size: pair joint required");
  const TypicalityParams params(delta);
  const Pmf flat = joint.flatten();
  std::vector<Index> hits;
  std::vector<int> a(std::size_t(cb.n()));
  for (Index idx = 0; idx < cb.word_count(); ++idx) {
    auto word = cb.word_flat(idx);
    for (Index t = 0; t < cb.n(); ++t) a[std::size_t(t)] = int(word[std::size_t(t)]);
    const auto zipped = zip_pair(a, b, joint.dim(1));
    if (is_letter_typical(zipped, flat, params)) hits.push_back(idx);
  }
  return hits;
}

}  // namespace nusim
