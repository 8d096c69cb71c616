#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nusim/prob.hpp"
#include "nusim/rng.hpp"
#include "nusim/typicality.hpp"

namespace nusim {

using Symbol = std::uint8_t;

// Block length plus named rates in bits. Table sizes are round(2^{n * rate}),
// floored at one entry; the rounding adjustment is reported by callers.
struct RateConfig {
  Index n = 1;
  Real epsilon = 0;
  std::map<std::string, Real> rates;

  static Index size_for(Index n, Real rate);
  Index size(const std::string& name) const;
};

// Table of i.i.d. n-length codewords arranged as rows x cols.
class Codebook {
 public:
  Codebook(Alphabet alphabet, Index rows, Index cols, Index n, std::vector<Symbol> words,
           std::string rng_tag);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index n() const { return n_; }
  Index word_count() const { return rows_ * cols_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const std::string& rng_tag() const { return rng_tag_; }

  std::span<const Symbol> word(Index row, Index col) const {
    return std::span<const Symbol>(&words_[std::size_t((row * cols_ + col) * n_)],
                                   std::size_t(n_));
  }
  std::span<const Symbol> word_flat(Index idx) const {
    return std::span<const Symbol>(&words_[std::size_t(idx * n_)], std::size_t(n_));
  }

 private:
  Alphabet alphabet_;
  Index rows_, cols_, n_;
  std::vector<Symbol> words_;
  std::string rng_tag_;
};

// Three-tier table: cloud words over U, per-cloud X tables (rows x cols) and
// per-cloud Y tables, generated conditionally on the cloud word symbols.
class SuperCodebook {
 public:
  SuperCodebook(Alphabet u_alphabet, Alphabet x_alphabet, Alphabet y_alphabet, Index n,
                Index num_u, Index x_rows, Index x_cols, Index y_rows,
                std::vector<Symbol> u_words, std::vector<Symbol> x_words,
                std::vector<Symbol> y_words);

  Index n() const { return n_; }
  Index num_u() const { return num_u_; }
  Index x_rows() const { return x_rows_; }
  Index x_cols() const { return x_cols_; }
  Index y_rows() const { return y_rows_; }
  const Alphabet& u_alphabet() const { return u_alphabet_; }
  const Alphabet& x_alphabet() const { return x_alphabet_; }
  const Alphabet& y_alphabet() const { return y_alphabet_; }

  std::span<const Symbol> u_word(Index i) const {
    return {&u_words_[std::size_t(i * n_)], std::size_t(n_)};
  }
  std::span<const Symbol> x_word(Index i, Index j, Index k) const {
    return {&x_words_[std::size_t(((i * x_rows_ + j) * x_cols_ + k) * n_)], std::size_t(n_)};
  }
  std::span<const Symbol> y_word(Index i, Index l) const {
    return {&y_words_[std::size_t((i * y_rows_ + l) * n_)], std::size_t(n_)};
  }

 private:
  Alphabet u_alphabet_, x_alphabet_, y_alphabet_;
  Index n_, num_u_, x_rows_, x_cols_, y_rows_;
  std::vector<Symbol> u_words_, x_words_, y_words_;
};

// Draw one symbol by inverse CDF over the canonical order.
int sample_symbol(const Pmf& p, RngStream& rng);

Codebook gen_codebook(const Pmf& q, Index rows, Index cols, Index n, RngStream& rng,
                      std::string rng_tag = "codebook");
Codebook gen_codebook(const Pmf& q, const RateConfig& rc, RngStream& rng,
                      std::string rng_tag = "codebook");

// Joint must have axes (U, X, Y); tier words are drawn from the conditionals
// of X and Y given U, symbol by symbol against the cloud word.
SuperCodebook gen_superposition(const JointPmf& joint_uxy, Index num_u, Index x_rows,
                                Index x_cols, Index y_rows, Index n, RngStream& rng);

struct GapEstimate {
  Real value = 0;
  bool exact = true;
  bool undersampled = false;  // mc plug-in with fewer than ~10 hits per typical tuple
};

// Exact output pmf over n-tuples of a uniformly indexed codebook pushed
// through a memoryless channel.
Pmf induced_output_pmf(const Codebook& cb, const Channel& ch);

// Variational distance between the induced output pmf and target^(x)n.
GapEstimate resolvability_gap(const Codebook& cb, const Channel& ch, const Pmf& target,
                              EvalMode mode, Index trials = 0, RngStream* rng = nullptr);

enum class SuperTier { kX, kY };

// KL divergence (bits) between the induced output of the superposition table
// and target^(x)n. The channel input alphabet is the (tier symbol, cloud
// symbol) product, row-major.
GapEstimate kl_gap_superposition(const SuperCodebook& scb, SuperTier tier, const Channel& ch_pair,
                                 const Pmf& target, EvalMode mode, Index trials = 0,
                                 RngStream* rng = nullptr);

// Indices of the flat codebook whose words are jointly letter-typical with b
// under the two-variable joint (codeword variable first).
std::vector<Index> list_size(const Codebook& cb, std::span<const int> b, const JointPmf& joint,
                             Real delta);

}  // namespace nusim
