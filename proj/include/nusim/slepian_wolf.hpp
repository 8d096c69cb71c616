#pragma once

#include <vector>

#include "nusim/codebook.hpp"
#include "nusim/gacs_korner.hpp"
#include "nusim/seeded.hpp"

namespace nusim {

// Configuration of the distributed variant: three-tier codebooks keyed by the
// common part of the source, encoders that transmit (J) and (I, L), and a
// decoder holding the Y-tier word. Requires a non-trivial common part.
class SwConfig {
 public:
  SwConfig(JointPmf source, Index n, Real epsilon, Real delta);

  const JointPmf& source() const { return source_; }      // (X, Y)
  const JointPmf& joint_uxy() const { return joint_uxy_; }
  const CommonPart& common() const { return cp_; }
  Index n() const { return n_; }
  Real epsilon() const { return epsilon_; }
  Real delta() const { return delta_; }

  Real rate_u() const { return rate_u_; }      // H(U) + eps/2
  Real rate_x() const { return rate_x_; }      // H(X|Y) + eps/2
  Real rate_x_col() const { return rate_x_col_; }  // I(X;Y|U) + eps/2
  Real rate_y() const { return rate_y_; }      // H(Y|U) + eps/2
  Index num_u() const { return num_u_; }
  Index x_rows() const { return x_rows_; }
  Index x_cols() const { return x_cols_; }
  Index y_rows() const { return y_rows_; }
  bool col_floor_applied() const { return col_floor_applied_; }

  Index seed_segment() const { return seg_; }  // ceil(3 eps n / H(U))
  Index extended_len() const { return n_ + 3 * seg_; }
  Index seed_bins() const { return seed_bins_; }  // round(2^{2 n eps})

 private:
  JointPmf source_;
  CommonPart cp_;
  JointPmf joint_uxy_;
  Index n_;
  Real epsilon_, delta_;
  Real rate_u_, rate_x_, rate_x_col_, rate_y_;
  Index num_u_, x_rows_, x_cols_, y_rows_, seg_, seed_bins_;
  bool col_floor_applied_ = false;
};

// Build the (U, X, Y) joint induced by the common part labels.
JointPmf lift_with_common_part(const JointPmf& source, const CommonPart& cp);

struct SwCode {
  SwConfig config;
  SuperCodebook scb;
  Extractor u_seed;  // over U blocks of length seed_segment
  Extractor x_seed;  // over X blocks
  Extractor y_seed;  // over Y blocks
  Pmf source_flat;   // source().flatten(), kept for the decoder's search
};

SwCode sw_build(const SwConfig& cfg, RngStream& rng);

// Seeded selection among exact codeword matches: the i-th match (canonical
// order) owns the seeds between consecutive floor(i * ell / M) boundaries,
// evaluated in integer arithmetic. With no matches, index 0 is returned and
// the fallback flag set by the caller.
Index match_table_sample(std::span<const Index> matches, Index ell, Index seed);
// Exact L1 distance of the table output (uniform seed) to uniform-on-matches.
Real match_table_distance(Index match_count, Index ell);
// Largest per-match deviation |1/M - n_i/ell|.
Real match_table_head_deviation(Index match_count, Index ell);

struct SwEncodingX {
  Index i = 0, j = 0, k = 0;
  bool fallback_u = false, fallback_x = false;
  Real audit_slack_u = -2.0, audit_slack_x = -2.0;  // distance - bound
};
struct SwEncodingY {
  Index i = 0, l = 0;
  bool fallback_u = false, fallback_y = false;
  Real audit_slack_u = -2.0, audit_slack_y = -2.0;
};

SwEncodingX sw_encode_x(const SwCode& code, std::span<const int> x_extended);
SwEncodingY sw_encode_y(const SwCode& code, std::span<const int> y_extended);

struct SwDecoding {
  std::vector<int> x_hat;
  std::vector<int> y_hat;
  bool ambiguous = false;  // zero or multiple typical columns
};

SwDecoding sw_decode(const SwCode& code, Index j, Index i, Index l);

struct SwUniformityResult {
  Real v = 0;
  bool ok = false;
};
// Exact joint index uniformity via the factorization that holds when X and Y
// are conditionally independent given the common part; ok=false when that
// fails or the enumeration exceeds the budget.
SwUniformityResult sw_exact_uniformity(const SwCode& code);

struct SwCodebookMetrics {
  Real joint_uniformity_v = 0;  // V of (J, I, L) vs product uniform
  Real block_err = 0;
  Real fallback_rate_x = 0;
  Real fallback_rate_y = 0;
  Real ambiguity_rate = 0;
  Index symmetry_violations = 0;  // I mismatches between the encoders
  Index audit_violations = 0;
  Real audit_max_slack = -2.0;
  bool uniformity_exact = true;
  bool block_err_exact = false;
  bool undersampled = false;
};

struct SwMetrics {
  std::vector<SwCodebookMetrics> per_codebook;
  Real median_uniformity_v = 0;
  Real median_block_err = 0;
};

// Metrics for one realized code; uniformity is exact when the source is
// conditionally independent given the common part and the enumeration fits
// the budget, and block error is exact for small support^m.
SwCodebookMetrics sw_evaluate_code(const SwCode& code, Index source_trials,
                                   std::uint64_t master_seed, std::uint64_t trial_salt);

SwMetrics sw_evaluate(const SwConfig& cfg, Index codebook_trials, Index source_trials,
                      std::uint64_t master_seed);

}  // namespace nusim
