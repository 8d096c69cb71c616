#pragma once

#include <vector>

#include "nusim/codebook.hpp"
#include "nusim/gacs_korner.hpp"
#include "nusim/seeded.hpp"

namespace nusim {

// Test channel for lossy coding with decoder side information: an auxiliary
// variable W drawn from X, a letterwise reconstruction from (W, Y), and a
// bounded distortion measure on (X, reconstruction).
struct TestChannel {
  Channel w_given_x;                            // X -> W
  Alphabet xhat_alphabet;
  std::vector<std::vector<Index>> reconstruct;  // [w][y] -> xhat
  Mat distortion;                               // d(x, xhat) in [0, d_max]
  Real d_max = 1.0;

  void validate(const JointPmf& source) const;
  // E[d(X, reconstruct(W, Y))] under source x w_given_x.
  Real expected_distortion(const JointPmf& source) const;
};

// Configuration of the near-uniform scheme with side information. Rates are
// derived from the source and test channel; the encoder output carries the
// row index only and a seed extracted from extra source symbols replaces the
// encoder's randomness.
class WzConfig {
 public:
  WzConfig(JointPmf source, TestChannel test_channel, Index n, Real epsilon, Real delta,
           Real target_distortion);

  const JointPmf& source() const { return source_; }       // (X, Y)
  const JointPmf& joint_xyw() const { return joint_xyw_; } // (X, Y, W)
  const TestChannel& test_channel() const { return tc_; }
  Index n() const { return n_; }
  Real epsilon() const { return epsilon_; }
  Real delta() const { return delta_; }
  Real target_distortion() const { return target_distortion_; }

  Real rate_row() const { return rate_row_; }    // I(X;W|Y) + 2 eps
  Real rate_col() const { return rate_col_; }    // I(W;Y) - eps
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  bool col_floor_applied() const { return col_floor_applied_; }
  Real seed_rate() const { return 2 * epsilon_; }
  Index seed_block() const { return seed_block_; }
  Index seed_bins() const { return seed_bins_; }
  Index extended_len() const { return n_ + seed_block_; }
  // True when the seed-bin count certifies the emulator distance <= eps/2
  // through the seeded-sampler bound (bins >= 2 * head size / eps).
  bool emulation_certified() const { return emulation_certified_; }

  Pmf w_marginal() const { return joint_xyw_.marginal(2); }
  Channel x_given_w() const { return joint_xyw_.conditional(0, 2); }
  Channel y_given_w() const { return joint_xyw_.conditional(1, 2); }
  Channel y_given_x() const { return source_.conditional(1, 0); }

 private:
  JointPmf source_;
  JointPmf joint_xyw_;
  TestChannel tc_;
  Index n_;
  Real epsilon_, delta_, target_distortion_;
  Real rate_row_, rate_col_;
  Index rows_, cols_, seed_block_, seed_bins_;
  bool col_floor_applied_ = false;
  bool emulation_certified_ = false;
};

// One realized code: the resolvability codebook plus the seed extractor.
struct WzCode {
  WzConfig config;
  Codebook codebook;          // words over W, rows x cols
  Channel x_given_w;
  Channel y_given_w;
  Extractor seed_extractor;   // over X blocks of length seed_block
};

WzCode wz_build(const WzConfig& cfg, RngStream& rng);

// Posterior over (row, col) pairs proportional to the word likelihood of x.
// A zero-likelihood x yields the uniform posterior with the flag set.
struct Posterior {
  Pmf pmf;  // over flat row*cols indices
  bool zero_likelihood = false;
};
Posterior likelihood_posterior(const Codebook& cb, const Channel& ch_x_given_w,
                               std::span<const int> x);

struct WzEncoding {
  Index row = 0;
  Index col = 0;
  Index seed = 0;
  bool zero_likelihood = false;
  // seeded-sampler audit for this source block
  Real sampler_distance = 0;
  Real sampler_bound = 0;
  Real sampler_head_dev = 0;
};

WzEncoding wz_encode(const WzCode& code, std::span<const int> x_extended);

struct WzDecoding {
  Index col = 0;
  std::vector<int> x_hat;
};

WzDecoding wz_decode(const WzCode& code, Index row, std::span<const int> y);

struct WzCodebookMetrics {
  Real uniformity_v = 0;        // exact V of the row index pmf vs uniform
  Real decode_err = 0;
  Real atypicality = 0;
  Real avg_distortion = 0;      // over the extended block, seed symbols at d_max
  Real distortion_first_n = 0;
  Real fallback_rate = 0;
  Index audit_violations = 0;    // seeded-sampler bound violations
  Real audit_max_slack = -2.0;   // max (distance - bound); negative when safe
  bool uniformity_exact = true;
};

struct WzMetrics {
  std::vector<WzCodebookMetrics> per_codebook;
  Real median_uniformity_v = 0;
  Real median_decode_err = 0;
  Real median_atypicality = 0;
  Real median_avg_distortion = 0;
  Real median_distortion_first_n = 0;
  bool emulation_certified = false;
};

WzMetrics wz_evaluate(const WzConfig& cfg, Index codebook_trials, Index source_trials,
                      std::uint64_t master_seed);

}  // namespace nusim
