#pragma once

#include <functional>
#include <vector>

#include "nusim/slepian_wolf.hpp"

namespace nusim {

// A distributed lossy code over blocks of `block_len` source symbols:
// deterministic per-source encoders into finite message alphabets and a
// joint reconstruction from the message pair.
struct OuterCode {
  Index block_len = 1;
  Alphabet mx_alphabet;
  Alphabet my_alphabet;
  Alphabet xhat_alphabet;
  Alphabet yhat_alphabet;
  std::function<Index(std::span<const int>)> fx;
  std::function<Index(std::span<const int>)> fy;
  // messages -> reconstruction blocks (xhat ids, yhat ids), each block_len long
  std::function<void(Index, Index, std::vector<int>&, std::vector<int>&)> reconstruct;
  Mat dx;  // d(x, xhat)
  Mat dy;  // d(y, yhat)
  Real dx_max = 1.0;
  Real dy_max = 1.0;
};

// Exact joint pmf of the message pair under source^(x)block_len.
JointPmf outer_message_joint(const OuterCode& outer, const JointPmf& source);

// Per-letter quantizers: messages are the quantizer cells, reconstructions
// the given representatives (indices into the source alphabets).
OuterCode scalar_quantizer_outer(const JointPmf& source, std::vector<Index> cell_x,
                                 std::vector<Index> rep_x, std::vector<Index> cell_y,
                                 std::vector<Index> rep_y, Mat dx, Mat dy);

// Min-distortion encoder against a random reconstruction codebook drawn from
// the per-letter reconstruction marginal; ties break to the smaller index.
OuterCode random_codebook_outer(const JointPmf& source, Index block_len, Index words_x,
                                Index words_y, Mat dx, Mat dy, RngStream& rng);

// Identity messages (block = message); reconstruction returns the block.
OuterCode identity_outer(const JointPmf& source);

// Append a digest of the blockwise common-part labels to both messages so
// the padded message pair has a non-trivial common part. The digest is the
// label-sequence index reduced modulo `pad_alphabet`; rate increase is
// log2(pad_alphabet)/block_len bits per source symbol.
OuterCode pad_with_common(const OuterCode& outer, const CommonPart& cp, Index pad_alphabet);

struct DlcCode {
  OuterCode outer;
  JointPmf source;
  JointPmf message_joint;
  SwConfig inner;
  bool padded = false;
};

// Builds the message statistics and the inner configuration; pads the outer
// code first when its messages share no common part.
DlcCode dlc_concatenate(OuterCode outer, const JointPmf& source, Index inner_n,
                        Real inner_epsilon, Real inner_delta);

struct DlcCodebookMetrics {
  Real joint_uniformity_v = 0;
  bool uniformity_exact = true;
  Real avg_distortion_x = 0;
  Real avg_distortion_y = 0;
  Real baseline_distortion_x = 0;  // outer code alone on the same realizations
  Real baseline_distortion_y = 0;
  Real inner_block_err = 0;   // failed message blocks / total blocks
  Real overhead_fraction = 0; // seed-extension blocks / total blocks
  Real rate_x = 0;            // bits per source symbol, exact
  Real rate_y = 0;
  Index accounting_violations = 0;
  Real accounting_max_slack = -2.0;
};

struct DlcMetrics {
  std::vector<DlcCodebookMetrics> per_codebook;
  Real median_uniformity_v = 0;
  Real median_distortion_x = 0;
  Real median_distortion_y = 0;
};

DlcMetrics dlc_evaluate(const DlcCode& code, Index codebook_trials, Index super_trials,
                        std::uint64_t master_seed);

}  // namespace nusim
