#include "nusim/bounds.hpp"

#include <cmath>

namespace nusim {

BoundValues eval_bounds(const BoundInputs& b) {
  BoundValues out;
  const Real n = Real(b.n);

  // log2(1 + 2^{n (I(X;Y|U) - R' + 2 delta log2|Y|)})
  //   + 2 |X||Y||U| e^{-n delta^2 mu} log2(1 + mu^{-n})
  const Real exponent = n * (b.i_xy_given_u - b.rate_col + 2 * b.delta * std::log2(Real(b.size_y)));
  const Real tail = b.mu > 0 ? 2.0 * Real(b.size_x * b.size_y * b.size_u) *
                                   std::exp(-n * b.delta * b.delta * b.mu) *
                                   std::log2(1.0 + std::pow(b.mu, -n))
                             : 0.0;
  out.superposition_kl_bound = std::log2(1.0 + std::exp2(exponent)) + tail;

  // 2^{1 + n (R - I(A;B) + 2 delta log2(|A||B|))}; the exponent uses the
  // + sign in front of the typicality term, which is the direction the
  // counting argument supports; the tighter - variant is not provable and
  // is not used
  const Real m = Real(b.size_x * b.size_y);
  out.list_size_bound = std::exp2(1.0 + n * (b.rate_flat - b.i_ab + 2 * b.delta * std::log2(m)));
  out.list_bound_note = "list bound exponent uses +2*delta*log2(|A||B|)";

  out.sampler_bound = b.head_epsilon + Real(b.head_size) / Real(b.seed_count);
  out.coupling_mismatch_bound = b.coupling_v / 2.0;
  return out;
}

}  // namespace nusim
