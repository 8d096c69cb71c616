#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "nusim/alphabet.hpp"
#include "nusim/common.hpp"

namespace nusim {

using Vec = Eigen::ArrayXd;
using Mat = Eigen::MatrixXd;

// Probability mass function over a finite alphabet. Immutable after
// construction; constructors renormalize drift below kPmfTolerance and
// reject anything larger.
class Pmf {
 public:
  Pmf(Alphabet alphabet, Vec mass);

  const Alphabet& alphabet() const { return alphabet_; }
  const Vec& mass() const { return mass_; }
  Real operator()(Index i) const { return mass_(i); }
  Index size() const { return mass_.size(); }

  std::vector<Index> support() const;  // indices with mass > kSupportZero
  Real entropy_bits() const;
  Real max_mass() const { return mass_.maxCoeff(); }

  static Pmf uniform(Alphabet alphabet);
  static Pmf point_mass(Alphabet alphabet, Index at);

 private:
  Alphabet alphabet_;
  Vec mass_;
};

// Conditional kernel: one output pmf per input symbol.
class Channel {
 public:
  Channel(Alphabet input, Alphabet output, Mat rows);

  const Alphabet& input_alphabet() const { return input_; }
  const Alphabet& output_alphabet() const { return output_; }
  const Mat& rows() const { return rows_; }
  Real operator()(Index out, Index in) const { return rows_(in, out); }
  Pmf row(Index in) const { return Pmf(output_, rows_.row(in).array().transpose()); }

  static Channel identity(const Alphabet& alphabet);
  static Channel binary_symmetric(Real crossover);
  // Every input mapped deterministically through f (given as output index per input).
  static Channel deterministic(Alphabet input, Alphabet output, const std::vector<Index>& f);

 private:
  Alphabet input_;
  Alphabet output_;
  Mat rows_;  // input x output
};

// Joint pmf over two or three variables, stored as a flattened row-major
// tensor over the per-variable alphabets.
class JointPmf {
 public:
  JointPmf(std::vector<Alphabet> axes, Vec mass);

  Index num_vars() const { return Index(axes_.size()); }
  const Alphabet& axis(Index v) const { return axes_.at(std::size_t(v)); }
  Index dim(Index v) const { return axes_[std::size_t(v)].size(); }
  Index cells() const { return mass_.size(); }
  const Vec& mass() const { return mass_; }

  Real at(std::span<const Index> idx) const { return mass_(offset(idx)); }
  Real at2(Index i, Index j) const;
  Real at3(Index i, Index j, Index k) const;

  Pmf marginal(Index v) const;
  // Joint over (vars[0], vars[1], ...) in the given order, others summed out.
  JointPmf marginalize_to(std::span<const Index> vars) const;
  // Conditional kernel of `target` given `given` (other variables summed out).
  // Rows for zero-probability conditions are uniform.
  Channel conditional(Index target, Index given) const;
  // Pmf over the flattened product alphabet (row-major by variable order).
  Pmf flatten() const;

  static JointPmf from_marginal_and_channel(const Pmf& p, const Channel& ch);
  static JointPmf independent(const Pmf& a, const Pmf& b);

  Index offset(std::span<const Index> idx) const;

 private:
  std::vector<Alphabet> axes_;
  std::vector<Index> strides_;
  Vec mass_;
};

// Coupling of two pmfs over a common alphabet.
struct Coupling {
  Pmf left;
  Pmf right;
  JointPmf joint;  // axes (left, right)

  Real mismatch_probability() const;
};

// Subset entropies of a joint pmf, all in bits.
class InfoMeasures {
 public:
  explicit InfoMeasures(const JointPmf& joint);

  Index num_vars() const { return nvars_; }
  // Entropy of the subset encoded as a bitmask over variables.
  Real entropy_mask(unsigned mask) const { return h_.at(mask); }
  Real entropy(Index v) const { return entropy_mask(1u << v); }
  Real joint_entropy() const { return h_.back(); }
  Real conditional_entropy(Index v, Index given) const;
  Real mutual(Index a, Index b) const;
  Real mutual_given(Index a, Index b, Index c) const;  // I(a;b|c), three vars only

 private:
  Index nvars_;
  std::vector<Real> h_;  // indexed by subset bitmask; h_[0] = 0
};

// --- free operations -------------------------------------------------------

// i.i.d. n-fold product of p over the lexicographic tuple alphabet.
Pmf product_extend(const Pmf& p, Index n);

// L1 distance; ranges over [0,2].
Real variational_distance(const Pmf& p, const Pmf& q);

// KL divergence in bits; +infinity when supp(p) is not within supp(q).
Real kl_divergence_bits(const Pmf& p, const Pmf& q);

InfoMeasures info_measures(const JointPmf& joint);

// Attach the output of `ch` (applied to variable `attach_to`) as a new last
// variable of the joint.
JointPmf compose_and_marginalize(const JointPmf& joint, const Channel& ch, Index attach_to);

// Standard maximal coupling: diagonal mass min(p,q), off-diagonal from the
// normalized positive/negative parts. Mismatch probability is exactly
// variational_distance(p,q)/2.
Coupling maximal_coupling(const Pmf& p, const Pmf& q);

Real entropy_bits(std::span<const Real> mass);
Real binary_entropy_bits(Real p);

// Median of a sample (average of the middle pair for even sizes).
Real median(std::vector<Real> v);

}  // namespace nusim
