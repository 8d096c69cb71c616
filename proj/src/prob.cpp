#include "nusim/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nusim {

namespace {

void check_mass_vector(const Vec& mass, const char* what) {
  if (mass.size() == 0) throw ConfigError(std::string(what) + ": empty mass vector");
  if ((mass < -kSupportZero).any()) {
    throw ConfigError(std::string(what) + ": negative probability");
  }
}

Vec normalized_or_throw(Vec mass, const char* what) {
  check_mass_vector(mass, what);
  const Real sum = mass.sum();
  if (std::abs(sum - 1.0) > kPmfTolerance) {
    throw ConfigError(std::string(what) + ": masses sum to " + std::to_string(sum));
  }
  mass = mass.max(0.0);
  return mass / mass.sum();
}

}  // namespace

Pmf::Pmf(Alphabet alphabet, Vec mass) : alphabet_(std::move(alphabet)), mass_(std::move(mass)) {
  if (mass_.size() != alphabet_.size()) throw ConfigError("pmf: mass/alphabet size mismatch");
  mass_ = normalized_or_throw(std::move(mass_), "pmf");
}

std::vector<Index> Pmf::support() const {
  std::vector<Index> out;
  for (Index i = 0; i < mass_.size(); ++i) {
    if (mass_(i) > kSupportZero) out.push_back(i);
  }
  return out;
}

Real Pmf::entropy_bits() const {
  return nusim::entropy_bits(std::span<const Real>(mass_.data(), std::size_t(mass_.size())));
}

Pmf Pmf::uniform(Alphabet alphabet) {
  const Index n = alphabet.size();
  return Pmf(std::move(alphabet), Vec::Constant(n, 1.0 / Real(n)));
}

Pmf Pmf::point_mass(Alphabet alphabet, Index at) {
  Vec mass = Vec::Zero(alphabet.size());
  mass(at) = 1.0;
  return Pmf(std::move(alphabet), std::move(mass));
}

Channel::Channel(Alphabet input, Alphabet output, Mat rows)
    : input_(std::move(input)), output_(std::move(output)), rows_(std::move(rows)) {
  if (rows_.rows() != input_.size() || rows_.cols() != output_.size()) {
    throw ConfigError("channel: row matrix shape mismatch");
  }
  for (Index i = 0; i < rows_.rows(); ++i) {
    Vec row = rows_.row(i).array().transpose();
    rows_.row(i) = normalized_or_throw(std::move(row), "channel row").transpose().matrix();
  }
}

Channel Channel::identity(const Alphabet& alphabet) {
  return Channel(alphabet, alphabet, Mat::Identity(alphabet.size(), alphabet.size()));
}

Channel Channel::binary_symmetric(Real crossover) {
  Mat rows(2, 2);
  rows << 1.0 - crossover, crossover, crossover, 1.0 - crossover;
  return Channel(Alphabet::binary(), Alphabet::binary(), rows);
}

Channel Channel::deterministic(Alphabet input, Alphabet output, const std::vector<Index>& f) {
  if (Index(f.size()) != input.size()) throw ConfigError("deterministic channel: map size");
  Mat rows = Mat::Zero(input.size(), output.size());
  for (Index i = 0; i < input.size(); ++i) rows(i, f[std::size_t(i)]) = 1.0;
  return Channel(std::move(input), std::move(output), std::move(rows));
}

JointPmf::JointPmf(std::vector<Alphabet> axes, Vec mass)
    : axes_(std::move(axes)), mass_(std::move(mass)) {
  if (axes_.size() < 2 || axes_.size() > 3) throw ConfigError("joint pmf: 2 or 3 variables");
  Index cells = 1;
  for (const auto& a : axes_) {
    if (cells > kMaxExactCells / a.size()) throw BudgetError("joint pmf exceeds exact budget");
    cells *= a.size();
  }
  if (mass_.size() != cells) throw ConfigError("joint pmf: mass size mismatch");
  mass_ = normalized_or_throw(std::move(mass_), "joint pmf");
  strides_.assign(axes_.size(), 1);
  for (Index v = Index(axes_.size()) - 2; v >= 0; --v) {
    strides_[std::size_t(v)] = strides_[std::size_t(v) + 1] * axes_[std::size_t(v) + 1].size();
  }
}

Index JointPmf::offset(std::span<const Index> idx) const {
  Index off = 0;
  for (std::size_t v = 0; v < axes_.size(); ++v) off += idx[v] * strides_[v];
  return off;
}

Real JointPmf::at2(Index i, Index j) const {
  const Index idx[] = {i, j};
  return at(idx);
}

Real JointPmf::at3(Index i, Index j, Index k) const {
  const Index idx[] = {i, j, k};
  return at(idx);
}

Pmf JointPmf::marginal(Index v) const {
  Vec out = Vec::Zero(dim(v));
  std::vector<Index> idx(std::size_t(num_vars()), 0);
  for (Index cell = 0; cell < mass_.size(); ++cell) {
    Index rem = cell;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
      idx[k] = rem / strides_[k];
      rem %= strides_[k];
    }
    out(idx[std::size_t(v)]) += mass_(cell);
  }
  return Pmf(axes_[std::size_t(v)], std::move(out));
}

JointPmf JointPmf::marginalize_to(std::span<const Index> vars) const {
  std::vector<Alphabet> axes;
  for (Index v : vars) axes.push_back(axis(v));
  Index cells = 1;
  for (const auto& a : axes) cells *= a.size();
  Vec out = Vec::Zero(cells);
  std::vector<Index> idx(std::size_t(num_vars()), 0);
  for (Index cell = 0; cell < mass_.size(); ++cell) {
    Index rem = cell;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
      idx[k] = rem / strides_[k];
      rem %= strides_[k];
    }
    Index off = 0;
    for (Index v : vars) off = off * axes_[std::size_t(v)].size() + idx[std::size_t(v)];
    out(off) += mass_(cell);
  }
  return JointPmf(std::move(axes), std::move(out));
}

Channel JointPmf::conditional(Index target, Index given) const {
  const Index pair_vars[] = {given, target};
  JointPmf pair = marginalize_to(pair_vars);
  Mat rows(pair.dim(0), pair.dim(1));
  for (Index g = 0; g < pair.dim(0); ++g) {
    Real total = 0;
    for (Index t = 0; t < pair.dim(1); ++t) total += pair.at2(g, t);
    for (Index t = 0; t < pair.dim(1); ++t) {
      rows(g, t) = total > kSupportZero ? pair.at2(g, t) / total : 1.0 / Real(pair.dim(1));
    }
  }
  return Channel(axis(given), axis(target), std::move(rows));
}

Pmf JointPmf::flatten() const {
  Alphabet flat = num_vars() == 2
                      ? Alphabet::product(axes_[0], axes_[1])
                      : Alphabet::product(Alphabet::product(axes_[0], axes_[1]), axes_[2]);
  return Pmf(std::move(flat), mass_);
}

JointPmf JointPmf::from_marginal_and_channel(const Pmf& p, const Channel& ch) {
  if (p.alphabet() != ch.input_alphabet()) {
    throw ConfigError("joint: marginal/channel alphabet mismatch");
  }
  const Index nx = p.size();
  const Index ny = ch.output_alphabet().size();
  Vec mass(nx * ny);
  for (Index x = 0; x < nx; ++x) {
    for (Index y = 0; y < ny; ++y) mass(x * ny + y) = p(x) * ch(y, x);
  }
  return JointPmf({p.alphabet(), ch.output_alphabet()}, std::move(mass));
}

JointPmf JointPmf::independent(const Pmf& a, const Pmf& b) {
  Vec mass(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < b.size(); ++j) mass(i * b.size() + j) = a(i) * b(j);
  }
  return JointPmf({a.alphabet(), b.alphabet()}, std::move(mass));
}

Real Coupling::mismatch_probability() const {
  Real diag = 0;
  for (Index i = 0; i < left.size(); ++i) diag += joint.at2(i, i);
  return 1.0 - diag;
}

InfoMeasures::InfoMeasures(const JointPmf& joint) : nvars_(joint.num_vars()) {
  const unsigned full = (1u << nvars_) - 1u;
  h_.assign(full + 1, 0.0);
  std::vector<Index> strides(std::size_t(nvars_), 1);
  for (Index v = nvars_ - 2; v >= 0; --v) {
    strides[std::size_t(v)] = strides[std::size_t(v) + 1] * joint.dim(v + 1);
  }
  for (unsigned mask = 1; mask <= full; ++mask) {
    Index cells = 1;
    for (Index v = 0; v < nvars_; ++v) {
      if (mask & (1u << v)) cells *= joint.dim(v);
    }
    Vec marg = Vec::Zero(cells);
    std::vector<Index> idx(std::size_t(nvars_), 0);
    const Vec& m = joint.mass();
    for (Index cell = 0; cell < m.size(); ++cell) {
      Index rem = cell;
      Index off = 0;
      for (Index v = 0; v < nvars_; ++v) {
        idx[std::size_t(v)] = rem / strides[std::size_t(v)];
        rem %= strides[std::size_t(v)];
      }
      for (Index v = 0; v < nvars_; ++v) {
        if (mask & (1u << v)) off = off * joint.dim(v) + idx[std::size_t(v)];
      }
      marg(off) += m(cell);
    }
    h_[mask] = nusim::entropy_bits(std::span<const Real>(marg.data(), std::size_t(marg.size())));
  }
}

Real InfoMeasures::conditional_entropy(Index v, Index given) const {
  return entropy_mask((1u << v) | (1u << given)) - entropy_mask(1u << given);
}

Real InfoMeasures::mutual(Index a, Index b) const {
  return entropy_mask(1u << a) + entropy_mask(1u << b) - entropy_mask((1u << a) | (1u << b));
}

Real InfoMeasures::mutual_given(Index a, Index b, Index c) const {
  const unsigned ac = (1u << a) | (1u << c);
  const unsigned bc = (1u << b) | (1u << c);
  const unsigned abc = ac | (1u << b);
  return entropy_mask(ac) + entropy_mask(bc) - entropy_mask(abc) - entropy_mask(1u << c);
}

Pmf product_extend(const Pmf& p, Index n) {
  const Index base = p.size();
  const Index total = checked_power(base, n);
  Alphabet tuples = Alphabet::power(p.alphabet(), n);
  Vec mass(total);
  std::vector<int> digits(std::size_t(n), 0);
  for (Index idx = 0; idx < total; ++idx) {
    Real m = 1.0;
    for (Index pos = 0; pos < n; ++pos) m *= p(digits[std::size_t(pos)]);
    mass(idx) = m;
    for (Index pos = n - 1; pos >= 0; --pos) {
      if (++digits[std::size_t(pos)] < base) break;
      digits[std::size_t(pos)] = 0;
    }
  }
  return Pmf(std::move(tuples), std::move(mass));
}

Real variational_distance(const Pmf& p, const Pmf& q) {
  if (p.alphabet() != q.alphabet()) throw ConfigError("variational distance: alphabet mismatch");
  return (p.mass() - q.mass()).abs().sum();
}

Real kl_divergence_bits(const Pmf& p, const Pmf& q) {
  if (p.alphabet() != q.alphabet()) throw ConfigError("kl divergence: alphabet mismatch");
  Real sum = 0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) <= kSupportZero) continue;
    if (q(i) <= kSupportZero) return std::numeric_limits<Real>::infinity();
    sum += p(i) * std::log2(p(i) / q(i));
  }
  return std::max(sum, 0.0);
}

InfoMeasures info_measures(const JointPmf& joint) { return InfoMeasures(joint); }

JointPmf compose_and_marginalize(const JointPmf& joint, const Channel& ch, Index attach_to) {
  if (joint.axis(attach_to) != ch.input_alphabet()) {
    throw ConfigError("compose: channel input does not match the attached variable");
  }
  if (joint.num_vars() != 2) {
    // only the 2 -> 3 variable case is needed by the constructions
    throw ConfigError("compose: joint must have two variables");
  }
  const Index nz = ch.output_alphabet().size();
  Vec mass(joint.cells() * nz);
  for (Index i = 0; i < joint.dim(0); ++i) {
    for (Index j = 0; j < joint.dim(1); ++j) {
      const Index in = attach_to == 0 ? i : j;
      for (Index z = 0; z < nz; ++z) {
        mass((i * joint.dim(1) + j) * nz + z) = joint.at2(i, j) * ch(z, in);
      }
    }
  }
  return JointPmf({joint.axis(0), joint.axis(1), ch.output_alphabet()}, std::move(mass));
}

Coupling maximal_coupling(const Pmf& p, const Pmf& q) {
  if (p.alphabet() != q.alphabet()) throw ConfigError("maximal coupling: alphabet mismatch");
  const Index n = p.size();
  Vec pos = (p.mass() - q.mass()).max(0.0);
  Vec neg = (q.mass() - p.mass()).max(0.0);
  const Real slack = pos.sum();
  Mat joint = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) joint(i, i) = std::min(p(i), q(i));
  if (slack > kSupportZero) {
    for (Index i = 0; i < n; ++i) {
      if (pos(i) <= 0) continue;
      for (Index j = 0; j < n; ++j) {
        if (neg(j) <= 0) continue;
        joint(i, j) += pos(i) * neg(j) / slack;
      }
    }
  }
  Vec flat(n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) flat(i * n + j) = joint(i, j);
  }
  return Coupling{p, q, JointPmf({p.alphabet(), q.alphabet()}, std::move(flat))};
}

Real entropy_bits(std::span<const Real> mass) {
  Real h = 0;
  for (Real m : mass) {
    if (m > kSupportZero) h -= m * std::log2(m);
  }
  return h;
}

Real binary_entropy_bits(Real p) {
  const Real mass[] = {p, 1.0 - p};
  return entropy_bits(mass);
}

Real median(std::vector<Real> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace nusim
