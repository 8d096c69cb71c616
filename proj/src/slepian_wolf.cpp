#include "nusim/slepian_wolf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "nusim/typicality.hpp"

namespace nusim {

namespace {

constexpr Index kExactSupportBudget = Index(1) << 16;  // support^m sequences
constexpr Index kExactFactorBudget = Index(1) << 14;   // per-variable sequences

std::vector<int> labels_of(std::span<const int> symbols, const std::vector<Index>& label_map) {
  std::vector<int> out(symbols.size());
  for (std::size_t t = 0; t < symbols.size(); ++t) {
    const Index lbl = label_map.at(std::size_t(symbols[t]));
    if (lbl < 0) throw ConfigError("sw: symbol outside the source support");
    out[t] = int(lbl);
  }
  return out;
}

bool word_equals(std::span<const Symbol> word, std::span<const int> seq) {
  for (std::size_t t = 0; t < seq.size(); ++t) {
    if (Index(word[t]) != Index(seq[t])) return false;
  }
  return true;
}

}  // namespace

JointPmf lift_with_common_part(const JointPmf& source, const CommonPart& cp) {
  const Index nu = cp.u_alphabet.size();
  const Index nx = source.dim(0);
  const Index ny = source.dim(1);
  Vec mass = Vec::Zero(nu * nx * ny);
  for (Index x = 0; x < nx; ++x) {
    const Index u = cp.label_of_x(x);
    if (u < 0) continue;
    for (Index y = 0; y < ny; ++y) {
      const Real v = source.at2(x, y);
      if (v > 0) mass((u * nx + x) * ny + y) = v;
    }
  }
  return JointPmf({cp.u_alphabet, source.axis(0), source.axis(1)}, std::move(mass));
}

SwConfig::SwConfig(JointPmf source, Index n, Real epsilon, Real delta)
    : source_(std::move(source)), cp_(common_part(source_)),
      joint_uxy_(lift_with_common_part(source_, cp_)), n_(n), epsilon_(epsilon), delta_(delta) {
  if (!is_nontrivial(cp_)) {
    throw ConfigError("sw: the construction requires a non-trivial common part");
  }
  const Real hu = cp_.u_pmf.entropy_bits();
  if (!(epsilon_ > 0) || !(epsilon_ < hu)) {
    throw ConfigError("sw: epsilon must lie in (0, H of the common part)");
  }
  const InfoMeasures im = info_measures(joint_uxy_);
  rate_u_ = hu + epsilon_ / 2;
  rate_x_ = im.conditional_entropy(1, 2) + epsilon_ / 2;
  rate_x_col_ = im.mutual_given(1, 2, 0) + epsilon_ / 2;
  rate_y_ = im.conditional_entropy(2, 0) + epsilon_ / 2;
  if (rate_x_col_ >= im.mutual(1, 2)) {
    throw ConfigError("sw: the column rate must stay below I(X;Y)");
  }
  num_u_ = RateConfig::size_for(n_, rate_u_);
  x_rows_ = RateConfig::size_for(n_, rate_x_);
  x_cols_ = RateConfig::size_for(n_, rate_x_col_);
  if (x_cols_ < 2) {
    x_cols_ = 2;  // keep the typicality search non-degenerate; recorded
    col_floor_applied_ = true;
  }
  y_rows_ = RateConfig::size_for(n_, rate_y_);
  seg_ = Index(std::ceil(3 * epsilon_ * Real(n_) / hu - 1e-9));
  seed_bins_ = RateConfig::size_for(n_, 2 * epsilon_);
}

SwCode sw_build(const SwConfig& cfg, RngStream& rng) {
  SuperCodebook scb = gen_superposition(cfg.joint_uxy(), cfg.num_u(), cfg.x_rows(), cfg.x_cols(),
                                        cfg.y_rows(), cfg.n(), rng);
  Extractor u_seed = extract_intrinsic(cfg.common().u_pmf, cfg.seed_segment(), cfg.seed_bins());
  Extractor x_seed =
      extract_intrinsic(cfg.source().marginal(0), cfg.seed_segment(), cfg.seed_bins());
  Extractor y_seed =
      extract_intrinsic(cfg.source().marginal(1), cfg.seed_segment(), cfg.seed_bins());
  return SwCode{cfg,          std::move(scb),    std::move(u_seed),
                std::move(x_seed), std::move(y_seed), cfg.source().flatten()};
}

Index match_table_sample(std::span<const Index> matches, Index ell, Index seed) {
  const Index m = Index(matches.size());
  if (m == 0) throw Error("match table: no matches");
  // the i-th match (1-based) owns seeds [floor((i-1) ell / m), floor(i ell / m))
  Index i = ((seed + 1) * m + ell - 1) / ell;
  i = std::clamp<Index>(i, 1, m);
  return matches[std::size_t(i - 1)];
}

Real match_table_distance(Index match_count, Index ell) {
  Real total = 0;
  for (Index i = 1; i <= match_count; ++i) {
    const Index n_i = i * ell / match_count - (i - 1) * ell / match_count;
    total += std::abs(1.0 / Real(match_count) - Real(n_i) / Real(ell));
  }
  return total;
}

Real match_table_head_deviation(Index match_count, Index ell) {
  Real worst = 0;
  for (Index i = 1; i <= match_count; ++i) {
    const Index n_i = i * ell / match_count - (i - 1) * ell / match_count;
    worst = std::max(worst, std::abs(1.0 / Real(match_count) - Real(n_i) / Real(ell)));
  }
  return worst;
}

namespace {

std::vector<Index> matching_clouds(const SwCode& code, std::span<const int> u_seq) {
  std::vector<Index> out;
  for (Index i = 0; i < code.scb.num_u(); ++i) {
    if (word_equals(code.scb.u_word(i), u_seq)) out.push_back(i);
  }
  return out;
}

std::vector<Index> matching_x_words(const SwCode& code, Index i, std::span<const int> x) {
  std::vector<Index> out;
  const Index cols = code.scb.x_cols();
  for (Index j = 0; j < code.scb.x_rows(); ++j) {
    for (Index k = 0; k < cols; ++k) {
      if (word_equals(code.scb.x_word(i, j, k), x)) out.push_back(j * cols + k);
    }
  }
  return out;
}

std::vector<Index> matching_y_words(const SwCode& code, Index i, std::span<const int> y) {
  std::vector<Index> out;
  for (Index l = 0; l < code.scb.y_rows(); ++l) {
    if (word_equals(code.scb.y_word(i, l), y)) out.push_back(l);
  }
  return out;
}

}  // namespace

SwEncodingX sw_encode_x(const SwCode& code, std::span<const int> x_extended) {
  const SwConfig& cfg = code.config;
  if (Index(x_extended.size()) != cfg.extended_len()) {
    throw ConfigError("sw encode: extended block length mismatch");
  }
  const Index n = cfg.n();
  const Index seg = cfg.seed_segment();
  const Index ell = cfg.seed_bins();
  SwEncodingX enc;

  const auto u_seq = labels_of(x_extended.first(std::size_t(n)), cfg.common().u_of_x);
  const auto u_seed_seq =
      labels_of(x_extended.subspan(std::size_t(n), std::size_t(seg)), cfg.common().u_of_x);
  const Index s_u = code.u_seed.map(u_seed_seq);

  const auto mu = matching_clouds(code, u_seq);
  if (mu.empty()) {
    enc.fallback_u = true;
    enc.i = 0;
  } else {
    enc.i = match_table_sample(mu, ell, s_u);
    enc.audit_slack_u =
        match_table_distance(Index(mu.size()), ell) - Real(mu.size()) / Real(ell);
  }

  const auto x_seed_seq = x_extended.subspan(std::size_t(n + seg), std::size_t(seg));
  const Index s_x = code.x_seed.map(x_seed_seq);
  const auto mx = matching_x_words(code, enc.i, x_extended.first(std::size_t(n)));
  if (mx.empty()) {
    enc.fallback_x = true;
    enc.j = 0;
    enc.k = 0;
  } else {
    const Index flat = match_table_sample(mx, ell, s_x);
    enc.j = flat / code.scb.x_cols();
    enc.k = flat % code.scb.x_cols();
    enc.audit_slack_x =
        match_table_distance(Index(mx.size()), ell) - Real(mx.size()) / Real(ell);
  }
  return enc;
}

SwEncodingY sw_encode_y(const SwCode& code, std::span<const int> y_extended) {
  const SwConfig& cfg = code.config;
  if (Index(y_extended.size()) != cfg.extended_len()) {
    throw ConfigError("sw encode: extended block length mismatch");
  }
  const Index n = cfg.n();
  const Index seg = cfg.seed_segment();
  const Index ell = cfg.seed_bins();
  SwEncodingY enc;

  const auto u_seq = labels_of(y_extended.first(std::size_t(n)), cfg.common().u_of_y);
  const auto u_seed_seq =
      labels_of(y_extended.subspan(std::size_t(n), std::size_t(seg)), cfg.common().u_of_y);
  const Index s_u = code.u_seed.map(u_seed_seq);

  const auto mu = matching_clouds(code, u_seq);
  if (mu.empty()) {
    enc.fallback_u = true;
    enc.i = 0;
  } else {
    enc.i = match_table_sample(mu, ell, s_u);
    enc.audit_slack_u =
        match_table_distance(Index(mu.size()), ell) - Real(mu.size()) / Real(ell);
  }

  const auto y_seed_seq = y_extended.subspan(std::size_t(n + 2 * seg), std::size_t(seg));
  const Index s_y = code.y_seed.map(y_seed_seq);
  const auto ml = matching_y_words(code, enc.i, y_extended.first(std::size_t(n)));
  if (ml.empty()) {
    enc.fallback_y = true;
    enc.l = 0;
  } else {
    enc.l = match_table_sample(ml, ell, s_y);
    enc.audit_slack_y =
        match_table_distance(Index(ml.size()), ell) - Real(ml.size()) / Real(ell);
  }
  return enc;
}

SwDecoding sw_decode(const SwCode& code, Index j, Index i, Index l) {
  const SwConfig& cfg = code.config;
  SwDecoding dec;
  const auto yw = code.scb.y_word(i, l);
  dec.y_hat.assign(yw.begin(), yw.end());

  const Pmf& flat_source = code.source_flat;
  const TypicalityParams typ(cfg.delta());
  std::vector<Index> hits;
  std::vector<int> xw_int(std::size_t(cfg.n()), 0);
  for (Index k = 0; k < code.scb.x_cols(); ++k) {
    const auto xw = code.scb.x_word(i, j, k);
    for (Index t = 0; t < cfg.n(); ++t) xw_int[std::size_t(t)] = int(xw[std::size_t(t)]);
    const auto zipped = zip_pair(xw_int, dec.y_hat, cfg.source().dim(1));
    if (is_letter_typical(zipped, flat_source, typ)) hits.push_back(k);
  }
  const Index k_pick = hits.size() == 1 ? hits.front() : 0;
  dec.ambiguous = hits.size() != 1;
  const auto xw = code.scb.x_word(i, j, k_pick);
  dec.x_hat.assign(xw.begin(), xw.end());
  return dec;
}

namespace {

struct GroupEntry {
  Real weight = 0;  // p(u block) * P(cloud index | u block)
  Vec a;            // row-index distribution of the X encoder
  Vec b;            // row-index distribution of the Y encoder
};

struct AuditTally {
  Index violations = 0;
  Real max_slack = -2.0;

  void add(Real slack) {
    max_slack = std::max(max_slack, slack);
    if (slack > 1e-12) ++violations;
  }
};

// Sum over l of |t * b(l) - c| given b's nonzero values sorted ascending with
// a suffix-sum table; zeros contribute c each.
struct SortedVec {
  std::vector<Real> vals;  // ascending, nonzero entries only
  std::vector<Real> suffix;  // suffix[i] = sum of vals[i..]
  Index zeros = 0;

  explicit SortedVec(const Vec& v) {
    for (Index i = 0; i < v.size(); ++i) {
      if (v(i) > 0) {
        vals.push_back(v(i));
      } else {
        ++zeros;
      }
    }
    std::sort(vals.begin(), vals.end());
    suffix.assign(vals.size() + 1, 0.0);
    for (Index i = Index(vals.size()) - 1; i >= 0; --i) {
      suffix[std::size_t(i)] = suffix[std::size_t(i) + 1] + vals[std::size_t(i)];
    }
  }

  Real abs_sum_against(Real t, Real c) const {
    if (t <= 0) return c * Real(vals.size() + zeros);
    // elements above c/t contribute t*v - c, others c - t*v
    const Real thr = c / t;
    const auto it = std::upper_bound(vals.begin(), vals.end(), thr);
    const Index below = Index(it - vals.begin());
    const Real sum_below = suffix[0] - suffix[std::size_t(below)];
    const Real sum_above = suffix[std::size_t(below)];
    const Index above = Index(vals.size()) - below;
    return (t * sum_above - c * Real(above)) + (c * Real(below) - t * sum_below) +
           c * Real(zeros);
  }
};

// Exact joint index distribution via conditional independence given the
// cloud sequence; valid when I(X;Y|U) vanishes.
bool exact_uniformity_factorized(const SwCode& code, SwCodebookMetrics& m, AuditTally& audit) {
  const SwConfig& cfg = code.config;
  const JointPmf& juxy = cfg.joint_uxy();
  const InfoMeasures im = info_measures(juxy);
  if (im.mutual_given(1, 2, 0) > 1e-9) return false;
  const Index nu_sym = juxy.dim(0);
  const Index n = cfg.n();
  Real u_space = 1;
  for (Index t = 0; t < n; ++t) {
    u_space *= Real(nu_sym);
    if (u_space > Real(kExactFactorBudget)) return false;
  }
  // per-letter symbol lists and conditionals
  std::vector<std::vector<int>> x_of_u(static_cast<std::size_t>(nu_sym));
  std::vector<std::vector<int>> y_of_u(static_cast<std::size_t>(nu_sym));
  for (Index x = 0; x < juxy.dim(1); ++x) {
    const Index u = cfg.common().label_of_x(x);
    if (u >= 0) x_of_u[std::size_t(u)].push_back(int(x));
  }
  for (Index y = 0; y < juxy.dim(2); ++y) {
    const Index u = cfg.common().label_of_y(y);
    if (u >= 0) y_of_u[std::size_t(u)].push_back(int(y));
  }
  Real max_branch_x = 1, max_branch_y = 1;
  for (Index t = 0; t < n; ++t) {
    Real bx = 0, by = 0;
    for (Index u = 0; u < nu_sym; ++u) {
      bx = std::max(bx, Real(x_of_u[std::size_t(u)].size()));
      by = std::max(by, Real(y_of_u[std::size_t(u)].size()));
    }
    max_branch_x *= bx;
    max_branch_y *= by;
    if (max_branch_x > Real(kExactFactorBudget) || max_branch_y > Real(kExactFactorBudget)) {
      return false;
    }
  }

  const Channel x_given_u = juxy.conditional(1, 0);
  const Channel y_given_u = juxy.conditional(2, 0);
  const Pmf& u_pmf = cfg.common().u_pmf;
  const Pmf q_su = code.u_seed.bin_pmf();
  const Pmf q_sx = code.x_seed.bin_pmf();
  const Pmf q_sy = code.y_seed.bin_pmf();
  const Index ell = cfg.seed_bins();
  const Index x_cols = code.scb.x_cols();

  std::map<Index, std::vector<GroupEntry>> groups;

  const Index total_u = checked_power(nu_sym, n, kExactFactorBudget);
  std::vector<int> u_seq(std::size_t(n), 0);
  for (Index uidx = 0; uidx < total_u; ++uidx) {
    Index rem = uidx;
    for (Index t = n - 1; t >= 0; --t) {
      u_seq[std::size_t(t)] = int(rem % nu_sym);
      rem /= nu_sym;
    }
    Real p_u = 1;
    for (int u : u_seq) p_u *= u_pmf(u);
    if (p_u <= 0) continue;

    // cloud index distribution for this u block
    const auto mu = matching_clouds(code, u_seq);
    std::map<Index, Real> p_i;
    if (mu.empty()) {
      p_i[0] = 1.0;
    } else {
      audit.add(match_table_distance(Index(mu.size()), ell) - Real(mu.size()) / Real(ell));
      for (Index s = 0; s < ell; ++s) {
        p_i[match_table_sample(mu, ell, s)] += q_su(s);
      }
    }

    for (const auto& [i, pi] : p_i) {
      // word -> flat (j,k) list for this cloud
      std::unordered_map<std::string, std::vector<Index>> x_lookup;
      for (Index j = 0; j < code.scb.x_rows(); ++j) {
        for (Index k = 0; k < x_cols; ++k) {
          const auto w = code.scb.x_word(i, j, k);
          x_lookup[std::string(reinterpret_cast<const char*>(w.data()), w.size())].push_back(
              j * x_cols + k);
        }
      }
      std::unordered_map<std::string, std::vector<Index>> y_lookup;
      for (Index l = 0; l < code.scb.y_rows(); ++l) {
        const auto w = code.scb.y_word(i, l);
        y_lookup[std::string(reinterpret_cast<const char*>(w.data()), w.size())].push_back(l);
      }

      GroupEntry entry;
      entry.weight = p_u * pi;
      entry.a = Vec::Zero(code.scb.x_rows());
      entry.b = Vec::Zero(code.scb.y_rows());

      // X side: enumerate x blocks consistent with the u block
      std::string key(std::size_t(n), '\0');
      std::vector<Index> pos(std::size_t(n), 0);
      while (true) {
        Real p_x = 1;
        for (Index t = 0; t < n; ++t) {
          const int x = x_of_u[std::size_t(u_seq[std::size_t(t)])][std::size_t(pos[std::size_t(t)])];
          key[std::size_t(t)] = char(Symbol(x));
          p_x *= x_given_u(x, u_seq[std::size_t(t)]);
        }
        if (p_x > 0) {
          const auto it = x_lookup.find(key);
          if (it == x_lookup.end()) {
            entry.a(0) += p_x;
          } else {
            audit.add(match_table_distance(Index(it->second.size()), ell) -
                      Real(it->second.size()) / Real(ell));
            for (Index s = 0; s < ell; ++s) {
              entry.a(match_table_sample(it->second, ell, s) / x_cols) += p_x * q_sx(s);
            }
          }
        }
        Index t = n - 1;
        for (; t >= 0; --t) {
          if (Index(++pos[std::size_t(t)]) <
              Index(x_of_u[std::size_t(u_seq[std::size_t(t)])].size())) {
            break;
          }
          pos[std::size_t(t)] = 0;
        }
        if (t < 0) break;
      }

      // Y side
      std::fill(pos.begin(), pos.end(), 0);
      while (true) {
        Real p_y = 1;
        for (Index t = 0; t < n; ++t) {
          const int y = y_of_u[std::size_t(u_seq[std::size_t(t)])][std::size_t(pos[std::size_t(t)])];
          key[std::size_t(t)] = char(Symbol(y));
          p_y *= y_given_u(y, u_seq[std::size_t(t)]);
        }
        if (p_y > 0) {
          const auto it = y_lookup.find(key);
          if (it == y_lookup.end()) {
            entry.b(0) += p_y;
          } else {
            audit.add(match_table_distance(Index(it->second.size()), ell) -
                      Real(it->second.size()) / Real(ell));
            for (Index s = 0; s < ell; ++s) {
              entry.b(match_table_sample(it->second, ell, s)) += p_y * q_sy(s);
            }
          }
        }
        Index t = n - 1;
        for (; t >= 0; --t) {
          if (Index(++pos[std::size_t(t)]) <
              Index(y_of_u[std::size_t(u_seq[std::size_t(t)])].size())) {
            break;
          }
          pos[std::size_t(t)] = 0;
        }
        if (t < 0) break;
      }

      groups[i].push_back(std::move(entry));
    }
  }

  const Real c = 1.0 / (Real(code.scb.num_u()) * Real(code.scb.x_rows()) *
                        Real(code.scb.y_rows()));
  Real v = 0;
  for (const auto& [i, entries] : groups) {
    if (entries.size() == 1) {
      const GroupEntry& e = entries.front();
      const SortedVec sb(e.b);
      for (Index j = 0; j < e.a.size(); ++j) {
        v += sb.abs_sum_against(e.weight * e.a(j), c);
      }
    } else {
      Vec row(code.scb.y_rows());
      for (Index j = 0; j < code.scb.x_rows(); ++j) {
        row.setZero();
        for (const auto& e : entries) row += e.weight * e.a(j) * e.b;
        v += (row - c).abs().sum();
      }
    }
  }
  v += c * Real(code.scb.x_rows()) * Real(code.scb.y_rows()) *
       Real(code.scb.num_u() - Index(groups.size()));
  m.joint_uniformity_v = v;
  m.uniformity_exact = true;
  return true;
}

}  // namespace

SwUniformityResult sw_exact_uniformity(const SwCode& code) {
  SwCodebookMetrics m;
  AuditTally audit;
  SwUniformityResult r;
  r.ok = exact_uniformity_factorized(code, m, audit);
  r.v = m.joint_uniformity_v;
  return r;
}

SwCodebookMetrics sw_evaluate_code(const SwCode& code, Index source_trials,
                                   std::uint64_t master_seed, std::uint64_t trial_salt) {
  const SwConfig& cfg = code.config;
  SwCodebookMetrics m;
  AuditTally audit;

  const Pmf& flat_source = code.source_flat;
  const auto support = flat_source.support();
  const Index ny = cfg.source().dim(1);
  const Index mlen = cfg.extended_len();

  // exact path: enumerate support sequences when the budget allows
  Real seq_count = 1;
  bool exact_feasible = true;
  for (Index t = 0; t < mlen && exact_feasible; ++t) {
    seq_count *= Real(support.size());
    exact_feasible = seq_count <= Real(kExactSupportBudget);
  }

  if (exact_feasible) {
    std::unordered_map<Index, Real> joint_mass;
    Real err_mass = 0, fallback_x_mass = 0, fallback_y_mass = 0, amb_mass = 0;
    std::vector<Index> pos(std::size_t(mlen), 0);
    std::vector<int> xs(std::size_t(mlen), 0), ys(std::size_t(mlen), 0);
    while (true) {
      Real mass = 1;
      for (Index t = 0; t < mlen; ++t) {
        const Index cell = support[std::size_t(pos[std::size_t(t)])];
        xs[std::size_t(t)] = int(cell / ny);
        ys[std::size_t(t)] = int(cell % ny);
        mass *= flat_source(cell);
      }
      const SwEncodingX ex = sw_encode_x(code, xs);
      const SwEncodingY ey = sw_encode_y(code, ys);
      if (ex.i != ey.i) ++m.symmetry_violations;
      audit.add(ex.audit_slack_u);
      audit.add(ex.audit_slack_x);
      audit.add(ey.audit_slack_y);
      if (ex.fallback_x) fallback_x_mass += mass;
      if (ey.fallback_y) fallback_y_mass += mass;
      const SwDecoding dec = sw_decode(code, ex.j, ey.i, ey.l);
      if (dec.ambiguous) amb_mass += mass;
      bool ok = true;
      for (Index t = 0; t < cfg.n() && ok; ++t) {
        ok = dec.x_hat[std::size_t(t)] == xs[std::size_t(t)] &&
             dec.y_hat[std::size_t(t)] == ys[std::size_t(t)];
      }
      if (!ok) err_mass += mass;
      joint_mass[(ex.j * code.scb.num_u() + ey.i) * code.scb.y_rows() + ey.l] += mass;

      Index t = mlen - 1;
      for (; t >= 0; --t) {
        if (Index(++pos[std::size_t(t)]) < Index(support.size())) break;
        pos[std::size_t(t)] = 0;
      }
      if (t < 0) break;
    }
    const Real c = 1.0 / (Real(code.scb.num_u()) * Real(code.scb.x_rows()) *
                          Real(code.scb.y_rows()));
    Real v = 0;
    for (const auto& [cell, p] : joint_mass) v += std::abs(p - c);
    v += c * (Real(code.scb.num_u()) * Real(code.scb.x_rows()) * Real(code.scb.y_rows()) -
              Real(joint_mass.size()));
    m.joint_uniformity_v = v;
    m.uniformity_exact = true;
    m.block_err = err_mass;
    m.block_err_exact = true;
    m.fallback_rate_x = fallback_x_mass;
    m.fallback_rate_y = fallback_y_mass;
    m.ambiguity_rate = amb_mass;
    m.audit_violations = audit.violations;
    m.audit_max_slack = audit.max_slack;
    return m;
  }

  const bool factor_exact = exact_uniformity_factorized(code, m, audit);

  // Monte-Carlo trials for block error (and uniformity when not exact)
  std::unordered_map<Index, Index> joint_counts;
  Index err = 0, fx = 0, fy = 0, amb = 0;
  std::vector<int> xs(std::size_t(mlen), 0), ys(std::size_t(mlen), 0);
  for (Index t = 0; t < source_trials; ++t) {
    RngStream trial(master_seed, "sw-trial", trial_salt | std::uint64_t(t));
    for (Index p = 0; p < mlen; ++p) {
      const Index cell = Index(sample_symbol(flat_source, trial));
      xs[std::size_t(p)] = int(cell / ny);
      ys[std::size_t(p)] = int(cell % ny);
    }
    const SwEncodingX ex = sw_encode_x(code, xs);
    const SwEncodingY ey = sw_encode_y(code, ys);
    if (ex.i != ey.i) ++m.symmetry_violations;
    audit.add(ex.audit_slack_u);
    audit.add(ex.audit_slack_x);
    audit.add(ey.audit_slack_y);
    if (ex.fallback_x) ++fx;
    if (ey.fallback_y) ++fy;
    const SwDecoding dec = sw_decode(code, ex.j, ey.i, ey.l);
    if (dec.ambiguous) ++amb;
    bool ok = true;
    for (Index p = 0; p < cfg.n() && ok; ++p) {
      ok = dec.x_hat[std::size_t(p)] == xs[std::size_t(p)] &&
           dec.y_hat[std::size_t(p)] == ys[std::size_t(p)];
    }
    if (!ok) ++err;
    if (!factor_exact) {
      ++joint_counts[(ex.j * code.scb.num_u() + ey.i) * code.scb.y_rows() + ey.l];
    }
  }
  m.block_err = Real(err) / Real(source_trials);
  m.fallback_rate_x = Real(fx) / Real(source_trials);
  m.fallback_rate_y = Real(fy) / Real(source_trials);
  m.ambiguity_rate = Real(amb) / Real(source_trials);
  if (!factor_exact) {
    const Real total =
        Real(code.scb.num_u()) * Real(code.scb.x_rows()) * Real(code.scb.y_rows());
    const Real c = 1.0 / total;
    Real v = 0;
    for (const auto& [cell, count] : joint_counts) {
      v += std::abs(Real(count) / Real(source_trials) - c);
    }
    v += c * (total - Real(joint_counts.size()));
    m.joint_uniformity_v = v;
    m.uniformity_exact = false;
    m.undersampled = Real(source_trials) < 10.0 * total;
  }
  m.audit_violations = audit.violations;
  m.audit_max_slack = audit.max_slack;
  return m;
}

SwMetrics sw_evaluate(const SwConfig& cfg, Index codebook_trials, Index source_trials,
                      std::uint64_t master_seed) {
  SwMetrics out;
  for (Index c = 0; c < codebook_trials; ++c) {
    RngStream gen(master_seed, "sw-codebook", std::uint64_t(c));
    const SwCode code = sw_build(cfg, gen);
    out.per_codebook.push_back(
        sw_evaluate_code(code, source_trials, master_seed, std::uint64_t(c) << 32));
  }
  std::vector<Real> u, e;
  for (const auto& m : out.per_codebook) {
    u.push_back(m.joint_uniformity_v);
    e.push_back(m.block_err);
  }
  out.median_uniformity_v = median(u);
  out.median_block_err = median(e);
  return out;
}

}  // namespace nusim
