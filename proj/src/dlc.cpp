#include "nusim/dlc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace nusim {

JointPmf outer_message_joint(const OuterCode& outer, const JointPmf& source) {
  const Index nx = source.dim(0);
  const Index ny = source.dim(1);
  const Index blocks_x = checked_power(nx, outer.block_len);
  checked_power(ny, outer.block_len);
  Vec mass = Vec::Zero(outer.mx_alphabet.size() * outer.my_alphabet.size());
  (void)blocks_x;
  std::vector<int> xb(std::size_t(outer.block_len), 0), yb(std::size_t(outer.block_len), 0);
  // enumerate source blocks jointly; mass of (x block, y block) is the
  // product of per-letter joint masses
  std::vector<Index> pos(std::size_t(2 * outer.block_len), 0);
  while (true) {
    Real p = 1;
    for (Index t = 0; t < outer.block_len; ++t) {
      xb[std::size_t(t)] = int(pos[std::size_t(t)]);
      yb[std::size_t(t)] = int(pos[std::size_t(outer.block_len + t)]);
      p *= source.at2(xb[std::size_t(t)], yb[std::size_t(t)]);
    }
    if (p > 0) {
      const Index mx = outer.fx(xb);
      const Index my = outer.fy(yb);
      mass(mx * outer.my_alphabet.size() + my) += p;
    }
    Index t = Index(pos.size()) - 1;
    for (; t >= 0; --t) {
      const Index lim = t < outer.block_len ? nx : ny;
      if (Index(++pos[std::size_t(t)]) < lim) break;
      pos[std::size_t(t)] = 0;
    }
    if (t < 0) break;
  }
  return JointPmf({outer.mx_alphabet, outer.my_alphabet}, std::move(mass));
}

OuterCode scalar_quantizer_outer(const JointPmf& source, std::vector<Index> cell_x,
                                 std::vector<Index> rep_x, std::vector<Index> cell_y,
                                 std::vector<Index> rep_y, Mat dx, Mat dy) {
  if (Index(cell_x.size()) != source.dim(0) || Index(cell_y.size()) != source.dim(1)) {
    throw ConfigError("quantizer: cell map sizes");
  }
  const Index levels_x = 1 + *std::max_element(cell_x.begin(), cell_x.end());
  const Index levels_y = 1 + *std::max_element(cell_y.begin(), cell_y.end());
  if (Index(rep_x.size()) != levels_x || Index(rep_y.size()) != levels_y) {
    throw ConfigError("quantizer: representative counts");
  }
  OuterCode outer;
  outer.block_len = 1;
  outer.mx_alphabet = Alphabet::indexed("mx", levels_x);
  outer.my_alphabet = Alphabet::indexed("my", levels_y);
  outer.xhat_alphabet = source.axis(0);
  outer.yhat_alphabet = source.axis(1);
  outer.fx = [cell_x](std::span<const int> b) { return cell_x[std::size_t(b[0])]; };
  outer.fy = [cell_y](std::span<const int> b) { return cell_y[std::size_t(b[0])]; };
  outer.reconstruct = [rep_x, rep_y](Index mx, Index my, std::vector<int>& xh,
                                     std::vector<int>& yh) {
    xh.assign(1, int(rep_x[std::size_t(mx)]));
    yh.assign(1, int(rep_y[std::size_t(my)]));
  };
  outer.dx = std::move(dx);
  outer.dy = std::move(dy);
  outer.dx_max = outer.dx.maxCoeff();
  outer.dy_max = outer.dy.maxCoeff();
  return outer;
}

OuterCode random_codebook_outer(const JointPmf& source, Index block_len, Index words_x,
                                Index words_y, Mat dx, Mat dy, RngStream& rng) {
  const Pmf px = source.marginal(0);
  const Pmf py = source.marginal(1);
  const Codebook cbx = gen_codebook(px, words_x, 1, block_len, rng, "outer-x");
  const Codebook cby = gen_codebook(py, words_y, 1, block_len, rng, "outer-y");
  OuterCode outer;
  outer.block_len = block_len;
  outer.mx_alphabet = Alphabet::indexed("mx", words_x);
  outer.my_alphabet = Alphabet::indexed("my", words_y);
  outer.xhat_alphabet = source.axis(0);
  outer.yhat_alphabet = source.axis(1);
  outer.dx = std::move(dx);
  outer.dy = std::move(dy);
  outer.dx_max = outer.dx.maxCoeff();
  outer.dy_max = outer.dy.maxCoeff();
  const Mat dxm = outer.dx;
  const Mat dym = outer.dy;
  outer.fx = [cbx, dxm](std::span<const int> b) {
    Index best = 0;
    Real best_d = std::numeric_limits<Real>::infinity();
    for (Index w = 0; w < cbx.word_count(); ++w) {
      auto word = cbx.word_flat(w);
      Real d = 0;
      for (std::size_t t = 0; t < b.size(); ++t) d += dxm(b[t], word[t]);
      if (d < best_d) {
        best_d = d;
        best = w;
      }
    }
    return best;
  };
  outer.fy = [cby, dym](std::span<const int> b) {
    Index best = 0;
    Real best_d = std::numeric_limits<Real>::infinity();
    for (Index w = 0; w < cby.word_count(); ++w) {
      auto word = cby.word_flat(w);
      Real d = 0;
      for (std::size_t t = 0; t < b.size(); ++t) d += dym(b[t], word[t]);
      if (d < best_d) {
        best_d = d;
        best = w;
      }
    }
    return best;
  };
  outer.reconstruct = [cbx, cby](Index mx, Index my, std::vector<int>& xh, std::vector<int>& yh) {
    auto wx = cbx.word_flat(mx);
    auto wy = cby.word_flat(my);
    xh.assign(wx.begin(), wx.end());
    yh.assign(wy.begin(), wy.end());
  };
  return outer;
}

OuterCode identity_outer(const JointPmf& source) {
  OuterCode outer;
  outer.block_len = 1;
  outer.mx_alphabet = source.axis(0);
  outer.my_alphabet = source.axis(1);
  outer.xhat_alphabet = source.axis(0);
  outer.yhat_alphabet = source.axis(1);
  outer.fx = [](std::span<const int> b) { return Index(b[0]); };
  outer.fy = [](std::span<const int> b) { return Index(b[0]); };
  outer.reconstruct = [](Index mx, Index my, std::vector<int>& xh, std::vector<int>& yh) {
    xh.assign(1, int(mx));
    yh.assign(1, int(my));
  };
  const Index nx = source.dim(0);
  const Index ny = source.dim(1);
  outer.dx = Mat::Ones(nx, nx) - Mat::Identity(nx, nx);
  outer.dy = Mat::Ones(ny, ny) - Mat::Identity(ny, ny);
  outer.dx_max = 1.0;
  outer.dy_max = 1.0;
  return outer;
}

OuterCode pad_with_common(const OuterCode& outer, const CommonPart& cp, Index pad_alphabet) {
  if (!is_nontrivial(cp)) throw ConfigError("padding requires a non-trivial common part");
  if (pad_alphabet < 1) throw ConfigError("padding alphabet must be nonempty");
  const Index d = pad_alphabet;
  const Index nu = cp.u_alphabet.size();
  OuterCode padded = outer;
  padded.mx_alphabet = Alphabet::indexed("mx", outer.mx_alphabet.size() * d);
  padded.my_alphabet = Alphabet::indexed("my", outer.my_alphabet.size() * d);
  const auto u_of_x = cp.u_of_x;
  const auto u_of_y = cp.u_of_y;
  auto digest = [d, nu](std::span<const int> labels) {
    Index idx = 0;
    for (int l : labels) idx = (idx * nu + l) % d;
    return idx;
  };
  const auto fx = outer.fx;
  const auto fy = outer.fy;
  padded.fx = [fx, u_of_x, digest, d](std::span<const int> b) {
    std::vector<int> labels(b.size());
    for (std::size_t t = 0; t < b.size(); ++t) {
      const Index l = u_of_x[std::size_t(b[t])];
      if (l < 0) throw ConfigError("padding: symbol outside the source support");
      labels[t] = int(l);
    }
    return fx(b) * d + digest(labels);
  };
  padded.fy = [fy, u_of_y, digest, d](std::span<const int> b) {
    std::vector<int> labels(b.size());
    for (std::size_t t = 0; t < b.size(); ++t) {
      const Index l = u_of_y[std::size_t(b[t])];
      if (l < 0) throw ConfigError("padding: symbol outside the source support");
      labels[t] = int(l);
    }
    return fy(b) * d + digest(labels);
  };
  const auto rec = outer.reconstruct;
  padded.reconstruct = [rec, d](Index mx, Index my, std::vector<int>& xh, std::vector<int>& yh) {
    rec(mx / d, my / d, xh, yh);
  };
  return padded;
}

DlcCode dlc_concatenate(OuterCode outer, const JointPmf& source, Index inner_n,
                        Real inner_epsilon, Real inner_delta) {
  JointPmf mj = outer_message_joint(outer, source);
  bool padded = false;
  if (!is_nontrivial(common_part(mj))) {
    const CommonPart src_cp = common_part(source);
    outer = pad_with_common(outer, src_cp, src_cp.u_alphabet.size());
    mj = outer_message_joint(outer, source);
    padded = true;
  }
  SwConfig inner(mj, inner_n, inner_epsilon, inner_delta);
  return DlcCode{std::move(outer), source, std::move(mj), std::move(inner), padded};
}

DlcMetrics dlc_evaluate(const DlcCode& code, Index codebook_trials, Index super_trials,
                        std::uint64_t master_seed) {
  DlcMetrics out;
  const OuterCode& outer = code.outer;
  const JointPmf& source = code.source;
  const Index blocks = code.inner.extended_len();  // outer blocks per super trial
  const Index n_inner = code.inner.n();
  const Index bl = outer.block_len;
  const Pmf flat_source = source.flatten();
  const Index ny = source.dim(1);

  for (Index c = 0; c < codebook_trials; ++c) {
    RngStream gen(master_seed, "dlc-codebook", std::uint64_t(c));
    const SwCode inner_code = sw_build(code.inner, gen);
    DlcCodebookMetrics m;
    m.rate_x = std::log2(Real(inner_code.scb.x_rows())) / Real(blocks * bl);
    m.rate_y = std::log2(Real(inner_code.scb.num_u()) * Real(inner_code.scb.y_rows())) /
               Real(blocks * bl);
    m.overhead_fraction = Real(blocks - n_inner) / Real(blocks);

    // composed joint uniformity: the outer encoders only relabel the inner
    // inputs, so this equals the inner uniformity on the message statistics
    const SwUniformityResult uni = sw_exact_uniformity(inner_code);
    m.joint_uniformity_v = uni.v;
    m.uniformity_exact = uni.ok;

    Real dsum_x = 0, dsum_y = 0, base_x = 0, base_y = 0, err_blocks = 0;
    std::unordered_map<Index, Index> joint_counts;
    std::vector<int> mx_seq(std::size_t(blocks), 0), my_seq(std::size_t(blocks), 0);
    std::vector<std::vector<int>> xb(std::size_t(blocks)), yb(std::size_t(blocks));
    std::vector<int> xh, yh;
    for (Index t = 0; t < super_trials; ++t) {
      RngStream trial(master_seed, "dlc-trial", (std::uint64_t(c) << 32) | std::uint64_t(t));
      for (Index b = 0; b < blocks; ++b) {
        xb[std::size_t(b)].resize(std::size_t(bl));
        yb[std::size_t(b)].resize(std::size_t(bl));
        for (Index p = 0; p < bl; ++p) {
          const Index cell = Index(sample_symbol(flat_source, trial));
          xb[std::size_t(b)][std::size_t(p)] = int(cell / ny);
          yb[std::size_t(b)][std::size_t(p)] = int(cell % ny);
        }
        mx_seq[std::size_t(b)] = int(outer.fx(xb[std::size_t(b)]));
        my_seq[std::size_t(b)] = int(outer.fy(yb[std::size_t(b)]));
      }
      const SwEncodingX ex = sw_encode_x(inner_code, mx_seq);
      const SwEncodingY ey = sw_encode_y(inner_code, my_seq);
      const SwDecoding dec = sw_decode(inner_code, ex.j, ey.i, ey.l);
      ++joint_counts[(ex.j * inner_code.scb.num_u() + ey.i) * inner_code.scb.y_rows() + ey.l];

      Real trial_dx = 0, trial_dy = 0, trial_bx = 0, trial_by = 0;
      Index wrong = 0;
      for (Index b = 0; b < blocks; ++b) {
        // baseline: the outer code alone on this block
        outer.reconstruct(mx_seq[std::size_t(b)], my_seq[std::size_t(b)], xh, yh);
        for (Index p = 0; p < bl; ++p) {
          trial_bx += outer.dx(xb[std::size_t(b)][std::size_t(p)], xh[std::size_t(p)]);
          trial_by += outer.dy(yb[std::size_t(b)][std::size_t(p)], yh[std::size_t(p)]);
        }
        const bool recovered = b < n_inner &&
                               dec.x_hat[std::size_t(b)] == mx_seq[std::size_t(b)] &&
                               dec.y_hat[std::size_t(b)] == my_seq[std::size_t(b)];
        if (b < n_inner && !recovered) ++wrong;
        if (recovered) {
          outer.reconstruct(dec.x_hat[std::size_t(b)], dec.y_hat[std::size_t(b)], xh, yh);
          for (Index p = 0; p < bl; ++p) {
            trial_dx += outer.dx(xb[std::size_t(b)][std::size_t(p)], xh[std::size_t(p)]);
            trial_dy += outer.dy(yb[std::size_t(b)][std::size_t(p)], yh[std::size_t(p)]);
          }
        } else {
          trial_dx += Real(bl) * outer.dx_max;
          trial_dy += Real(bl) * outer.dy_max;
        }
      }
      const Real denom = Real(blocks * bl);
      trial_dx /= denom;
      trial_dy /= denom;
      trial_bx /= denom;
      trial_by /= denom;
      const Real charge = (Real(wrong) + Real(blocks - n_inner)) / Real(blocks);
      const Real slack_x = trial_dx - (trial_bx + outer.dx_max * charge + 1e-9);
      const Real slack_y = trial_dy - (trial_by + outer.dy_max * charge + 1e-9);
      m.accounting_max_slack = std::max({m.accounting_max_slack, slack_x, slack_y});
      if (slack_x > 0 || slack_y > 0) ++m.accounting_violations;
      dsum_x += trial_dx;
      dsum_y += trial_dy;
      base_x += trial_bx;
      base_y += trial_by;
      err_blocks += Real(wrong) / Real(blocks);
    }
    m.avg_distortion_x = dsum_x / Real(super_trials);
    m.avg_distortion_y = dsum_y / Real(super_trials);
    m.baseline_distortion_x = base_x / Real(super_trials);
    m.baseline_distortion_y = base_y / Real(super_trials);
    m.inner_block_err = err_blocks / Real(super_trials);
    if (!m.uniformity_exact) {
      const Real total = Real(inner_code.scb.num_u()) * Real(inner_code.scb.x_rows()) *
                         Real(inner_code.scb.y_rows());
      const Real cc = 1.0 / total;
      Real v = 0;
      for (const auto& [cell, count] : joint_counts) {
        v += std::abs(Real(count) / Real(super_trials) - cc);
      }
      m.joint_uniformity_v = v + cc * (total - Real(joint_counts.size()));
    }
    out.per_codebook.push_back(m);
  }

  std::vector<Real> u, dx, dy;
  for (const auto& m : out.per_codebook) {
    u.push_back(m.joint_uniformity_v);
    dx.push_back(m.avg_distortion_x);
    dy.push_back(m.avg_distortion_y);
  }
  out.median_uniformity_v = median(u);
  out.median_distortion_x = median(dx);
  out.median_distortion_y = median(dy);
  return out;
}

}  // namespace nusim
