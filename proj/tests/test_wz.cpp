#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "nusim/wyner_ziv.hpp"

using namespace nusim;
using nusim::testing::dsbs;

namespace {

// X = Y uniform binary source with the identity test channel: W = X, the
// reconstruction returns the side symbol, zero target distortion.
Mat hamming2() {
  Mat d(2, 2);
  d << 0, 1, 1, 0;
  return d;
}

WzConfig identity_config(Index n, Real epsilon) {
  Vec m(4);
  m << 0.5, 0.0, 0.0, 0.5;
  JointPmf src({Alphabet::binary(), Alphabet::binary()}, std::move(m));
  // f(w, y) = y
  TestChannel tc{Channel::identity(Alphabet::binary()), Alphabet::binary(),
                 {{0, 1}, {0, 1}}, hamming2(), 1.0};
  return WzConfig(std::move(src), std::move(tc), n, epsilon, 0.4, 0.0);
}

// The acceptance family: doubly symmetric source, auxiliary through a BSC.
WzConfig dsbs_config(Index n, Real epsilon) {
  TestChannel tc{Channel::binary_symmetric(0.25), Alphabet::binary(),
                 {{0, 1}, {0, 1}}, hamming2(), 1.0};
  return WzConfig(dsbs(0.1), std::move(tc), n, epsilon, epsilon, 0.1 + 1e-9);
}

}  // namespace

TEST_CASE("wz config derivations") {
  const WzConfig cfg = dsbs_config(10, 0.1);
  const Real i_xw = 1.0 - binary_entropy_bits(0.25);
  const Real i_wy = 1.0 - binary_entropy_bits(0.25 * 0.9 + 0.75 * 0.1);
  CHECK(cfg.rate_row() == doctest::Approx(i_xw - i_wy + 0.2).epsilon(1e-9));
  CHECK(cfg.rate_col() == doctest::Approx(i_wy - 0.1).epsilon(1e-9));
  CHECK(cfg.rows() == 6);
  CHECK(cfg.cols() == 2);  // round(2^{n R'}) = 1, floored with the flag set
  CHECK(cfg.col_floor_applied());
  CHECK(cfg.seed_block() == 3);  // ceil(3 * 0.1 * 10 / 1)
  CHECK(cfg.seed_bins() == 4);   // round(2^{2 n eps})
  CHECK_FALSE(cfg.emulation_certified());
  CHECK(cfg.extended_len() == 13);
}

TEST_CASE("wz config rejects bad parameters") {
  CHECK_THROWS_AS(dsbs_config(10, 0.0), ConfigError);   // epsilon must be positive
  CHECK_THROWS_AS(dsbs_config(10, 0.2), ConfigError);   // column rate would go negative
  // distortion target below the test channel's expected distortion
  TestChannel tc{Channel::binary_symmetric(0.25), Alphabet::binary(),
                 {{0, 1}, {0, 1}}, hamming2(), 1.0};
  CHECK_THROWS_AS(WzConfig(dsbs(0.1), tc, 8, 0.1, 0.1, 0.01), ConfigError);
}

TEST_CASE("likelihood posterior") {
  SUBCASE("identity channel with a unique match is a point mass") {
    std::vector<Symbol> words = {0, 0, 0, 1, 1, 0, 1, 1};
    const Codebook cb(Alphabet::binary(), 4, 1, 2, words, "manual");
    const std::vector<int> x = {1, 0};
    const Posterior p = likelihood_posterior(cb, Channel::identity(Alphabet::binary()), x);
    CHECK_FALSE(p.zero_likelihood);
    CHECK(p.pmf(2) == doctest::Approx(1.0));
  }
  SUBCASE("identical words give a uniform posterior") {
    std::vector<Symbol> words = {0, 1, 0, 1, 0, 1};
    const Codebook cb(Alphabet::binary(), 3, 1, 2, words, "manual");
    const std::vector<int> x = {0, 0};
    const Posterior p = likelihood_posterior(cb, Channel::binary_symmetric(0.1), x);
    for (Index i = 0; i < 3; ++i) CHECK(p.pmf(i) == doctest::Approx(1.0 / 3));
  }
  SUBCASE("two words at hamming distance 0 and 2") {
    std::vector<Symbol> words = {0, 0, 0, 0, 1, 1};
    const Codebook cb(Alphabet::binary(), 2, 1, 3, words, "manual");
    const std::vector<int> x = {0, 0, 0};
    const Posterior p = likelihood_posterior(cb, Channel::binary_symmetric(0.1), x);
    // likelihoods 0.9^3 = 0.729 and 0.9 * 0.1^2 = 0.009
    CHECK(p.pmf(0) == doctest::Approx(0.729 / 0.738).epsilon(1e-12));
    CHECK(p.pmf(1) == doctest::Approx(0.009 / 0.738).epsilon(1e-12));
  }
  SUBCASE("impossible block falls back to uniform with the flag") {
    std::vector<Symbol> words = {0, 0, 0, 0};
    const Codebook cb(Alphabet::binary(), 2, 1, 2, words, "manual");
    const std::vector<int> x = {1, 1};
    const Posterior p = likelihood_posterior(cb, Channel::identity(Alphabet::binary()), x);
    CHECK(p.zero_likelihood);
    CHECK(p.pmf(0) == doctest::Approx(0.5));
  }
}

TEST_CASE("wz encode") {
  const WzConfig cfg = identity_config(4, 0.2);
  RngStream rng(61, "wz-enc");
  const WzCode code = wz_build(cfg, rng);
  SUBCASE("deterministic across repeated invocations") {
    std::vector<int> x(std::size_t(cfg.extended_len()), 0);
    x[1] = 1;
    x[3] = 1;
    const WzEncoding first = wz_encode(code, x);
    for (int r = 0; r < 100; ++r) {
      const WzEncoding again = wz_encode(code, x);
      CHECK(again.row == first.row);
      CHECK(again.col == first.col);
    }
  }
  SUBCASE("matching word wins under the identity channel") {
    // find a block covered by the codebook, then check the row matches
    for (Index w = 0; w < code.codebook.word_count(); ++w) {
      auto word = code.codebook.word_flat(w);
      std::vector<int> x(std::size_t(cfg.extended_len()), 0);
      bool unique = true;
      for (Index v = 0; v < code.codebook.word_count() && unique; ++v) {
        if (v != w) {
          unique = !std::equal(word.begin(), word.end(), code.codebook.word_flat(v).begin());
        }
      }
      if (!unique) continue;
      for (Index t = 0; t < cfg.n(); ++t) x[std::size_t(t)] = int(word[std::size_t(t)]);
      const WzEncoding enc = wz_encode(code, x);
      CHECK(enc.row == w / code.codebook.cols());
      CHECK(enc.col == w % code.codebook.cols());
      break;
    }
  }
  SUBCASE("sampler audit stays within the bound per block") {
    RngStream src(62, "wz-enc-audit");
    std::vector<int> x(std::size_t(cfg.extended_len()), 0);
    for (int t = 0; t < 200; ++t) {
      for (auto& s : x) s = int(src.next_below(2));
      const WzEncoding enc = wz_encode(code, x);
      CHECK(enc.sampler_distance <= enc.sampler_bound + 1e-12);
      CHECK(enc.sampler_head_dev <= 1.0 / Real(cfg.seed_bins()) + 1e-12);
    }
  }
}

TEST_CASE("wz decode") {
  SUBCASE("single column always returns it") {
    const WzConfig cfg = identity_config(3, 0.2);
    std::vector<Symbol> words = {0, 1, 0, 1, 1, 1};
    const Codebook cb(Alphabet::binary(), 2, 1, 3, words, "manual");
    const WzCode code{cfg, cb, cfg.x_given_w(), cfg.y_given_w(),
                      extract_intrinsic(cfg.source().marginal(0), cfg.seed_block(),
                                        cfg.seed_bins())};
    const std::vector<int> y = {1, 1, 1};
    CHECK(wz_decode(code, 0, y).col == 0);
    CHECK(wz_decode(code, 1, y).col == 0);
  }
  SUBCASE("side sequence selects its column under an identity side channel") {
    const WzConfig cfg = identity_config(3, 0.2);
    // row 0 holds two distinct words; y equal to the second word picks col 1
    std::vector<Symbol> words = {0, 0, 0, 1, 0, 1};
    const Codebook cb(Alphabet::binary(), 1, 2, 3, words, "manual");
    const WzCode code{cfg, cb, cfg.x_given_w(), cfg.y_given_w(),
                      extract_intrinsic(cfg.source().marginal(0), cfg.seed_block(),
                                        cfg.seed_bins())};
    const std::vector<int> y = {1, 0, 1};
    const WzDecoding dec = wz_decode(code, 0, y);
    CHECK(dec.col == 1);
    // reconstruction copies the side symbols under f(w, y) = y
    CHECK(dec.x_hat == std::vector<int>{1, 0, 1});
  }
}

TEST_CASE("wz end-to-end with an exhaustive codebook is exact") {
  const WzConfig cfg = identity_config(4, 0.2);
  // manual codebook holding every length-4 block exactly once
  std::vector<Symbol> words;
  for (Index idx = 0; idx < 16; ++idx) {
    for (int s : index_to_tuple(idx, 2, 4)) words.push_back(Symbol(s));
  }
  const Codebook cb(Alphabet::binary(), 8, 2, 4, words, "manual");
  const WzCode code{cfg, cb, cfg.x_given_w(), cfg.y_given_w(),
                    extract_intrinsic(cfg.source().marginal(0), cfg.seed_block(),
                                      cfg.seed_bins())};
  RngStream rng(63, "wz-exh");
  std::vector<int> x(std::size_t(cfg.extended_len()), 0);
  for (int t = 0; t < 300; ++t) {
    for (auto& s : x) s = int(rng.next_below(2));
    const std::vector<int> y(x.begin(), x.begin() + cfg.n());
    const WzEncoding enc = wz_encode(code, x);
    CHECK_FALSE(enc.zero_likelihood);
    const WzDecoding dec = wz_decode(code, enc.row, y);
    CHECK(dec.col == enc.col);
    for (Index i = 0; i < cfg.n(); ++i) CHECK(dec.x_hat[std::size_t(i)] == x[std::size_t(i)]);
  }
}

TEST_CASE("wz evaluate") {
  SUBCASE("uniformity pmf is valid and distortion accounting holds") {
    const WzConfig cfg = dsbs_config(6, 0.1);
    const WzMetrics m = wz_evaluate(cfg, 3, 400, 777);
    REQUIRE(m.per_codebook.size() == 3);
    for (const auto& c : m.per_codebook) {
      CHECK(c.uniformity_v >= 0.0);
      CHECK(c.uniformity_v <= 2.0);
      CHECK(c.uniformity_exact);
      CHECK(c.audit_violations == 0);
      // accounting identity between the charged and first-n distortions
      const Real lhs = c.avg_distortion;
      const Real rhs = (Real(cfg.n()) * c.distortion_first_n +
                        Real(cfg.seed_block()) * cfg.test_channel().d_max) /
                       Real(cfg.extended_len());
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
  SUBCASE("deterministic with the same master seed") {
    const WzConfig cfg = dsbs_config(6, 0.1);
    const WzMetrics a = wz_evaluate(cfg, 2, 200, 4242);
    const WzMetrics b = wz_evaluate(cfg, 2, 200, 4242);
    for (std::size_t i = 0; i < a.per_codebook.size(); ++i) {
      CHECK(a.per_codebook[i].uniformity_v == b.per_codebook[i].uniformity_v);
      CHECK(a.per_codebook[i].decode_err == b.per_codebook[i].decode_err);
      CHECK(a.per_codebook[i].avg_distortion == b.per_codebook[i].avg_distortion);
    }
  }
}
