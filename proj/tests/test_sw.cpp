#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "nusim/slepian_wolf.hpp"

using namespace nusim;
using nusim::testing::block_diag_4x4;

namespace {

JointPmf equal_binary_source() {
  Vec m(4);
  m << 0.5, 0.0, 0.0, 0.5;
  return JointPmf({Alphabet::binary(), Alphabet::binary()}, std::move(m));
}

// Exhaustive code for the X = Y source: every cloud word present once, the
// X and Y tiers copy their cloud word.
SwCode exhaustive_equal_code(const SwConfig& cfg) {
  const Index n = cfg.n();
  const Index num_u = checked_power(2, n);
  std::vector<Symbol> u_words, x_words, y_words;
  for (Index idx = 0; idx < num_u; ++idx) {
    const auto t = index_to_tuple(idx, 2, n);
    for (int s : t) u_words.push_back(Symbol(s));
    for (Index k = 0; k < 2; ++k) {  // x tier: one row, two columns
      for (int s : t) x_words.push_back(Symbol(s));
    }
    for (int s : t) y_words.push_back(Symbol(s));  // y tier: one row
  }
  SuperCodebook scb(cfg.common().u_alphabet, Alphabet::binary(), Alphabet::binary(), n, num_u, 1,
                    2, 1, std::move(u_words), std::move(x_words), std::move(y_words));
  return SwCode{cfg,
                std::move(scb),
                extract_intrinsic(cfg.common().u_pmf, cfg.seed_segment(), cfg.seed_bins()),
                extract_intrinsic(cfg.source().marginal(0), cfg.seed_segment(), cfg.seed_bins()),
                extract_intrinsic(cfg.source().marginal(1), cfg.seed_segment(), cfg.seed_bins()),
                cfg.source().flatten()};
}

}  // namespace

TEST_CASE("sw config") {
  SUBCASE("block-diagonal source rates") {
    const SwConfig cfg(block_diag_4x4(0.6, 0.4), 10, 0.1, 0.2);
    const Real hu = binary_entropy_bits(0.6);
    CHECK(cfg.rate_u() == doctest::Approx(hu + 0.05).epsilon(1e-9));
    CHECK(cfg.rate_x() == doctest::Approx(1.0 + 0.05).epsilon(1e-9));   // H(X|Y) = 1
    CHECK(cfg.rate_x_col() == doctest::Approx(0.05).epsilon(1e-9));     // I(X;Y|U) = 0
    CHECK(cfg.rate_y() == doctest::Approx(1.0 + 0.05).epsilon(1e-9));   // H(Y|U) = 1
    CHECK(cfg.num_u() == Index(std::llround(std::exp2(10 * (hu + 0.05)))));
    CHECK(cfg.x_cols() == 2);
    CHECK(cfg.col_floor_applied());
    CHECK(cfg.seed_segment() == 4);  // ceil(3 * 0.1 * 10 / hu)
    CHECK(cfg.extended_len() == 22);
    CHECK(cfg.seed_bins() == 4);
  }
  SUBCASE("trivial common part is rejected") {
    CHECK_THROWS_AS(SwConfig(nusim::testing::dsbs(0.1), 6, 0.1, 0.2), ConfigError);
  }
  SUBCASE("epsilon must stay below the common entropy") {
    CHECK_THROWS_AS(SwConfig(block_diag_4x4(0.6, 0.4), 6, 1.5, 0.2), ConfigError);
  }
}

TEST_CASE("match table") {
  SUBCASE("hand boundaries") {
    const std::vector<Index> matches = {5, 9};
    CHECK(match_table_sample(matches, 4, 0) == 5);
    CHECK(match_table_sample(matches, 4, 1) == 5);
    CHECK(match_table_sample(matches, 4, 2) == 9);
    CHECK(match_table_sample(matches, 4, 3) == 9);
    CHECK(match_table_sample(matches, 3, 0) == 5);
    CHECK(match_table_sample(matches, 3, 1) == 9);
    CHECK(match_table_sample(matches, 3, 2) == 9);
  }
  SUBCASE("distance and deviation") {
    CHECK(match_table_distance(2, 4) == doctest::Approx(0.0));
    CHECK(match_table_distance(2, 3) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(match_table_head_deviation(2, 3) <= 1.0 / 3 + 1e-15);
    // the seeded-sampler bound M / ell holds for every (M, ell)
    for (Index m = 1; m <= 9; ++m) {
      for (Index ell = 1; ell <= 64; ++ell) {
        CHECK(match_table_distance(m, ell) <= Real(m) / Real(ell) + 1e-12);
        CHECK(match_table_head_deviation(m, ell) <= 1.0 / Real(ell) + 1e-12);
      }
    }
  }
  SUBCASE("single match always wins") {
    const std::vector<Index> one = {7};
    for (Index s = 0; s < 8; ++s) CHECK(match_table_sample(one, 8, s) == 7);
  }
}

TEST_CASE("sw build keeps tier words inside their cloud blocks") {
  const SwConfig cfg(block_diag_4x4(0.6, 0.4), 6, 0.1, 0.2);
  RngStream rng(71, "sw-build");
  const SwCode code = sw_build(cfg, rng);
  for (Index i = 0; i < code.scb.num_u(); ++i) {
    auto uw = code.scb.u_word(i);
    for (Index j = 0; j < code.scb.x_rows(); ++j) {
      for (Index k = 0; k < code.scb.x_cols(); ++k) {
        auto xw = code.scb.x_word(i, j, k);
        for (Index t = 0; t < cfg.n(); ++t) {
          CHECK(cfg.common().label_of_x(xw[std::size_t(t)]) == Index(uw[std::size_t(t)]));
        }
      }
    }
    for (Index l = 0; l < code.scb.y_rows(); ++l) {
      auto yw = code.scb.y_word(i, l);
      for (Index t = 0; t < cfg.n(); ++t) {
        CHECK(cfg.common().label_of_y(yw[std::size_t(t)]) == Index(uw[std::size_t(t)]));
      }
    }
  }
}

TEST_CASE("sw encoders") {
  const SwConfig cfg(equal_binary_source(), 3, 0.1, 0.4);
  const SwCode code = exhaustive_equal_code(cfg);
  SUBCASE("exhaustive lookup is exact and symmetric") {
    RngStream rng(72, "sw-enc");
    std::vector<int> xs(std::size_t(cfg.extended_len()), 0);
    for (int t = 0; t < 100; ++t) {
      for (auto& s : xs) s = int(rng.next_below(2));
      const SwEncodingX ex = sw_encode_x(code, xs);
      const SwEncodingY ey = sw_encode_y(code, xs);  // Y side sees the same block
      CHECK_FALSE(ex.fallback_u);
      CHECK_FALSE(ex.fallback_x);
      CHECK_FALSE(ey.fallback_y);
      CHECK(ex.i == ey.i);
      // the cloud word at index i is the first-n block itself
      auto uw = code.scb.u_word(ex.i);
      for (Index p = 0; p < cfg.n(); ++p) CHECK(Index(uw[std::size_t(p)]) == xs[std::size_t(p)]);
    }
  }
  SUBCASE("missing cloud word falls back with the flag") {
    // drop the all-ones word by building a smaller table
    std::vector<Symbol> u_words, x_words, y_words;
    for (Index idx = 0; idx < 7; ++idx) {  // words 0..6 only
      const auto t = index_to_tuple(idx, 2, 3);
      for (int s : t) u_words.push_back(Symbol(s));
      for (Index k = 0; k < 2; ++k) {
        for (int s : t) x_words.push_back(Symbol(s));
      }
      for (int s : t) y_words.push_back(Symbol(s));
    }
    SuperCodebook scb(cfg.common().u_alphabet, Alphabet::binary(), Alphabet::binary(), 3, 7, 1, 2,
                      1, std::move(u_words), std::move(x_words), std::move(y_words));
    const SwCode partial{cfg,
                         std::move(scb),
                         extract_intrinsic(cfg.common().u_pmf, cfg.seed_segment(), cfg.seed_bins()),
                         extract_intrinsic(cfg.source().marginal(0), cfg.seed_segment(),
                                           cfg.seed_bins()),
                         extract_intrinsic(cfg.source().marginal(1), cfg.seed_segment(),
                                           cfg.seed_bins()),
                         cfg.source().flatten()};
    std::vector<int> xs(std::size_t(cfg.extended_len()), 1);  // all ones
    const SwEncodingX ex = sw_encode_x(partial, xs);
    CHECK(ex.fallback_u);
    CHECK(ex.i == 0);
  }
}

TEST_CASE("sw decode") {
  const SwConfig cfg(equal_binary_source(), 3, 0.1, 0.4);
  const SwCode code = exhaustive_equal_code(cfg);
  SUBCASE("recovers the pair when the indices are right") {
    for (Index i = 0; i < 8; ++i) {
      const SwDecoding dec = sw_decode(code, 0, i, 0);
      auto uw = code.scb.u_word(i);
      for (Index t = 0; t < 3; ++t) {
        CHECK(dec.y_hat[std::size_t(t)] == int(uw[std::size_t(t)]));
        CHECK(dec.x_hat[std::size_t(t)] == int(uw[std::size_t(t)]));
      }
    }
  }
  SUBCASE("ambiguity flag for atypical pairs") {
    // all-zeros block: the (x, y) pair letter (0,0) appears with frequency 1
    // but carries mass 0.5, atypical at delta = 0.4; both columns fail
    const SwDecoding dec = sw_decode(code, 0, 0, 0);
    CHECK(dec.ambiguous);  // zero or multiple matches; both words equal here
  }
}

TEST_CASE("sw exhaustive sanity instance has zero block error") {
  const SwConfig cfg(equal_binary_source(), 3, 0.1, 0.4);
  const SwCode code = exhaustive_equal_code(cfg);
  const SwCodebookMetrics m = sw_evaluate_code(code, 0, 999, 0);
  CHECK(m.block_err_exact);
  CHECK(m.block_err == doctest::Approx(0.0));
  CHECK(m.symmetry_violations == 0);
  CHECK(m.audit_violations == 0);
  CHECK(m.uniformity_exact);
  CHECK(m.joint_uniformity_v >= 0.0);
  CHECK(m.joint_uniformity_v <= 2.0);
}

TEST_CASE("sw factorized uniformity matches the support enumeration") {
  // random codebooks over the X = Y source: both exact paths apply
  const SwConfig cfg(equal_binary_source(), 3, 0.1, 0.4);
  for (int c = 0; c < 3; ++c) {
    RngStream rng(73, "sw-cross", std::uint64_t(c));
    const SwCode code = sw_build(cfg, rng);
    const SwCodebookMetrics via_support = sw_evaluate_code(code, 0, 999, 0);
    const SwUniformityResult via_factor = sw_exact_uniformity(code);
    REQUIRE(via_factor.ok);
    REQUIRE(via_support.uniformity_exact);
    CHECK(via_factor.v == doctest::Approx(via_support.joint_uniformity_v).epsilon(1e-9));
  }
}

TEST_CASE("sw coverage matches the analytic estimate") {
  // X = Y uniform binary, n = 4, cloud rate 1.2: match probability within
  // three standard errors of 1 - (1 - 2^-4)^(2^(4*1.2))
  const Index n = 4;
  const Index num_u = RateConfig::size_for(n, 1.2);
  Index hits = 0;
  const Index draws = 200;
  Index total = 0;
  for (Index c = 0; c < 20; ++c) {
    RngStream rng(74, "sw-cover", std::uint64_t(c));
    std::vector<Symbol> u_words(std::size_t(num_u * n));
    for (auto& s : u_words) s = Symbol(rng.next_below(2));
    for (Index d = 0; d < draws / 20; ++d) {
      std::vector<int> u_seq(std::size_t(n), 0);
      for (auto& s : u_seq) s = int(rng.next_below(2));
      bool found = false;
      for (Index i = 0; i < num_u && !found; ++i) {
        found = true;
        for (Index t = 0; t < n; ++t) {
          if (Index(u_words[std::size_t(i * n + t)]) != u_seq[std::size_t(t)]) {
            found = false;
            break;
          }
        }
      }
      hits += found;
      ++total;
    }
  }
  const Real p = 1.0 - std::pow(1.0 - std::exp2(-Real(n)), Real(num_u));
  const Real freq = Real(hits) / Real(total);
  const Real sigma = std::sqrt(p * (1 - p) / Real(total));
  CHECK(std::abs(freq - p) <= 3 * sigma + 1e-9);
}

TEST_CASE("sw evaluate on the block-diagonal family") {
  const SwConfig cfg(block_diag_4x4(0.6, 0.4), 6, 0.1, 0.2);
  const SwMetrics m = sw_evaluate(cfg, 2, 300, 2024);
  REQUIRE(m.per_codebook.size() == 2);
  for (const auto& c : m.per_codebook) {
    CHECK(c.uniformity_exact);  // factorized path applies
    CHECK(c.joint_uniformity_v >= 0.0);
    CHECK(c.joint_uniformity_v <= 2.0);
    CHECK(c.symmetry_violations == 0);
    CHECK(c.audit_violations == 0);
    CHECK(c.block_err >= 0.0);
    CHECK(c.block_err <= 1.0);
  }
  // determinism
  const SwMetrics m2 = sw_evaluate(cfg, 2, 300, 2024);
  for (std::size_t i = 0; i < m.per_codebook.size(); ++i) {
    CHECK(m.per_codebook[i].joint_uniformity_v == m2.per_codebook[i].joint_uniformity_v);
    CHECK(m.per_codebook[i].block_err == m2.per_codebook[i].block_err);
  }
}
