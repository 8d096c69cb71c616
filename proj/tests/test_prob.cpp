#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "nusim/prob.hpp"

using namespace nusim;
using nusim::testing::dsbs;
using nusim::testing::random_joint;
using nusim::testing::random_pmf;
using nusim::testing::random_sparse_pmf;

namespace {

Pmf binary_pmf(Real p0) {
  Vec m(2);
  m << p0, 1.0 - p0;
  return Pmf(Alphabet::binary(), std::move(m));
}

}  // namespace

TEST_CASE("product_extend basics") {
  SUBCASE("uniform pair squared") {
    const Pmf p2 = product_extend(binary_pmf(0.5), 2);
    REQUIRE(p2.size() == 4);
    for (Index i = 0; i < 4; ++i) CHECK(p2(i) == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("degenerate point mass") {
    const Pmf p3 = product_extend(binary_pmf(1.0), 3);
    CHECK(p3(0) == doctest::Approx(1.0));
    CHECK(p3.mass().tail(7).abs().maxCoeff() == doctest::Approx(0.0));
  }
  SUBCASE("lexicographic order of masses") {
    const Pmf p = product_extend(binary_pmf(0.25), 2);
    CHECK(p(0) == doctest::Approx(0.0625));
    CHECK(p(1) == doctest::Approx(0.1875));
    CHECK(p(2) == doctest::Approx(0.1875));
    CHECK(p(3) == doctest::Approx(0.5625));
  }
  SUBCASE("budget error names monte carlo") {
    CHECK_THROWS_AS(product_extend(binary_pmf(0.5), 40), BudgetError);
    try {
      product_extend(binary_pmf(0.5), 40);
    } catch (const BudgetError& e) {
      CHECK(std::string(e.what()).find("Monte-Carlo") != std::string::npos);
    }
  }
}

TEST_CASE("variational distance") {
  const Pmf u = binary_pmf(0.5);
  CHECK(variational_distance(u, u) == doctest::Approx(0.0));
  const Pmf da = binary_pmf(1.0);
  const Pmf db = binary_pmf(0.0);
  CHECK(variational_distance(da, db) == doctest::Approx(2.0));
  CHECK(variational_distance(u, da) == doctest::Approx(1.0));
  CHECK_THROWS_AS(variational_distance(u, Pmf::uniform(Alphabet::indexed("z", 3))), ConfigError);
}

TEST_CASE("variational distance properties on random pmfs") {
  RngStream rng(101, "vd-props");
  const Alphabet a = Alphabet::indexed("a", 5);
  for (int t = 0; t < 500; ++t) {
    const Pmf p = random_pmf(a, rng);
    const Pmf q = random_pmf(a, rng);
    const Pmf r = random_pmf(a, rng);
    const Real vpq = variational_distance(p, q);
    CHECK(vpq >= 0.0);
    CHECK(vpq <= 2.0);
    CHECK(variational_distance(p, q) <=
          variational_distance(p, r) + variational_distance(r, q) + 1e-12);
    CHECK(variational_distance(p, p) == doctest::Approx(0.0));
  }
}

TEST_CASE("kl divergence") {
  const Pmf u = binary_pmf(0.5);
  CHECK(kl_divergence_bits(u, u) == doctest::Approx(0.0));
  CHECK(kl_divergence_bits(binary_pmf(1.0), u) == doctest::Approx(1.0));
  CHECK(std::isinf(kl_divergence_bits(u, binary_pmf(1.0))));
}

TEST_CASE("info measures") {
  SUBCASE("independent uniform pair") {
    const JointPmf j = JointPmf::independent(binary_pmf(0.5), binary_pmf(0.5));
    const InfoMeasures im = info_measures(j);
    CHECK(im.mutual(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(im.entropy(0) == doctest::Approx(1.0));
  }
  SUBCASE("identical uniform pair") {
    Vec m(4);
    m << 0.5, 0.0, 0.0, 0.5;
    const JointPmf j({Alphabet::binary(), Alphabet::binary()}, std::move(m));
    CHECK(info_measures(j).mutual(0, 1) == doctest::Approx(1.0));
  }
  SUBCASE("doubly symmetric source against direct summation oracle") {
    const JointPmf j = dsbs(0.1);
    // independent oracle: direct summation over the four joint entries
    Real hx = 0, hy = 0, hxy = 0;
    for (Index x = 0; x < 2; ++x) {
      Real px = 0;
      for (Index y = 0; y < 2; ++y) px += j.at2(x, y);
      hx -= px * std::log2(px);
    }
    for (Index y = 0; y < 2; ++y) {
      Real py = 0;
      for (Index x = 0; x < 2; ++x) py += j.at2(x, y);
      hy -= py * std::log2(py);
    }
    for (Index x = 0; x < 2; ++x) {
      for (Index y = 0; y < 2; ++y) hxy -= j.at2(x, y) * std::log2(j.at2(x, y));
    }
    const Real mi_oracle = hx + hy - hxy;
    const InfoMeasures im = info_measures(j);
    CHECK(im.mutual(0, 1) == doctest::Approx(mi_oracle).epsilon(1e-12));
    CHECK(im.mutual(0, 1) == doctest::Approx(1.0 - binary_entropy_bits(0.1)).epsilon(1e-9));
  }
}

TEST_CASE("info measures chain rules on random joints") {
  RngStream rng(202, "chain-rules");
  const Alphabet a = Alphabet::indexed("a", 3);
  const Alphabet b = Alphabet::indexed("b", 4);
  for (int t = 0; t < 1000; ++t) {
    const JointPmf j = random_joint(a, b, rng);
    const InfoMeasures im = info_measures(j);
    CHECK(im.entropy(0) - im.conditional_entropy(0, 1) ==
          doctest::Approx(im.mutual(0, 1)).epsilon(1e-9));
    CHECK(im.mutual(0, 1) >= -1e-9);
    CHECK(im.joint_entropy() ==
          doctest::Approx(im.entropy(1) + im.conditional_entropy(0, 1)).epsilon(1e-9));
  }
}

TEST_CASE("compose and marginalize") {
  const JointPmf j = dsbs(0.1);
  SUBCASE("identity channel copies the variable") {
    const JointPmf ext = compose_and_marginalize(j, Channel::identity(Alphabet::binary()), 0);
    REQUIRE(ext.num_vars() == 3);
    for (Index x = 0; x < 2; ++x) {
      for (Index y = 0; y < 2; ++y) {
        CHECK(ext.at3(x, y, x) == doctest::Approx(j.at2(x, y)));
      }
    }
  }
  SUBCASE("constant rows give an independent variable") {
    Mat rows(2, 2);
    rows << 0.3, 0.7, 0.3, 0.7;
    const Channel ch(Alphabet::binary(), Alphabet::binary(), rows);
    const JointPmf ext = compose_and_marginalize(j, ch, 1);
    const Pmf z = ext.marginal(2);
    CHECK(z(0) == doctest::Approx(0.3));
    const InfoMeasures im = info_measures(ext);
    CHECK(im.mutual(0, 2) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("bsc on uniform input stays uniform") {
    const JointPmf ext = compose_and_marginalize(j, Channel::binary_symmetric(0.1), 0);
    CHECK(ext.marginal(2)(0) == doctest::Approx(0.5));
  }
  SUBCASE("marginalizing the new variable recovers the input") {
    const JointPmf ext = compose_and_marginalize(j, Channel::binary_symmetric(0.3), 0);
    const Index vars[] = {0, 1};
    const JointPmf back = ext.marginalize_to(vars);
    for (Index c = 0; c < 4; ++c) CHECK(back.mass()(c) == doctest::Approx(j.mass()(c)));
  }
}

TEST_CASE("maximal coupling") {
  SUBCASE("equal pmfs never mismatch") {
    const Pmf p = binary_pmf(0.3);
    CHECK(maximal_coupling(p, p).mismatch_probability() == doctest::Approx(0.0));
  }
  SUBCASE("disjoint supports always mismatch") {
    CHECK(maximal_coupling(binary_pmf(1.0), binary_pmf(0.0)).mismatch_probability() ==
          doctest::Approx(1.0));
  }
  SUBCASE("half overlap") {
    const Coupling c = maximal_coupling(binary_pmf(0.5), binary_pmf(1.0));
    CHECK(c.mismatch_probability() == doctest::Approx(0.5));
  }
  SUBCASE("marginals reproduced and mismatch equals V/2 on random pairs") {
    RngStream rng(303, "coupling");
    const Alphabet a = Alphabet::indexed("a", 4);
    for (int t = 0; t < 300; ++t) {
      const Pmf p = random_sparse_pmf(a, rng, 0.3);
      const Pmf q = random_sparse_pmf(a, rng, 0.3);
      const Coupling c = maximal_coupling(p, q);
      CHECK(c.mismatch_probability() ==
            doctest::Approx(variational_distance(p, q) / 2).epsilon(1e-12));
      const Pmf row = c.joint.marginal(0);
      const Pmf col = c.joint.marginal(1);
      CHECK(variational_distance(row, p) < 1e-9);
      CHECK(variational_distance(col, q) < 1e-9);
    }
  }
  SUBCASE("coupling-search oracle cannot beat it") {
    RngStream rng(305, "coupling-oracle");
    CHECK(nusim::testing::coupling_oracle_best_mismatch(binary_pmf(0.5), binary_pmf(1.0), rng) ==
          doctest::Approx(0.5).epsilon(1e-12));
    const Alphabet a = Alphabet::indexed("a", 4);
    for (int t = 0; t < 50; ++t) {
      const Pmf p = random_pmf(a, rng);
      const Pmf q = random_pmf(a, rng);
      const Real constructed = maximal_coupling(p, q).mismatch_probability();
      const Real oracle = nusim::testing::coupling_oracle_best_mismatch(p, q, rng);
      CHECK(oracle >= constructed - 1e-12);
      // the greedy phase reaches the optimum, so they agree
      CHECK(oracle == doctest::Approx(constructed).epsilon(1e-9));
    }
  }
}

TEST_CASE("function transfer under perturbation") {
  // For any joint Q_AB, function phi with P[A != phi(B)] <= eps, and any
  // perturbation within variational distance eps, the perturbed error is at
  // most 2*eps.
  RngStream rng(404, "transfer");
  const Index na = 4, nb = 5;
  const Alphabet a = Alphabet::indexed("a", na);
  const Alphabet b = Alphabet::indexed("b", nb);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    JointPmf j = random_joint(a, b, rng);
    // random function phi: B -> A
    std::vector<Index> phi(static_cast<std::size_t>(nb), 0);
    for (auto& v : phi) v = Index(rng.next_below(std::uint64_t(na)));
    Real err = 0;
    for (Index x = 0; x < na; ++x) {
      for (Index y = 0; y < nb; ++y) {
        if (phi[std::size_t(y)] != x) err += j.at2(x, y);
      }
    }
    // perturb: move mass `delta` between two random cells
    Vec mass = j.mass();
    const Index from = Index(rng.next_below(std::uint64_t(mass.size())));
    const Index to = Index(rng.next_below(std::uint64_t(mass.size())));
    const Real delta = std::min(mass(from), rng.next_double() * 0.2);
    mass(from) -= delta;
    mass(to) += delta;
    const JointPmf jt({a, b}, std::move(mass));
    const Real v = (jt.mass() - j.mass()).abs().sum();
    const Real eps = std::max(err, v);
    if (eps <= 0) continue;
    Real err_t = 0;
    for (Index x = 0; x < na; ++x) {
      for (Index y = 0; y < nb; ++y) {
        if (phi[std::size_t(y)] != x) err_t += jt.at2(x, y);
      }
    }
    CHECK(err_t <= 2 * eps + 1e-12);
    ++checked;
  }
  CHECK(checked >= 990);
}

TEST_CASE("pmf validation") {
  Vec bad(2);
  bad << 0.6, 0.6;
  CHECK_THROWS_AS(Pmf(Alphabet::binary(), bad), ConfigError);
  Vec drift(2);
  drift << 0.5 + 4e-10, 0.5 + 4e-10;
  const Pmf p(Alphabet::binary(), drift);  // renormalized
  CHECK(p.mass().sum() == doctest::Approx(1.0).epsilon(1e-15));
}
