#include <doctest.h>

#include <cmath>

#include "gr2/entanglement.hpp"
#include "gr2/verify.hpp"

using namespace gr2;

namespace {

CovarianceMatrix tmss53() { return tmss_cm(0.5 * std::acosh(5.0 / 3.0)); }

CovarianceMatrix product_state() {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(0, 0) = m(1, 1) = 2.0;
  m(2, 2) = m(3, 3) = 3.0;
  return CovarianceMatrix(m);
}

CovarianceMatrix symmetric_family(double a, double c) {
  TwoModeStandardForm sf;
  sf.a = sf.b = a;
  sf.c_plus = c;
  sf.c_minus = -c;
  return standard_form_cm(sf);
}

Eigen::MatrixXd local_conjugation(const CovarianceMatrix& cm, Rng& rng) {
  const int n = cm.modes();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    s.block<2, 2>(2 * k, 2 * k) = random_symplectic(1, 0.8, rng);
  }
  return s * cm.matrix() * s.transpose();
}

}  // namespace

TEST_CASE("ppt eigenvalue") {
  CHECK(ppt_min_symplectic_eigenvalue(product_state()) >= 1.0);

  for (double a : {1.2, 5.0 / 3.0, 3.0}) {
    const double r = 0.5 * std::acosh(a);
    CHECK(ppt_min_symplectic_eigenvalue(tmss_cm(r)) ==
          doctest::Approx(a - std::sqrt(a * a - 1.0)).epsilon(1e-10));
  }

  // Separability threshold of the symmetric family located by bisection
  // on the PPT eigenvalue matches where E2 vanishes.
  const double a = 1.8;
  double lo = 0.0;
  double hi = std::sqrt(a * a - 1.0) - 1e-9;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ppt_min_symplectic_eigenvalue(symmetric_family(a, mid)) >= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  CHECK(e2_two_mode(symmetric_family(a, lo)).value == 0.0);
  CHECK(e2_two_mode(symmetric_family(a, hi + 1e-6)).value > 0.0);
}

TEST_CASE("theta family") {
  // Two-mode squeezed states: the theta = pi member equals a^2.
  for (double a : {1.3, 5.0 / 3.0, 2.4}) {
    TwoModeStandardForm sf;
    sf.a = sf.b = a;
    sf.c_plus = std::sqrt(a * a - 1.0);
    sf.c_minus = -sf.c_plus;
    CHECK(m_theta(sf, M_PI) == doctest::Approx(a * a).epsilon(1e-7));
    CHECK(m_theta(sf, M_PI + 2.0 * M_PI) ==
          doctest::Approx(m_theta(sf, M_PI)).epsilon(1e-14));
  }

  // m stays at or above one over the grid for entangled inputs.
  Rng rng(41);
  int entangled_seen = 0;
  while (entangled_seen < 20) {
    const CovarianceMatrix cm = random_mixed_cm(2, 1.5, 5.0, rng);
    if (ppt_min_symplectic_eigenvalue(cm) >= 1.0 - 1e-6) continue;
    ++entangled_seen;
    const TwoModeStandardForm sf = to_standard_form(cm);
    for (int i = 0; i < 64; ++i) {
      const double m = m_theta(sf, 2.0 * M_PI * i / 64.0);
      CHECK(m >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("two-mode entanglement") {
  CHECK(e2_two_mode(tmss53()).value ==
        doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-10));
  CHECK(e2_two_mode(product_state()).value == 0.0);

  // Separability gate agrees with the PPT criterion exactly.
  Rng rng(42);
  for (int i = 0; i < 10000; ++i) {
    const CovarianceMatrix cm = random_mixed_cm(2, 1.5, 5.0, rng);
    const bool separable =
        ppt_min_symplectic_eigenvalue(cm) >= 1.0 - 1e-9;
    CHECK((e2_two_mode(cm).value == 0.0) == separable);
  }

  // Against the convex-roof search on a small batch.
  for (int i = 0; i < 8; ++i) {
    const CovarianceMatrix cm = random_mixed_cm(2, 1.5, 5.0, rng);
    Rng orng(9000 + static_cast<std::uint64_t>(i));
    const MeasureReport oracle = convex_roof_oracle(cm, 32, orng);
    CHECK(std::abs(e2_two_mode(cm).value - oracle.value) <= 1e-6);
  }
}

TEST_CASE("convex roof search") {
  // Pure input: the state itself saturates the roof.
  Rng rng(43);
  const CovarianceMatrix pure = random_pure_cm(2, 1.0, rng);
  Rng orng(1);
  CHECK(convex_roof_oracle(pure, 8, orng).value ==
        doctest::Approx(renyi2_entropy(reduce(pure, {0}))).epsilon(1e-7));

  Rng orng2(2);
  CHECK(convex_roof_oracle(product_state(), 8, orng2).value ==
        doctest::Approx(0.0).epsilon(1e-8));

  // Symmetric squeezed thermal states: compare with the closed path.
  Rng orng3(3);
  const CovarianceMatrix sq(1.3 * tmss_cm(0.5).matrix());
  CHECK(convex_roof_oracle(sq, 16, orng3).value ==
        doctest::Approx(e2_two_mode(sq).value).epsilon(1e-7));
}

TEST_CASE("pure bipartition entanglement") {
  CHECK(e2_pure_bipartition(tmss53(), ModePartition{{{0}, {1}}}) ==
        doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-12));
  CHECK(e2_pure_bipartition(
            CovarianceMatrix(Eigen::MatrixXd::Identity(4, 4)),
            ModePartition{{{0}, {1}}}) == doctest::Approx(0.0));

  Rng rng(44);
  for (int i = 0; i < 50; ++i) {
    const CovarianceMatrix cm = random_pure_cm(3, 1.2, rng);
    const double left =
        e2_pure_bipartition(cm, ModePartition{{{0}, {1, 2}}});
    const double right =
        e2_pure_bipartition(cm, ModePartition{{{1, 2}, {0}}});
    CHECK(std::abs(left - right) <= 1e-10);
  }

  CHECK_THROWS_AS(
      e2_pure_bipartition(product_state(), ModePartition{{{0}, {1}}}),
      std::invalid_argument);
}

TEST_CASE("pure three-mode states") {
  CHECK((three_mode_pure_cm({1.0, 1.0, 1.0}).matrix() -
         Eigen::MatrixXd::Identity(6, 6))
            .norm() < 1e-12);

  const CovarianceMatrix ghz = three_mode_pure_cm({2.0, 2.0, 2.0});
  CHECK(std::abs(ghz.matrix().determinant() - 1.0) < 1e-8);
  for (int k = 0; k < 3; ++k) {
    CHECK(reduce(ghz, {k}).matrix().determinant() ==
          doctest::Approx(4.0).epsilon(1e-10));
  }

  const CovarianceMatrix edge = three_mode_pure_cm({3.0, 2.0, 2.0});
  CHECK(std::abs(edge.matrix().determinant() - 1.0) < 1e-8);
  CHECK(validate(edge).physical);

  CHECK_THROWS_AS(three_mode_pure_cm({5.0, 1.5, 1.5}),
                  std::invalid_argument);
}

TEST_CASE("reduced-pair entanglement branches") {
  // Separable reduction.
  CHECK(g_reduced({1.2, 1.2, 2.0}, 0, 1) == doctest::Approx(1.0));

  // Fully symmetric point evaluates to beta / 32.
  const double beta = 71.0 - std::sqrt(945.0);
  CHECK(g_reduced({2.0, 2.0, 2.0}, 0, 1) ==
        doctest::Approx(beta / 32.0).epsilon(1e-12));

  // Low-purity branch: the complementary invariant sits below alpha_k.
  const ThreeModeLocalInvariants skew{2.8, 1.2, 2.61};
  const InseparabilityClass cls = classify_inseparability(skew);
  CHECK(cls.pair_branch[2] == 3);  // pair (0, 1), complementary mode 2
  const double si = 2.8 * 2.8;
  const double sj = 1.2 * 1.2;
  const double expected =
      std::pow((si - sj) / (2.61 * 2.61 - 1.0), 2.0);
  CHECK(g_reduced(skew, 0, 1) == doctest::Approx(expected).epsilon(1e-12));
  CHECK_FALSE(cls.fully_inseparable);

  // Matches the generic two-mode minimizer on the reduced state.
  Rng rng(45);
  for (int i = 0; i < 500; ++i) {
    const ThreeModeLocalInvariants inv = random_inseparable_triple(rng);
    const CovarianceMatrix red = reduce(three_mode_pure_cm(inv), {0, 1});
    CHECK(std::abs(std::exp(2.0 * e2_two_mode(red).value) -
                   g_reduced(inv, 0, 1)) <= 1e-6);
  }
}

TEST_CASE("residual tripartite entanglement") {
  CHECK(residual_e2({1.0, 1.0, 1.0}, 0) == doctest::Approx(0.0));

  const double beta = 71.0 - std::sqrt(945.0);
  const double expected = std::log(8.0 * 8.0 / beta);
  for (int focus = 0; focus < 3; ++focus) {
    CHECK(residual_e2({2.0, 2.0, 2.0}, focus) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(residual_e2_invariant({2.0, 2.0, 2.0}) ==
        doctest::Approx(expected).epsilon(1e-10));
  CHECK(expected == doctest::Approx(0.46355).epsilon(1e-4));

  SUBCASE("permutation invariance inside the window") {
    Rng rng(46);
    for (int i = 0; i < 1000; ++i) {
      const ThreeModeLocalInvariants inv = random_inseparable_triple(rng);
      const double closed = residual_e2_invariant(inv);
      double spread_lo = 1e300;
      double spread_hi = -1e300;
      for (int focus = 0; focus < 3; ++focus) {
        const double r = residual_e2(inv, focus);
        spread_lo = std::min(spread_lo, r);
        spread_hi = std::max(spread_hi, r);
        CHECK(std::abs(r - closed) <= 1e-9);
      }
      CHECK(spread_hi - spread_lo <= 1e-9);
    }
  }

  SUBCASE("focus dependence with a separable reduction") {
    const ThreeModeLocalInvariants skew{1.9, 1.5, 1.5};
    CHECK_FALSE(classify_inseparability(skew).fully_inseparable);
    CHECK_THROWS_AS(residual_e2_invariant(skew), std::domain_error);
    const double r0 = residual_e2(skew, 0);
    const double r1 = residual_e2(skew, 1);
    CHECK(std::abs(r0 - r1) > 1e-3);
  }

  SUBCASE("continuity at the window boundary") {
    // g -> 1 as a_k approaches sqrt(a_i^2 + a_j^2 - 1) from below.
    const double ai = 1.8;
    const double aj = 1.5;
    const double boundary = std::sqrt(ai * ai + aj * aj - 1.0);
    const double inside = g_reduced({ai, aj, boundary - 1e-7}, 0, 1);
    CHECK(inside == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("monogamy") {
  // Third party uncorrelated: the gap closes exactly.
  Eigen::MatrixXd extended = Eigen::MatrixXd::Identity(6, 6);
  extended.topLeftCorner(4, 4) = tmss53().matrix();
  CHECK(monogamy_gap(CovarianceMatrix(extended), 0) ==
        doctest::Approx(0.0).epsilon(1e-9));

  Rng rng(47);
  for (int i = 0; i < 2000; ++i) {
    CHECK(monogamy_gap(random_pure_cm(3, 1.5, rng), 0) >= -1e-9);
  }
  for (int i = 0; i < 100; ++i) {
    CHECK(monogamy_gap(random_pure_cm(4, 1.5, rng), 0) >= -1e-9);
  }

  // Fully inseparable pure states: the gap is the residual.
  Rng trng(48);
  for (int i = 0; i < 100; ++i) {
    const ThreeModeLocalInvariants inv = random_inseparable_triple(trng);
    CHECK(std::abs(monogamy_gap(three_mode_pure_cm(inv), 0) -
                   residual_e2(inv, 0)) <= 1e-8);
  }

  CHECK_THROWS_AS(monogamy_gap(product_state(), 0), std::invalid_argument);
}

TEST_CASE("classical correlations bound entanglement") {
  Rng rng(49);
  for (int i = 0; i < 2000; ++i) {
    CHECK(je_gap(random_mixed_cm(2, 1.5, 5.0, rng)) >= -1e-9);
  }
  for (int i = 0; i < 50; ++i) {
    CHECK(std::abs(je_gap(random_pure_cm(2, 1.5, rng))) <= 1e-8);
  }
  CHECK(je_gap(product_state()) >= 0.0);
}

TEST_CASE("entropy decomposition on pure three-mode states") {
  // Product pure states: every term vanishes.
  CHECK(kw_gap(CovarianceMatrix(Eigen::MatrixXd::Identity(6, 6)), 0, 1,
               2) == doctest::Approx(0.0));

  Rng rng(50);
  for (int i = 0; i < 300; ++i) {
    const CovarianceMatrix cm = random_pure_cm(3, 1.5, rng);
    CHECK(std::abs(kw_gap(cm, 0, 1, 2)) <= 1e-6);
  }

  // All six orderings close on the fully symmetric state.
  const CovarianceMatrix ghz = three_mode_pure_cm({2.0, 2.0, 2.0});
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& p : perms) {
    CHECK(std::abs(kw_gap(ghz, p[0], p[1], p[2])) <= 1e-9);
  }
}

TEST_CASE("scalar certificate") {
  // Two-mode squeezed tuples sit exactly on the equality family.
  for (double r : {0.1, 0.45, 1.0}) {
    const double a = std::cosh(2.0 * r);
    const double c = std::sinh(2.0 * r);
    CHECK(std::abs(k_function(a, a, c, -c)) <= 1e-9);
  }
  CHECK(k_function(1.0, 1.0, 0.0, 0.0) == doctest::Approx(0.0));

  Rng rng(51);
  int excluded = 0;
  for (int i = 0; i < 20000; ++i) {
    const TwoModeStandardForm sf = random_standard_form(rng);
    try {
      CHECK(k_function(sf.a, sf.b, sf.c_plus, sf.c_minus) >= -1e-9);
    } catch (const std::domain_error&) {
      ++excluded;
    }
  }
  CHECK(excluded < 200);

  // The variant cross term breaks the squeezed-tuple equality, which is
  // how the two readings are told apart.
  const double a = std::cosh(0.8);
  const double c = std::sinh(0.8);
  CHECK(std::abs(k_function_variant(a, a, c, -c)) > 1e-4);

  CHECK_THROWS_AS(k_function(2.6, 2.2, 2.2685, -2.2652), std::domain_error);
}

TEST_CASE("residual discord equals residual entanglement") {
  CHECK(residual_d2({1.0, 1.0, 1.0}, 0) == doctest::Approx(0.0));

  const double beta = 71.0 - std::sqrt(945.0);
  CHECK(residual_d2({2.0, 2.0, 2.0}, 0) ==
        doctest::Approx(std::log(64.0 / beta)).epsilon(1e-9));

  Rng rng(52);
  for (int i = 0; i < 300; ++i) {
    const ThreeModeLocalInvariants inv = random_inseparable_triple(rng);
    CHECK(std::abs(residual_d2(inv, 0) - residual_e2(inv, 0)) <= 1e-6);
  }
}

TEST_CASE("entanglement invariances and monotonicity") {
  Rng rng(53);
  for (int i = 0; i < 100; ++i) {
    const CovarianceMatrix cm = random_mixed_cm(2, 1.2, 4.0, rng);
    const CovarianceMatrix conj(local_conjugation(cm, rng));
    CHECK(std::abs(e2_two_mode(conj).value - e2_two_mode(cm).value) <=
          1e-7);
  }

  // Heating a two-mode squeezed state never raises the roof.
  for (double r : {0.5, 1.0}) {
    double previous = e2_two_mode(tmss_cm(r)).value;
    for (double nu : {1.05, 1.15, 1.3, 1.5}) {
      const CovarianceMatrix heated(nu * tmss_cm(r).matrix());
      const double value = e2_two_mode(heated).value;
      CHECK(value <= previous + 1e-9);
      previous = value;
    }
  }
}
