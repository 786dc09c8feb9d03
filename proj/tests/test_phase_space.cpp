#include <doctest.h>

#include <cmath>

#include "gr2/phase_space.hpp"

using namespace gr2;

namespace {

CovarianceMatrix thermal_cm(double nu) {
  return CovarianceMatrix(nu * Eigen::MatrixXd::Identity(2, 2));
}

// Plain two-dimensional quadrature of f over [-span, span]^2; oracle for
// the single-mode Wigner integrals.
double quadrature_2d(const std::function<double(double, double)>& f,
                     double span, int points) {
  const double h = 2.0 * span / points;
  double sum = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = -span + (i + 0.5) * h;
    for (int j = 0; j < points; ++j) {
      const double y = -span + (j + 0.5) * h;
      sum += f(x, y);
    }
  }
  return sum * h * h;
}

double wigner_1mode(const CovarianceMatrix& cm, double q, double p) {
  Eigen::VectorXd xi(2);
  xi << q, p;
  return wigner_eval(cm, xi);
}

}  // namespace

TEST_CASE("wigner evaluation") {
  const CovarianceMatrix vac = thermal_cm(1.0);
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
  CHECK(wigner_eval(vac, origin) == doctest::Approx(1.0 / M_PI));
  CHECK(wigner_eval(thermal_cm(2.0), origin) ==
        doctest::Approx(1.0 / (2.0 * M_PI)));

  // Normalization by quadrature.
  const CovarianceMatrix state = thermal_cm(1.7);
  const double total = quadrature_2d(
      [&](double q, double p) { return wigner_1mode(state, q, p); }, 12.0,
      600);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));

  Eigen::VectorXd wrong(4);
  wrong.setZero();
  CHECK_THROWS_AS(wigner_eval(vac, wrong), std::invalid_argument);
}

TEST_CASE("sampling entropy") {
  CHECK(sampling_entropy(thermal_cm(1.0)) ==
        doctest::Approx(1.0 + std::log(M_PI)).epsilon(1e-12));
  CHECK(sampling_entropy(thermal_cm(2.0)) ==
        doctest::Approx(std::log(2.0) + 1.0 + std::log(M_PI))
            .epsilon(1e-12));

  // Additive over direct sums.
  Rng rng(21);
  const CovarianceMatrix one = random_mixed_cm(1, 1.0, 3.0, rng);
  const CovarianceMatrix two = random_mixed_cm(1, 1.0, 3.0, rng);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(4, 4);
  sum.topLeftCorner(2, 2) = one.matrix();
  sum.bottomRightCorner(2, 2) = two.matrix();
  CHECK(sampling_entropy(CovarianceMatrix(sum)) ==
        doctest::Approx(sampling_entropy(one) + sampling_entropy(two))
            .epsilon(1e-10));
}

TEST_CASE("relative sampling entropy") {
  const CovarianceMatrix vac = thermal_cm(1.0);
  const CovarianceMatrix hot = thermal_cm(2.0);
  CHECK(relative_sampling_entropy(vac, vac) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(relative_sampling_entropy(vac, hot) ==
        doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-12));
  CHECK(relative_sampling_entropy(hot, vac) ==
        doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));

  // Quadrature oracle for the asymmetric pair.
  const double quad = quadrature_2d(
      [&](double q, double p) {
        const double w1 = wigner_1mode(vac, q, p);
        const double w2 = wigner_1mode(hot, q, p);
        return w1 * std::log(w1 / w2);
      },
      10.0, 500);
  CHECK(quad == doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-6));

  SUBCASE("nonnegativity over random pairs") {
    Rng rng(22);
    for (int i = 0; i < 10000; ++i) {
      const int n = 1 + static_cast<int>(rng.uniform() * 3.0);
      const CovarianceMatrix g1 = random_mixed_cm(n, 1.0, 4.0, rng);
      const CovarianceMatrix g2 = random_mixed_cm(n, 1.0, 4.0, rng);
      CHECK(relative_sampling_entropy(g1, g2) >= -1e-12);
    }
  }

  CHECK_THROWS_AS(
      relative_sampling_entropy(vac, CovarianceMatrix(
                                         Eigen::MatrixXd::Identity(4, 4))),
      std::invalid_argument);
}

TEST_CASE("mutual information via relative entropy") {
  Rng rng(23);
  ModePartition split;
  split.groups = {{0}, {1}};

  Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(4, 4);
  prod(0, 0) = prod(1, 1) = 2.0;
  CHECK(mutual_information_via_relent(CovarianceMatrix(prod), split) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const CovarianceMatrix tmss = tmss_cm(0.5 * std::acosh(5.0 / 3.0));
  CHECK(mutual_information_via_relent(tmss, split) ==
        doctest::Approx(2.0 * std::log(5.0 / 3.0)).epsilon(1e-10));

  for (int i = 0; i < 10000; ++i) {
    const CovarianceMatrix cm = random_mixed_cm(2, 1.2, 4.0, rng);
    const double relent = mutual_information_via_relent(cm, split);
    CHECK(relent >= -1e-10);
    const double entropies = renyi2_entropy(reduce(cm, {0})) +
                             renyi2_entropy(reduce(cm, {1})) -
                             renyi2_entropy(cm);
    CHECK(std::abs(relent - entropies) <= 1e-10);
  }
}

TEST_CASE("phase space sampler moments") {
  Rng rng(24);
  const CovarianceMatrix cm = random_mixed_cm(1, 0.8, 3.0, rng);
  const long count = 200000;
  const std::vector<PhasePoint> points = sample_phase_space(cm, count, rng);

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d second = Eigen::Matrix2d::Zero();
  for (const auto& xi : points) {
    mean += xi;
    second += xi * xi.transpose();
  }
  mean /= static_cast<double>(count);
  second /= static_cast<double>(count);

  const double bound = 5.0 / std::sqrt(static_cast<double>(count));
  CHECK(std::abs(mean(0)) < bound * std::sqrt(cm.matrix()(0, 0)));
  CHECK(std::abs(mean(1)) < bound * std::sqrt(cm.matrix()(1, 1)));
  CHECK((second - 0.5 * cm.matrix()).cwiseAbs().maxCoeff() < 0.05);

  // Vacuum squared radius averages to one.
  Rng vrng(25);
  const CovarianceMatrix vac = thermal_cm(1.0);
  double radius = 0.0;
  for (const auto& xi : sample_phase_space(vac, 100000, vrng)) {
    radius += xi.squaredNorm();
  }
  CHECK(radius / 100000.0 == doctest::Approx(1.0).epsilon(0.02));

  CHECK_THROWS_AS(sample_phase_space(vac, 0, rng), std::invalid_argument);
}

TEST_CASE("monte carlo entropy estimates") {
  Rng rng(26);
  const CovarianceMatrix vac = thermal_cm(1.0);
  const EntropyEstimate vac_est = mc_entropy(vac, 1000000, rng);
  CHECK(std::abs(vac_est.mean - (1.0 + std::log(M_PI))) <=
        3.0 * vac_est.std_error);

  for (int i = 0; i < 20; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform() * 2.0);
    const CovarianceMatrix cm = random_mixed_cm(n, 1.2, 4.0, rng);
    const EntropyEstimate est = mc_entropy(cm, 100000, rng);
    CHECK(std::abs(est.mean - sampling_entropy(cm)) <= 4.0 * est.std_error);
  }

  CHECK_THROWS_AS(mc_entropy(vac, 100, rng), std::invalid_argument);
}

TEST_CASE("monte carlo relative entropy estimates") {
  Rng rng(27);
  const CovarianceMatrix vac = thermal_cm(1.0);
  const CovarianceMatrix hot = thermal_cm(2.0);

  const EntropyEstimate same = mc_relative_entropy(vac, vac, 100000, rng);
  CHECK(std::abs(same.mean) <= 3.0 * std::max(same.std_error, 1e-14));

  const EntropyEstimate pair = mc_relative_entropy(vac, hot, 1000000, rng);
  CHECK(std::abs(pair.mean - (std::log(2.0) - 0.5)) <=
        3.0 * pair.std_error);

  for (int i = 0; i < 15; ++i) {
    const CovarianceMatrix g1 = random_mixed_cm(1, 1.0, 3.0, rng);
    const CovarianceMatrix g2 = random_mixed_cm(1, 1.0, 3.0, rng);
    const EntropyEstimate est = mc_relative_entropy(g1, g2, 100000, rng);
    CHECK(std::abs(est.mean - relative_sampling_entropy(g1, g2)) <=
          4.0 * est.std_error);
  }
}
