#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qndlg/lgi.hpp"

using namespace qndlg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::MatrixXd random_psd(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = normal(rng);
  return b * b.transpose() + 1e-6 * Eigen::MatrixXd::Identity(n, n);
}

MeasurementRecord record_from(const Eigen::MatrixXd& gamma) {
  MeasurementRecord rec;
  const int n = static_cast<int>(gamma.rows());
  for (int i = 0; i < n; ++i) rec.labels.push_back(i + 1);
  rec.mu = Eigen::VectorXd::Zero(n);
  rec.gamma_y = gamma;
  return rec;
}

// Exhaustive pair-sum minimum over all 2^n sign assignments.
double enumerated_min_pair_sum(int n) {
  double best = 1e300;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    int total = 0;
    for (int i = 0; i < n; ++i) total += (m >> i & 1u) ? 1 : -1;
    best = std::min(best, (double(total) * total - n) / 2.0);
  }
  return best;
}

}  // namespace

TEST_CASE("sign correlator of a bivariate Gaussian") {
  CHECK(corr_sign(1.0, 0.0, 1.0) == 0.0);
  CHECK_THAT(corr_sign(1.0, 1.0, 1.0), WithinAbs(1.0, 1e-15));
  CHECK_THAT(corr_sign(1.0, -1.0, 1.0), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(corr_sign(1.0, 0.5, 1.0), WithinRel(1.0 / 3.0, 1e-14));
  CHECK_THAT(corr_sign(4.0, 1.0, 1.0), WithinRel(1.0 / 3.0, 1e-14));

  SECTION("odd in the covariance") {
    for (double b : {0.1, 0.37, 0.99}) {
      CHECK_THAT(corr_sign(1.0, b, 1.0) + corr_sign(1.0, -b, 1.0),
                 WithinAbs(0.0, 1e-15));
    }
  }

  SECTION("bounded and monotone in the correlation coefficient") {
    double prev = -1.0;
    for (int k = 0; k <= 40; ++k) {
      const double rho = -1.0 + 2.0 * k / 40.0;
      const double v = corr_sign(2.0, 2.0 * rho, 2.0);
      CHECK(std::abs(v) <= 1.0);
      CHECK(v >= prev);
      prev = v;
    }
  }

  SECTION("invariant under rescaling the record") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-0.999, 0.999);
    for (int k = 0; k < 20; ++k) {
      const double rho = uni(rng);
      const double base = corr_sign(1.0, rho, 1.0);
      for (double s : {1e-9, 1e3, 1e9})
        CHECK_THAT(corr_sign(s, s * rho, s), WithinAbs(base, 1e-12));
    }
  }

  SECTION("matches the arctangent form away from zero covariance") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> uni(-0.999, 0.999);
    for (int k = 0; k < 50; ++k) {
      const double rho = uni(rng);
      if (rho == 0.0) continue;
      const double a = 3.0, c = 0.7;
      const double b = rho * std::sqrt(a * c);
      const double alpha = std::atan(std::sqrt(a * c / (b * b) - 1.0));
      const double expected =
          (b > 0 ? 1.0 : -1.0) * (1.0 - 2.0 * alpha / std::numbers::pi);
      CHECK_THAT(corr_sign(a, b, c), WithinAbs(expected, 1e-12));
    }
  }

  CHECK_THROWS_AS(corr_sign(0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(corr_sign(1.0, 0.0, -1.0), DomainError);
  CHECK_THROWS_AS(corr_sign(1.0, 1.2, 1.0), DomainError);
  // tiny rounding overshoot of the Cauchy-Schwarz bound is clamped
  CHECK_THAT(corr_sign(1.0, 1.0 + 1e-13, 1.0), WithinAbs(1.0, 1e-15));
}

TEST_CASE("pairwise correlators from a readout record") {
  Eigen::MatrixXd gamma(2, 2);
  gamma << 4.375e8, 3.125e8, 3.125e8, 4.375e8;
  const Eigen::MatrixXd c = pairwise_correlators(record_from(gamma));
  CHECK(c(0, 0) == 1.0);
  CHECK(c(1, 1) == 1.0);
  // (2/pi) asin(5/7)
  CHECK_THAT(c(0, 1), WithinAbs(0.506496571142300, 1e-13));
  CHECK(c(0, 1) == c(1, 0));

  SECTION("equivariant under relabeling") {
    std::mt19937_64 rng(9);
    const Eigen::MatrixXd g3 = random_psd(rng, 3);
    const Eigen::MatrixXd c3 = pairwise_correlators(record_from(g3));
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(3);
    perm.indices() << 2, 0, 1;
    const Eigen::MatrixXd gp = perm * g3 * perm.transpose();
    const Eigen::MatrixXd cp = pairwise_correlators(record_from(gp));
    CHECK(cp.isApprox(perm * c3 * perm.transpose(), 1e-12));
  }

  MeasurementRecord one;
  one.labels = {1};
  one.mu = Eigen::VectorXd::Zero(1);
  one.gamma_y = Eigen::MatrixXd::Identity(1, 1);
  CHECK_THROWS_AS(pairwise_correlators(one), ParameterError);
}

TEST_CASE("pair-sum statistic K_n") {
  SECTION("uncorrelated records sit at the bound's additive offset") {
    for (int n : {3, 4, 5, 9}) {
      const LgiResult r = k_n(Eigen::MatrixXd::Identity(n, n));
      CHECK_THAT(r.k_value, WithinAbs(std::floor(n / 2.0), 1e-15));
      CHECK_THAT(r.k_reduced, WithinAbs(1.0, 1e-15));
    }
  }

  SECTION("fully anticorrelated n=3") {
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(3, 3, -1.0);
    c.diagonal().setOnes();
    const LgiResult r = k_n(c);
    CHECK_THAT(r.k_value, WithinAbs(-2.0, 1e-15));
    CHECK_THAT(r.k_reduced, WithinAbs(-2.0, 1e-15));
  }

  SECTION("half anticorrelated n=3") {
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(3, 3, -0.5);
    c.diagonal().setOnes();
    CHECK_THAT(k_n(c).k_value, WithinAbs(-0.5, 1e-15));
  }

  CHECK_THROWS_AS(k_n(Eigen::MatrixXd::Identity(2, 2)), ParameterError);
  CHECK_THROWS_AS(k_n(Eigen::MatrixXd::Identity(3, 4)), ParameterError);
}

TEST_CASE("three-point statistic on a chosen triple") {
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(3, 3);
  c(0, 1) = c(1, 0) = -1.0;
  c(1, 2) = c(2, 1) = -1.0;
  c(0, 2) = c(2, 0) = 1.0;
  CHECK_THAT(k3_triple(c, 1, 2, 3), WithinAbs(0.0, 1e-15));

  CHECK_THAT(k3_triple(Eigen::MatrixXd::Identity(3, 3), 1, 2, 3),
             WithinAbs(1.0, 1e-15));

  c(0, 2) = c(2, 0) = 0.0;
  CHECK_THAT(k3_triple(c, 1, 2, 3), WithinAbs(-1.0, 1e-15));

  const Eigen::MatrixXd c5 = Eigen::MatrixXd::Identity(5, 5);
  CHECK_THAT(k3_triple(c5, 2, 3, 5), WithinAbs(1.0, 1e-15));
  CHECK_THROWS_AS(k3_triple(c5, 1, 1, 2), ParameterError);
  CHECK_THROWS_AS(k3_triple(c5, 0, 1, 2), ParameterError);
  CHECK_THROWS_AS(k3_triple(c5, 3, 2, 1), ParameterError);
  CHECK_THROWS_AS(k3_triple(c5, 1, 2, 6), ParameterError);
}

TEST_CASE("every definite-outcome assignment satisfies the bound") {
  // For q in {-1,1}^n the pair sum is ((sum q)^2 - n)/2, so the worst case
  // over assignments plus floor(n/2) is exactly zero.
  for (int n = 3; n <= 9; ++n) {
    CHECK_THAT(enumerated_min_pair_sum(n) + std::floor(n / 2.0),
               WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("convex mixtures of assignments satisfy the bound") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 5);
    // random distribution over the 2^n assignments
    std::vector<double> w(static_cast<std::size_t>(1) << n);
    double tot = 0;
    for (auto& x : w) {
      x = uni(rng);
      tot += x;
    }
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t m = 0; m < w.size(); ++m) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const int qi = (m >> i & 1u) ? 1 : -1;
          const int qj = (m >> j & 1u) ? 1 : -1;
          c(i, j) += w[m] / tot * qi * qj;
        }
    }
    CHECK(k_n(c).k_value >= -1e-12);
  }
}

TEST_CASE("correlators of one joint Gaussian record never violate the bound") {
  // Dichotomized variables read off a single joint Gaussian admit a joint
  // distribution by construction, so K_n >= 0 whatever the covariance.
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 5);
    const Eigen::MatrixXd gamma = random_psd(rng, n);
    const Eigen::MatrixXd c = pairwise_correlators(record_from(gamma));
    CHECK(k_n(c).k_value >= -1e-12);
  }
}
