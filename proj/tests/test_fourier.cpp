#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fdisc/fourier.hpp"
#include "fdisc/rng.hpp"
#include "oracles.hpp"

using namespace fdisc;
constexpr double kPi = std::numbers::pi;

namespace {

oracle::Dense dense_rows(const IncidenceMatrix& a) {
  oracle::Dense rows(a.rows(), std::vector<int>(a.cols()));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) rows[i][j] = a.get(i, j);
  }
  return rows;
}

Eigen::VectorXd random_theta(RngStream& rng, int m, double half) {
  Eigen::VectorXd t(m);
  for (int i = 0; i < m; ++i) t(i) = rng.uniform(-half, half);
  return t;
}

}  // namespace

TEST_CASE("dhat examples") {
  CHECK(dhat(IncidenceMatrix::zeros(3, 5), Eigen::Vector3d(0.1, 0.2, -0.4)) == 1.0);
  CHECK(dhat(IncidenceMatrix::from_rows({{1}}), Eigen::VectorXd::Constant(1, 0.125)) ==
        doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK(dhat(IncidenceMatrix::from_rows({{1, 0}, {0, 1}}), Eigen::Vector2d(0.25, 1.0 / 6.0)) == 0.0);
  CHECK(std::abs(dhat_bruteforce(IncidenceMatrix::from_rows({{1, 1}}), Eigen::VectorXd::Constant(1, 0.25))) < 1e-15);
  CHECK(dhat_bruteforce(IncidenceMatrix::zeros(2, 3), Eigen::Vector2d(0.3, 0.1)) == doctest::Approx(1.0));
  CHECK_THROWS(dhat_bruteforce(IncidenceMatrix::zeros(1, 25), Eigen::VectorXd::Zero(1)));
}

TEST_CASE("product formula agrees with direct enumeration") {
  RngStream rng(5, 0);
  for (int k = 0; k < 150; ++k) {
    const int m = 1 + static_cast<int>(rng.below(4));
    const int n = 1 + static_cast<int>(rng.below(12));
    const auto a = sample_bernoulli(m, n, rng.uniform(0.2, 0.8), derive(5, k));
    const Eigen::VectorXd theta = random_theta(rng, m, 0.5);
    const auto direct = oracle::char_fn(dense_rows(a), std::vector<double>(theta.data(), theta.data() + m));
    CHECK(std::abs(direct.imag()) < 1e-12);
    CHECK(std::abs(dhat(a, theta) - direct.real()) < 1e-10);
    CHECK(std::abs(dhat_bruteforce(a, theta) - direct.real()) < 1e-10);
  }
}

TEST_CASE("dhat symmetries") {
  RngStream rng(6, 0);
  for (int k = 0; k < 100; ++k) {
    const int m = 1 + static_cast<int>(rng.below(5));
    const auto a = sample_bernoulli(m, 1 + static_cast<int>(rng.below(200)), 0.5, derive(6, k));
    const Eigen::VectorXd theta = random_theta(rng, m, 0.5);
    const double d = dhat(a, theta);
    CHECK(std::abs(d) <= 1.0);
    CHECK(dhat(a, -theta) == doctest::Approx(d).epsilon(1e-12).scale(1e-300));
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(m);
    shift(rng.below(m)) = 1.0;
    CHECK(dhat(a, theta + shift) == doctest::Approx(d).epsilon(1e-9).scale(1e-300));
    CHECK(std::abs(dhat(a, theta + 0.5 * shift)) == doctest::Approx(std::abs(d)).epsilon(1e-9).scale(1e-300));
    CHECK(std::abs(xhat(a, build_pmf(1), theta)) <= 1.0);
    CHECK(xhat(a, build_pmf(0), theta) == doctest::Approx(d).scale(1e-300));
  }
}

TEST_CASE("log domain survives long products") {
  const auto a = sample_bernoulli(3, 10000, 0.5, 1);
  const auto log = dhat_log(a, Eigen::Vector3d(0.2, 0.1, -0.17));
  CHECK(log.sign != 0);
  CHECK(log.log_abs < -745.0);
  CHECK(std::isfinite(log.log_abs));
}

TEST_CASE("partial products") {
  const auto a = sample_bernoulli(2, 40, 0.5, 3);
  const Eigen::Vector2d theta(0.07, -0.21);
  CHECK(dhat_partial(a, theta, 0) == 1.0);
  CHECK(dhat_partial(a, theta, 40) == doctest::Approx(std::abs(dhat(a, theta))));
  for (int k = 1; k <= 40; ++k) CHECK(dhat_partial(a, theta, k) <= dhat_partial(a, theta, k - 1));
}

TEST_CASE("xhat examples") {
  const auto single = IncidenceMatrix::from_rows({{1}});
  CHECK(xhat(single, build_pmf(1), Eigen::VectorXd::Constant(1, 0.125)) == doctest::Approx(0.60355).epsilon(1e-5));
  CHECK(xhat(single, build_pmf(3), Eigen::VectorXd::Zero(1)) == 1.0);
}

TEST_CASE("gaussian helpers") {
  const Eigen::MatrixXd i1 = Eigen::MatrixXd::Identity(1, 1);
  CHECK(gaussian_fhat(i1, Eigen::VectorXd::Zero(1)) == 1.0);
  CHECK(gaussian_fhat(i1, Eigen::VectorXd::Ones(1)) == doctest::Approx(2.68e-9).epsilon(1e-2));
  CHECK(gaussian_fhat(2.0 * Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(0.5, 0)) ==
        doctest::Approx(5.17e-5).epsilon(1e-3));
  CHECK(gaussian_density_zero(i1) == doctest::Approx(0.39894).epsilon(1e-5));
  CHECK(gaussian_density_zero(Eigen::MatrixXd::Identity(2, 2)) == doctest::Approx(0.15915).epsilon(1e-5));
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0, 1;
  CHECK_THROWS(validate_covariance(asym));
  CHECK_THROWS(gaussian_density_zero(Eigen::MatrixXd::Zero(2, 2)));
}

TEST_CASE("quadratic approximation") {
  const auto a = sample_bernoulli(6, 400, 0.5, 4);
  const auto at_zero = check_quadratic_approx(a, Eigen::VectorXd::Zero(6), 0.0);
  CHECK(at_zero.ok);
  CHECK(at_zero.residual == 0.0);
  const auto single = check_quadratic_approx(IncidenceMatrix::from_rows({{1}}), Eigen::VectorXd::Constant(1, 0.02), 1.0);
  const double expected = std::abs(std::log(std::cos(0.04 * kPi)) + 2 * kPi * kPi * 0.0004);
  CHECK(single.residual == doctest::Approx(expected).epsilon(1e-9));
  // One column costs (2 pi)^4 / 12 per |theta|^4 to leading order.
  CHECK(single.residual / std::pow(0.02, 4) == doctest::Approx(std::pow(2 * kPi, 4) / 12).epsilon(0.02));
  CHECK(single.residual <= 256 * std::pow(kPi, 4) / 3 * std::pow(0.02, 4));
  const auto outside = check_quadratic_approx(a, Eigen::VectorXd::Constant(6, 0.2), kQuadraticK);
  CHECK_FALSE(outside.preconditions_met);
  CHECK_FALSE(outside.violations.empty());
}

TEST_CASE("one-factor expectations agree with direct enumeration") {
  RngStream rng(8, 0);
  for (int k = 0; k < 200; ++k) {
    const int m = 1 + static_cast<int>(rng.below(10));
    const double p = rng.uniform();
    const double s = rng.uniform(-kPi, kPi);
    const Eigen::VectorXd theta = random_theta(rng, m, 0.25);
    const std::vector<double> t(theta.data(), theta.data() + m);
    CHECK(expected_abs_cos(theta, p, s) == doctest::Approx(oracle::abs_cos_expectation(t, p, s, false)).epsilon(1e-12));
    CHECK(expected_abs_cos_centered(theta, p, s) ==
          doctest::Approx(oracle::abs_cos_expectation(t, p, s, true)).epsilon(1e-12));
  }
  CHECK(one_factor_abs_cos_exact(Eigen::VectorXd::Zero(4), 0.3) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one_factor_abs_cos_exact(Eigen::VectorXd::Constant(1, 0.25), 0.5) == doctest::Approx(0.5));
  CHECK(large_entry_bound(Eigen::VectorXd::Constant(1, 0.25), 0.5) == doctest::Approx(0.9229).epsilon(1e-4));
  const Eigen::Vector2d eighth(0.125, 0.125);
  CHECK(one_factor_abs_cos_exact(eighth, 0.5) <= one_factor_bound(eighth, 0.5, kOneFactorC));
  CHECK_THROWS(one_factor_abs_cos_exact(Eigen::VectorXd::Constant(1, 0.3), 0.5));
  CHECK_THROWS(expected_abs_cos(Eigen::VectorXd::Zero(21), 0.5));
}

TEST_CASE("large-entry inequality on p <= 1/2") {
  RngStream rng(9, 0);
  for (int k = 0; k < 300; ++k) {
    const int m = 1 + static_cast<int>(rng.below(12));
    const double p = rng.uniform(0.0, 0.5);
    const Eigen::VectorXd theta = random_theta(rng, m, 0.25);
    CHECK(one_factor_abs_cos_exact(theta, p) <= large_entry_bound(theta, p) + 1e-12);
    CHECK(one_factor_abs_cos_exact(theta, p) <= one_factor_bound(theta, p, kOneFactorC) + 1e-12);
  }
}

TEST_CASE("spike dominance with an instance") {
  const auto a = sample_bernoulli(1, 50, 0.5, 2);
  const auto r = spike_dominance_x(a, build_pmf(1), Eigen::VectorXd::Constant(1, 0.01));
  CHECK(r.dominates);
  CHECK(r.periodic);
  CHECK(r.shifts == 2);
  CHECK(std::exp(r.log_rhs - r.log_lhs) == doctest::Approx(0.00395).epsilon(1e-2));
  const auto big = sample_bernoulli(6, 200, 0.5, 3);
  const auto z = spike_dominance_x(big, build_pmf(1), Eigen::VectorXd::Zero(6));
  CHECK(z.dominates);
  CHECK(z.shifts == 728);
}

TEST_CASE("far region") {
  const auto zero = far_region_integral(IncidenceMatrix::zeros(2, 4), 0.1, 1 << 17, 1);
  CHECK(zero.calibration_only);
  CHECK(std::abs(zero.integral.value - 1.0 + 4 * kPi * 0.01) <= 4 * zero.integral.std_error);
  const auto a = sample_bernoulli(4, 1000, 0.5, 6);
  const double delta = 1.0 / (16.0 * std::sqrt(2.0));
  const auto r = far_region_integral(a, delta, 1 << 17, 7);
  CHECK(r.side_conditions);
  CHECK_FALSE(r.calibration_only);
  CHECK(r.bound == doctest::Approx(std::exp(-0.5 * delta * delta * 1000 / 24)));
  CHECK(r.integral.value + 3 * r.integral.std_error <= r.bound);
}
