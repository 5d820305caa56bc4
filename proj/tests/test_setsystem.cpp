#include <doctest.h>

#include <cmath>

#include "fdisc/errors.hpp"
#include "fdisc/setsystem.hpp"

using namespace fdisc;

TEST_CASE("bernoulli extremes and concentration") {
  CHECK(sample_bernoulli(2, 3, 0.0, 7) == IncidenceMatrix::zeros(2, 3));
  CHECK(sample_bernoulli(2, 3, 1.0, 7).popcount() == 6);
  const auto big = sample_bernoulli(50, 5000, 0.5, 1);
  CHECK(std::abs(static_cast<double>(big.popcount()) - 125000.0) <= 4.0 * std::sqrt(62500.0));
  CHECK(sample_bernoulli(5, 70, 0.3, 9) == sample_bernoulli(5, 70, 0.3, 9));
  CHECK(big.expected_frequency() == doctest::Approx(25.0));
  CHECK_THROWS_AS(sample_bernoulli(2, 2, 1.5, 1), std::invalid_argument);
}

TEST_CASE("semirandom sampling") {
  CHECK(sample_semirandom(DistributionMatrix(Eigen::MatrixXd::Zero(3, 4), 1.0, 3.0), 1) == IncidenceMatrix::zeros(3, 4));
  CHECK(sample_semirandom(DistributionMatrix(Eigen::MatrixXd::Ones(3, 4), 1.0, 3.0), 1).popcount() == 12);
  Eigen::MatrixXd one = Eigen::MatrixXd::Zero(1, 1);
  one(0, 0) = 0.5;
  const DistributionMatrix dist(one, 0.5, 1.0);
  int hits = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) hits += sample_semirandom(dist, s).get(0, 0);
  CHECK(std::abs(hits - 5000) <= 200);
  CHECK_THROWS(DistributionMatrix(Eigen::MatrixXd::Ones(2, 2), 0.5, 4.0));
  CHECK_THROWS(DistributionMatrix(Eigen::MatrixXd::Ones(2, 2), 1.0, 1.5));
}

TEST_CASE("signed discrepancy examples") {
  const auto pair = IncidenceMatrix::from_rows({{1, 1}});
  CHECK(signed_discrepancy(pair, Coloring::parse("+-"))(0) == 0);
  CHECK(signed_discrepancy(pair, Coloring::parse("++"))(0) == 2);
  const auto tri = IncidenceMatrix::from_rows({{1, 0}, {1, 1}});
  const auto d = signed_discrepancy(tri, Coloring::parse("-+"));
  CHECK(d(0) == -1);
  CHECK(d(1) == 0);
  CHECK(disc_of_coloring(pair, Coloring::parse("+-")) == 0);
  CHECK(disc_of_coloring(IncidenceMatrix::from_rows({{1}}), Coloring::parse("-")) == 1);
  CHECK(disc_of_coloring(tri, Coloring::parse("-+")) == 1);
  CHECK_THROWS_AS(disc_of_coloring(pair, Coloring::parse("+")), DimensionMismatch);
}

TEST_CASE("covariances") {
  CHECK(covariance_empirical(IncidenceMatrix::from_rows({{1, 1}}))(0, 0) == 2);
  CHECK(covariance_empirical(IncidenceMatrix::from_rows({{1, 0}, {0, 1}})) == Eigen::Matrix2i::Identity());
  Eigen::Matrix2i expect;
  expect << 2, 1, 1, 2;
  CHECK(covariance_empirical(IncidenceMatrix::from_rows({{1, 1, 0}, {0, 1, 1}})) == expect);
  const auto e = covariance_expected(2, 10, 0.5);
  CHECK(e(0, 0) == doctest::Approx(5.0));
  CHECK(e(0, 1) == doctest::Approx(2.5));
  CHECK(covariance_expected(3, 4, 0.0).isZero());
  CHECK((covariance_expected(3, 4, 1.0).array() == 4.0).all());
}

TEST_CASE("empirical covariance matches dense product on random instances") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto a = sample_bernoulli(1 + static_cast<int>(s % 5), 1 + static_cast<int>(7 * s % 150), 0.4, s);
    const Eigen::MatrixXi dense = a.to_dense();
    CHECK(covariance_empirical(a) == dense * dense.transpose());
  }
}

TEST_CASE("column frequencies and odd rows") {
  CHECK(max_column_frequency(IncidenceMatrix::zeros(3, 4)) == 0);
  CHECK(max_column_frequency(sample_bernoulli(4, 9, 1.0, 0)) == 4);
  CHECK(max_column_frequency(IncidenceMatrix::from_rows({{1, 1, 0}, {0, 1, 1}})) == 2);
  CHECK(odd_rows(IncidenceMatrix::from_rows({{1, 1, 0}, {1, 1, 1}, {1, 0, 0}})) == std::vector<int>{1, 2});
}

TEST_CASE("column classes group equal columns") {
  const auto a = IncidenceMatrix::from_rows({{1, 0, 1, 1}, {0, 1, 0, 0}});
  const auto& classes = a.column_classes();
  REQUIRE(classes.size() == 2);
  CHECK(classes[0].representative == 0);
  CHECK(classes[0].count == 3);
  CHECK(classes[1].representative == 1);
  CHECK(classes[1].count == 1);
}

TEST_CASE("coloring parsing") {
  const auto x = Coloring::parse("+-+");
  CHECK(x.size() == 3);
  CHECK(x[1] == -1);
  CHECK(x.to_string() == "+-+");
  CHECK(x.negated().to_string() == "-+-");
  CHECK_THROWS(Coloring::parse("+0"));
}
