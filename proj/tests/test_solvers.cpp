#include <doctest.h>

#include <cmath>

#include "fdisc/errors.hpp"
#include "fdisc/rng.hpp"
#include "fdisc/solvers.hpp"
#include "oracles.hpp"

using namespace fdisc;

namespace {

oracle::Dense dense_rows(const IncidenceMatrix& a) {
  oracle::Dense rows(a.rows(), std::vector<int>(a.cols()));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) rows[i][j] = a.get(i, j);
  }
  return rows;
}

}  // namespace

TEST_CASE("exhaustive examples") {
  const auto pair = exhaustive_min_disc(IncidenceMatrix::from_rows({{1, 1}}));
  CHECK(pair.disc == 0);
  CHECK(pair.witness.to_string() == "+-");
  const auto single = exhaustive_min_disc(IncidenceMatrix::from_rows({{1}}));
  CHECK(single.disc == 1);
  CHECK(single.witness.to_string() == "+");
  CHECK(exhaustive_min_disc(IncidenceMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})).disc == 1);
  CHECK_THROWS_AS(exhaustive_min_disc(IncidenceMatrix::zeros(1, 31)), SizeLimitExceeded);
}

TEST_CASE("exhaustive search and counting agree with brute force") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto a = sample_bernoulli(1 + static_cast<int>(s % 6), 1 + static_cast<int>(s % 13), 0.5, s);
    const auto rows = dense_rows(a);
    const auto r = exhaustive_min_disc(a);
    CHECK(r.disc == oracle::min_disc(rows));
    CHECK(disc_of_coloring(a, r.witness) == r.disc);
    CHECK(r.witness[0] == 1);
    for (int target = 0; target <= 3; ++target) CHECK(count_colorings_within(a, target) == oracle::count_within(rows, target));
    if (!odd_rows(a).empty()) CHECK(r.disc >= 1);
  }
}

TEST_CASE("random search") {
  const auto a = sample_bernoulli(3, 10, 0.5, 1);
  const auto easy = random_search(a, 10, 1, 2);
  CHECK(easy.found);
  CHECK(easy.flips_used == 0);
  const auto pair = IncidenceMatrix::from_rows({{1, 1}});
  int hits = 0;
  constexpr int runs = 20000;
  for (int k = 0; k < runs; ++k) hits += random_search(pair, 0, 1, derive(7, k)).found;
  CHECK(std::abs(hits / double(runs) - 0.5) <= 5 * std::sqrt(0.25 / runs));
  for (int k = 0; k < 100; ++k) CHECK(random_search(pair, 0, 8, derive(8, k)).found);
  const auto none = random_search(IncidenceMatrix::from_rows({{1}}), 0, 100, 3);
  CHECK_FALSE(none.found);
  const auto r = random_search(sample_bernoulli(3, 24, 0.5, 9), 1, 1'000'000, 4);
  if (r.found) CHECK(disc_of_coloring(sample_bernoulli(3, 24, 0.5, 9), r.coloring) <= 1);
}

TEST_CASE("local search") {
  const auto z = local_search(IncidenceMatrix::zeros(4, 6), 0, 3, 100, 1);
  CHECK(z.found);
  CHECK(z.disc == 0);
  int successes = 0;
  int tried = 0;
  for (std::uint64_t s = 0; tried < 30; ++s) {
    const auto a = sample_bernoulli(3, 14, 0.5, s);
    if (oracle::min_disc(dense_rows(a)) != 0) continue;
    ++tried;
    const auto r = local_search(a, 1, 50, 10000, derive(s, 1));
    successes += r.found;
    if (r.found) CHECK(disc_of_coloring(a, r.coloring) <= 1);
  }
  CHECK(successes >= 29);
  const auto a = sample_bernoulli(8, 300, 0.5, 5);
  const auto r1 = local_search(a, 1, 20, 100000, 6);
  const auto r2 = local_search(a, 1, 20, 100000, 6);
  CHECK(r1.found == r2.found);
  CHECK(r1.coloring == r2.coloring);
  CHECK(r1.flips_used == r2.flips_used);
}

TEST_CASE("counting bound") {
  CHECK(counting_bound(1, 1, 1, 1.0) == doctest::Approx(2.0));
  CHECK(counting_bound(8, 16, 1, 1.0) == doctest::Approx(1.0));
  CHECK(log_counting_bound(8, 16, 1, 1.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(log_counting_bound(50, 1000, 2, 3.0) == doctest::Approx(1000 * std::log(2.0) + 50 * std::log(6.0 / std::sqrt(1000.0))));
}
