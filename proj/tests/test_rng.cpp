#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "fdisc/rng.hpp"

using fdisc::RngStream;

TEST_CASE("philox known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(RngStream::block(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(RngStream::block(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(RngStream::block(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int k = 0; k < 100; ++k) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
}

TEST_CASE("derive mixes both arguments") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 50; ++s) {
    for (std::uint64_t i = 0; i < 50; ++i) seen.insert(fdisc::derive(s, i));
  }
  CHECK(seen.size() == 2500);
  CHECK(fdisc::derive(1, 2) == fdisc::derive(1, 2));
}

TEST_CASE("uniform, below and normal have the right moments") {
  RngStream rng(11, 0);
  constexpr int n = 200000;
  double sum = 0.0, sq = 0.0, nsum = 0.0, nsq = 0.0;
  std::vector<int> buckets(7, 0);
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sq += u * u;
    ++buckets[rng.below(7)];
    const double g = rng.normal();
    nsum += g;
    nsq += g * g;
  }
  CHECK(std::abs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sq / n - 1.0 / 3.0) < 0.005);
  CHECK(std::abs(nsum / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(nsq / n - 1.0) < 0.02);
  for (int b : buckets) CHECK(std::abs(b - n / 7.0) < 5.0 * std::sqrt(n / 7.0));
}

TEST_CASE("uniform interval") {
  RngStream rng(3, 1);
  for (int k = 0; k < 1000; ++k) {
    const double x = rng.uniform(-0.25, 0.25);
    CHECK(x >= -0.25);
    CHECK(x < 0.25);
  }
}
