#include <doctest.h>

#include <filesystem>

#include "fdisc/errors.hpp"
#include "fdisc/instance_io.hpp"

using namespace fdisc;

TEST_CASE("hex rows put column 0 at the top bit") {
  const auto a = IncidenceMatrix::from_rows({{1, 0, 1, 0, 1}, {0, 0, 1, 1, 0}});
  CHECK(encode_row_hex(a, 0) == "a8");
  CHECK(encode_row_hex(a, 1) == "30");
  const auto back = instance_from_json(R"({"m": 2, "n": 5, "p": null, "seed": 0, "generator": "manual", "rows": ["a8", "30"]})");
  CHECK(back == a);
}

TEST_CASE("round trip is bit exact") {
  for (int n : {1, 3, 4, 63, 64, 65, 130}) {
    const auto a = sample_bernoulli(3, n, 0.5, static_cast<std::uint64_t>(n));
    const std::string text = instance_to_json(a);
    const auto b = instance_from_json(text);
    CHECK(b == a);
    CHECK(instance_to_json(b) == text);
    REQUIRE(b.meta().has_value());
    CHECK(b.meta()->p.value() == 0.5);
    CHECK(b.meta()->seed == static_cast<std::uint64_t>(n));
  }
  const auto path = std::filesystem::temp_directory_path() / "fdisc_io_test.json";
  const auto a = sample_bernoulli(4, 33, 0.2, 5);
  save_instance(a, path);
  CHECK(load_instance(path) == a);
  std::filesystem::remove(path);
}

TEST_CASE("malformed instances are rejected") {
  CHECK_THROWS(instance_from_json(R"({"m": 1, "n": 5, "rows": ["a9"]})"));
  CHECK_THROWS(instance_from_json(R"({"m": 1, "n": 5, "rows": ["a"]})"));
  CHECK_THROWS(instance_from_json(R"({"m": 2, "n": 4, "rows": ["a"]})"));
  CHECK_THROWS(instance_from_json(R"({"m": 1, "n": 4, "rows": ["g"]})"));
  CHECK_THROWS(instance_from_json("not json"));
}
