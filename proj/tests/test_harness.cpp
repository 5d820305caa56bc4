#include <doctest.h>

#include <sstream>

#include "fdisc/errors.hpp"
#include "fdisc/harness.hpp"
#include "fdisc/parallel.hpp"

using namespace fdisc;

TEST_CASE("regime size") {
  CHECK(regime_columns(3, 4.0) == 40);
  CHECK(regime_columns(8, 4.0) == 533);
  CHECK_THROWS_AS(regime_columns(1, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(regime_columns(10, 1e7), SizeLimitExceeded);
}

TEST_CASE("csv output") {
  TrialRecord r{3, 40, 0.5, 4.0, 7, 123, "random", 1000000, true, 1, 17};
  CHECK(csv_line(r) == "3,40,0.5,4,7,123,random,1000000,1,1,17");
  std::ostringstream out;
  write_csv(out, {r});
  CHECK(out.str() == "m,n,p,C,trial,seed,solver,budget,found,disc,flips\n3,40,0.5,4,7,123,random,1000000,1,1,17\n");
}

TEST_CASE("regime experiment is reproducible across thread counts") {
  ExperimentConfig cfg;
  cfg.m_list = {3, 4};
  cfg.trials = 6;
  cfg.budget = 100000;
  cfg.seed = 9;
  set_thread_count(1);
  const auto one = run_theorem_experiment(cfg);
  set_thread_count(3);
  const auto three = run_theorem_experiment(cfg);
  set_thread_count(0);
  std::ostringstream a, b;
  write_csv(a, one.rows);
  write_csv(b, three.rows);
  CHECK(a.str() == b.str());
  REQUIRE(one.rows.size() == 12);
  CHECK(one.rows[0].m == 3);
  CHECK(one.rows[6].m == 4);
  CHECK(one.rows[5].trial == 5);
  CHECK(one.summaries[0].n == 40);
  CHECK(one.summaries[0].n_regime);
  const auto json = one.to_json();
  CHECK(json["config"]["seed"] == 9);
  CHECK(json["config"]["C"] == 4.0);
}

TEST_CASE("experiment guards") {
  ExperimentConfig cfg;
  cfg.trials = 0;
  CHECK(run_theorem_experiment(cfg).rows.empty());
  cfg.c = 1e7;
  CHECK_THROWS_AS(run_theorem_experiment(cfg), SizeLimitExceeded);
  ExperimentConfig bad;
  bad.solver = "anneal";
  CHECK_THROWS_AS(run_theorem_experiment(bad), std::invalid_argument);
  ExperimentConfig override_n;
  override_n.m_list = {8};
  override_n.n_override[8] = 100;
  override_n.trials = 2;
  override_n.solver = "local";
  override_n.budget = 1000;
  CHECK(run_theorem_experiment(override_n).rows[0].n == 100);
}

TEST_CASE("lower-bound probe") {
  const auto r = run_lowerbound_probe(10, 10, 0.5, 20, 1);
  int total = 0;
  for (const auto& [d, c] : r.min_disc_histogram) total += c;
  CHECK(total == 20);
  CHECK(r.fraction_within_one < 1.0);
  CHECK(r.mean_good_colorings <= r.counting_bound);
  CHECK(run_lowerbound_probe(1, 24, 0.5, 20, 2).fraction_within_one >= 0.95);
  CHECK_THROWS_AS(run_lowerbound_probe(2, 25, 0.5, 1, 3), SizeLimitExceeded);
}

TEST_CASE("suite lookup") {
  CHECK(suite_names().size() == 7);
  CHECK_THROWS_AS(run_suite("nonsense", 1), std::invalid_argument);
  const auto report = run_suite("smoothing", 7);
  CHECK(report.passed());
  CHECK(report.checks_run > 0);
  CHECK(report.to_json()["suite"] == "smoothing");
}
