#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdisc/setsystem.hpp"

namespace fdisc {

using Json = nlohmann::ordered_json;

/// Largest n accepted by the experiment drivers.
inline constexpr std::int64_t kMaxColumns = 10'000'000;

/// ceil(C m^2 ln m). Throws std::invalid_argument for m < 2 or C <= 0 and
/// SizeLimitExceeded above kMaxColumns.
int regime_columns(int m, double c);

struct ExperimentConfig {
  std::vector<int> m_list{3};
  double c = 4.0;
  double p = 0.5;
  int trials = 100;
  std::string solver = "random";  // random | local | exhaustive
  std::int64_t budget = 1'000'000;  // trials for random, flips per restart for local
  int restarts = 50;
  std::uint64_t seed = 42;
  std::string output_path;
  std::map<int, int> n_override;  // explicit n for some m

  Json to_json() const;
};

/// One CSV row: m,n,p,C,trial,seed,solver,budget,found,disc,flips.
struct TrialRecord {
  int m = 0;
  int n = 0;
  double p = 0.0;
  double c = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string solver;
  std::int64_t budget = 0;
  bool found = false;
  int disc = 0;
  std::int64_t flips = 0;
};

struct RegimeSummary {
  int m = 0;
  int n = 0;
  double t = 0.0;
  int trials = 0;
  int successes = 0;
  bool n_regime = false;  // n >= C m^2 ln m
  bool t_regime = false;  // t >= C ln n

  double rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> rows;
  std::vector<RegimeSummary> summaries;
  double runtime_s = 0.0;

  Json to_json() const;
};

inline constexpr const char* kCsvHeader = "m,n,p,C,trial,seed,solver,budget,found,disc,flips";
std::string csv_line(const TrialRecord& row);
void write_csv(std::ostream& out, const std::vector<TrialRecord>& rows);

/// Instance k of size m uses seed derive(derive(seed, m), k); its solver
/// uses derive(that seed, 1). Trials run on the worker pool and are
/// collected in (m, trial) order.
ExperimentResult run_theorem_experiment(const ExperimentConfig& config);

struct LowerboundReport {
  int m = 0;
  int n = 0;
  double p = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  double kappa = 3.0;
  std::map<int, int> min_disc_histogram;
  double fraction_within_one = 0.0;
  double mean_good_colorings = 0.0;  // colorings with disc <= 1
  double counting_bound = 0.0;       // 2^n (kappa / sqrt n)^m

  Json to_json() const;
};

/// Exhaustive minimum discrepancy over `trials` instances (n <= 24).
LowerboundReport run_lowerbound_probe(int m, int n, double p, int trials, std::uint64_t seed, double kappa = 3.0);

/// Worst slack of one inequality over a suite run.
struct BoundSummary {
  std::string bound;
  std::string domain;
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  double worst_margin = 0.0;
  std::vector<double> worst_point;
};

struct SuiteFailure {
  std::string check;
  Json witness;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::int64_t checks_run = 0;
  std::vector<SuiteFailure> failures;
  std::vector<BoundSummary> bounds;
  Json info = Json::object();
  double runtime_s = 0.0;

  bool passed() const { return failures.empty(); }
  Json to_json() const;
};

const std::vector<std::string>& suite_names();

/// Runs one verification battery at its default sizes. Throws
/// std::invalid_argument for an unknown name.
SuiteReport run_suite(const std::string& name, std::uint64_t seed);

}  // namespace fdisc
