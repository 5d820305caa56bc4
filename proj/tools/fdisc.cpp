#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdisc/errors.hpp"
#include "fdisc/fourier.hpp"
#include "fdisc/harness.hpp"
#include "fdisc/instance_io.hpp"
#include "fdisc/inversion.hpp"
#include "fdisc/parallel.hpp"
#include "fdisc/setsystem.hpp"
#include "fdisc/smoothing.hpp"
#include "fdisc/solvers.hpp"

using fdisc::Json;

namespace {

struct Globals {
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string out;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + g.out);
  file << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json estimate_json(const fdisc::Estimate& e) {
  return {{"value", e.value}, {"stderr", e.std_error}, {"samples", e.samples}, {"seed", e.seed}};
}

fdisc::Smoother make_smoother(const fdisc::IncidenceMatrix& a, bool parity, int delta) {
  if (parity) return fdisc::ParitySmoother::from(a);
  return fdisc::build_pmf(delta);
}

Json instance_info(const fdisc::IncidenceMatrix& a) {
  Json j = {{"m", a.rows()}, {"n", a.cols()}};
  if (a.meta() && a.meta()->p) j["p"] = *a.meta()->p;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrepancy of random set systems: solvers, Fourier inversion and verification suites"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: all cores)")->capture_default_str();
  app.add_option("--out", g.out, "Output file (default stdout)");

  // gen
  auto* gen = app.add_subcommand("gen", "Sample a Bernoulli(p) instance");
  int gen_m = 0, gen_n = 0;
  double gen_p = 0.5;
  gen->add_option("--m", gen_m, "Rows (sets)")->required()->check(CLI::PositiveNumber);
  gen->add_option("--n", gen_n, "Columns (elements)")->required()->check(CLI::PositiveNumber);
  gen->add_option("--p", gen_p, "Entry probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();

  // disc
  auto* disc = app.add_subcommand("disc", "Search for a low-discrepancy coloring");
  std::string disc_in, solver = "local";
  int target = 1, restarts = 50;
  std::int64_t budget = 1'000'000;
  disc->add_option("--in", disc_in, "Instance JSON")->required()->check(CLI::ExistingFile);
  disc->add_option("--solver", solver)->check(CLI::IsMember({"exhaustive", "random", "local"}))->capture_default_str();
  disc->add_option("--target", target)->check(CLI::NonNegativeNumber)->capture_default_str();
  disc->add_option("--budget", budget, "Trials (random) or flips per restart (local)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  disc->add_option("--restarts", restarts)->check(CLI::PositiveNumber)->capture_default_str();

  // invert
  auto* invert = app.add_subcommand("invert", "Pr[D + R = lambda] by Fourier inversion");
  std::string inv_in;
  int delta = 1;
  bool parity = false, exact = false, even = false;
  std::vector<int> lambda;
  std::int64_t samples = 1'000'000;
  invert->add_option("--in", inv_in, "Instance JSON")->required()->check(CLI::ExistingFile);
  invert->add_option("--delta", delta, "Smoothing parameter")->check(CLI::NonNegativeNumber)->capture_default_str();
  invert->add_flag("--parity", parity, "Use the parity smoother");
  invert->add_option("--lambda", lambda, "Target point (comma separated; default 0)")->delimiter(',');
  invert->add_option("--samples", samples)->check(CLI::PositiveNumber)->capture_default_str();
  invert->add_flag("--exact", exact, "Also enumerate all colorings (n <= 24)");
  invert->add_flag("--even", even, "Quarter-cube integral with the parity smoother (lambda = 0)");

  // fourier eval
  auto* fourier = app.add_subcommand("fourier", "Characteristic function tools");
  fourier->require_subcommand(1);
  fourier->fallthrough();
  auto* eval = fourier->add_subcommand("eval", "Evaluate dhat and xhat at theta");
  std::string fe_in;
  std::vector<double> theta;
  int fe_delta = 1;
  eval->add_option("--in", fe_in, "Instance JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--theta", theta, "Point (comma separated)")->required()->delimiter(',');
  eval->add_option("--delta", fe_delta)->check(CLI::NonNegativeNumber)->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite;
  std::vector<std::string> choices = fdisc::suite_names();
  choices.push_back("all");
  verify->add_option("--suite", suite)->required()->check(CLI::IsMember(choices));

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Desk-scale experiments");
  experiment->require_subcommand(1);
  experiment->fallthrough();
  auto* theorem = experiment->add_subcommand("theorem", "Success rate of the solver at n = ceil(C m^2 ln m)");
  fdisc::ExperimentConfig cfg;
  std::vector<int> n_list;
  theorem->add_option("--m", cfg.m_list, "Row counts (comma separated)")->delimiter(',')->capture_default_str();
  theorem->add_option("--C", cfg.c, "Regime constant")->check(CLI::PositiveNumber)->capture_default_str();
  theorem->add_option("--p", cfg.p)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  theorem->add_option("--trials", cfg.trials)->check(CLI::NonNegativeNumber)->capture_default_str();
  theorem->add_option("--solver", cfg.solver)->check(CLI::IsMember({"exhaustive", "random", "local"}))->capture_default_str();
  theorem->add_option("--budget", cfg.budget)->check(CLI::NonNegativeNumber)->capture_default_str();
  theorem->add_option("--restarts", cfg.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  theorem->add_option("--n", n_list, "Explicit n per entry of --m instead of the regime value")->delimiter(',');

  auto* lower = experiment->add_subcommand("lowerbound", "Exhaustive minimum discrepancy at tiny sizes");
  int lb_m = 10, lb_n = 10, lb_trials = 50;
  double lb_p = 0.5, kappa = 3.0;
  lower->add_option("--m", lb_m)->check(CLI::PositiveNumber)->capture_default_str();
  lower->add_option("--n", lb_n)->check(CLI::PositiveNumber)->capture_default_str();
  lower->add_option("--p", lb_p)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  lower->add_option("--trials", lb_trials)->check(CLI::NonNegativeNumber)->capture_default_str();
  lower->add_option("--kappa", kappa)->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    fdisc::set_thread_count(g.threads);

    if (gen->parsed()) {
      emit(g, fdisc::instance_to_json(fdisc::sample_bernoulli(gen_m, gen_n, gen_p, g.seed)) + "\n");
      return 0;
    }

    if (disc->parsed()) {
      const auto a = fdisc::load_instance(disc_in);
      Json out = {{"solver", solver}, {"target", target}, {"seed", g.seed}, {"instance", instance_info(a)}};
      if (solver == "exhaustive") {
        const auto r = fdisc::exhaustive_min_disc(a);
        out["found"] = r.disc <= target;
        out["disc"] = r.disc;
        out["coloring"] = r.witness.to_string();
        out["flips_used"] = 0;
      } else {
        const auto r = solver == "random" ? fdisc::random_search(a, target, budget, g.seed)
                                          : fdisc::local_search(a, target, restarts, budget, g.seed);
        out["budget"] = budget;
        if (solver == "local") out["restarts"] = restarts;
        out["found"] = r.found;
        out["disc"] = r.disc;
        out["coloring"] = r.found ? Json(r.coloring.to_string()) : Json(nullptr);
        out["flips_used"] = r.flips_used;
      }
      emit(g, dump(out));
      return 0;
    }

    if (invert->parsed()) {
      const auto a = fdisc::load_instance(inv_in);
      if (lambda.empty()) lambda.assign(a.rows(), 0);
      if (static_cast<int>(lambda.size()) != a.rows()) {
        throw fdisc::DimensionMismatch("--lambda needs one entry per row");
      }
      const Eigen::VectorXi lam = Eigen::Map<const Eigen::VectorXi>(lambda.data(), a.rows());
      const auto smoother = make_smoother(a, parity || even, delta);
      Json out = {{"instance", instance_info(a)}, {"seed", g.seed}, {"lambda", lambda}};
      out["smoother"] = (parity || even) ? Json("parity") : Json({{"delta", delta}});
      if (even) {
        if (lam.any()) throw std::invalid_argument("--even only applies to lambda = 0");
        out["estimate"] = estimate_json(fdisc::prob_even_variant(a, samples, g.seed));
      } else {
        const auto est = fdisc::prob_fourier_mc(a, smoother, lam, samples, g.seed);
        out["estimate"] = estimate_json(est.real);
        out["imaginary"] = estimate_json(est.imag);
        out["imaginary_consistent"] = est.imaginary_consistent();
      }
      if (exact) {
        const auto pr = fdisc::prob_exact(a, smoother, lam);
        const double value = pr.to_double();
        out["exact"] = {{"fraction", pr.to_string()}, {"value", value}};
        out["gap"] = std::abs(value - out["estimate"]["value"].get<double>());
      }
      emit(g, dump(out));
      return 0;
    }

    if (eval->parsed()) {
      const auto a = fdisc::load_instance(fe_in);
      if (static_cast<int>(theta.size()) != a.rows()) throw fdisc::DimensionMismatch("--theta needs one entry per row");
      const Eigen::VectorXd th = Eigen::Map<const Eigen::VectorXd>(theta.data(), a.rows());
      const auto log = fdisc::dhat_log(a, th);
      Json out = {{"instance", instance_info(a)},
                  {"theta", theta},
                  {"delta", fe_delta},
                  {"dhat", log.value()},
                  {"dhat_sign", log.sign},
                  {"dhat_log_abs", log.sign == 0 ? Json(nullptr) : Json(log.log_abs)},
                  {"rhat", fdisc::rhat_md(fe_delta, th)},
                  {"xhat", fdisc::xhat(a, fdisc::build_pmf(fe_delta), th)},
                  {"d2_to_lattice", fdisc::d2_to_lattice(th)}};
      emit(g, dump(out));
      return 0;
    }

    if (verify->parsed()) {
      const std::vector<std::string> names = suite == "all" ? fdisc::suite_names() : std::vector<std::string>{suite};
      Json reports = Json::array();
      bool passed = true;
      for (const auto& name : names) {
        const auto report = fdisc::run_suite(name, g.seed);
        passed = passed && report.passed();
        std::cerr << name << ": " << report.checks_run << " checks, " << report.failures.size() << " failures, "
                  << report.runtime_s << " s\n";
        reports.push_back(report.to_json());
      }
      emit(g, dump(names.size() == 1 ? reports[0] : reports));
      return passed ? 0 : 1;
    }

    if (theorem->parsed()) {
      cfg.seed = g.seed;
      cfg.output_path = g.out;
      if (!n_list.empty()) {
        if (n_list.size() != cfg.m_list.size()) throw std::invalid_argument("--n needs one entry per --m");
        for (std::size_t k = 0; k < n_list.size(); ++k) cfg.n_override[cfg.m_list[k]] = n_list[k];
      }
      const auto result = fdisc::run_theorem_experiment(cfg);
      std::ostringstream csv;
      fdisc::write_csv(csv, result.rows);
      emit(g, csv.str());
      const std::string summary = dump(result.to_json());
      if (g.out.empty()) {
        std::cerr << summary;
      } else {
        std::ofstream(g.out + ".json", std::ios::binary) << summary;
      }
      return 0;
    }

    if (lower->parsed()) {
      emit(g, dump(fdisc::run_lowerbound_probe(lb_m, lb_n, lb_p, lb_trials, g.seed, kappa).to_json()));
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
