// Acceptance battery: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fdisc/fourier.hpp"
#include "fdisc/harness.hpp"
#include "fdisc/integrate.hpp"
#include "fdisc/inversion.hpp"
#include "fdisc/rng.hpp"
#include "fdisc/smoothing.hpp"
#include "fdisc/solvers.hpp"
#include "fdisc/torus.hpp"
#include "oracles.hpp"

using namespace fdisc;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass;
  std::string detail;
};

oracle::Dense dense_rows(const IncidenceMatrix& a) {
  oracle::Dense rows(a.rows(), std::vector<int>(a.cols()));
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) rows[i][j] = a.get(i, j);
  }
  return rows;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// cos(pi x)^(2 delta), the transform of the smoothing sum, straight from std::cos.
double rhat_ref(int delta, double x) { return std::pow(std::cos(kPi * x), 2 * delta); }

Outcome inversion_oracle() {
  const auto start = std::chrono::steady_clock::now();
  RngStream rng(kSeed, 1);
  const Smoother r1 = build_pmf(1);
  int ok = 0;
  double worst_gap = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int m = 1 + static_cast<int>(rng.below(3));
    const int n = 4 + static_cast<int>(rng.below(9));
    const double p = rng.coin() ? 0.3 : 0.5;
    const auto a = sample_bernoulli(m, n, p, derive(kSeed, 100 + k));
    std::vector<int> lambda(m, 0);
    if (k % 2 == 1) {
      for (auto& l : lambda) l = static_cast<int>(rng.below(3)) - 1;
    }
    const Eigen::VectorXi lam = Eigen::Map<Eigen::VectorXi>(lambda.data(), m);
    const double exact = prob_exact(a, r1, lam).to_double();
    const double reference = oracle::point_probability(dense_rows(a), 1, lambda);
    const auto est = prob_fourier_mc(a, r1, lam, 1'000'000, derive(kSeed, 200 + k));
    const double gap = std::abs(est.real.value - exact);
    worst_gap = std::max(worst_gap, gap / std::max(3.0 * est.real.std_error, 1e-3));
    ok += gap <= std::max(3.0 * est.real.std_error, 1e-3) && std::abs(exact - reference) <= 1e-12 &&
          est.imaginary_consistent();
  }
  const double t = elapsed(start);
  return {ok == 50 && t <= 300.0,
          fmt("%d/50 instances agree, worst gap/tolerance %.3f, %.1f s (limit 300 s)", ok, worst_gap, t)};
}

Outcome dhat_oracle() {
  const auto start = std::chrono::steady_clock::now();
  RngStream rng(kSeed, 2);
  int ok = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int m = 1 + static_cast<int>(rng.below(4));
    const int n = 1 + static_cast<int>(rng.below(16));
    const auto a = sample_bernoulli(m, n, rng.uniform(0.1, 0.9), derive(kSeed, 300 + k));
    Eigen::VectorXd theta(m);
    for (int i = 0; i < m; ++i) theta(i) = rng.uniform(-0.5, 0.5);
    const auto direct = oracle::char_fn(dense_rows(a), std::vector<double>(theta.data(), theta.data() + m));
    const double product = dhat(a, theta);
    const double dev = std::max(std::abs(product - direct.real()), std::abs(product - dhat_bruteforce(a, theta)));
    worst = std::max(worst, dev);
    ok += dev <= 1e-10 && std::abs(direct.imag()) <= 1e-12;
  }
  const double t = elapsed(start);
  return {ok == 100 && t <= 60.0, fmt("%d/100 within 1e-10 (max deviation %.2e), %.2f s", ok, worst, t)};
}

Outcome smoothing_bounds() {
  const double pi2 = kPi * kPi;
  const double tol = 1e-12;
  std::int64_t checks = 0, violations = 0;
  auto record = [&](bool holds) {
    ++checks;
    violations += !holds;
  };
  for (int delta = 1; delta <= 8; ++delta) {
    for (int k = -500; k <= 500; ++k) {
      const double x = k / 1000.0;
      const double r = rhat_ref(delta, x);
      record(r <= std::exp(-pi2 * delta * x * x) * (1 + tol));
      if (std::abs(k) <= 250) record(r >= std::exp(-pi2 * delta * x * x - 20.0 * delta * std::pow(x, 4)) * (1 - tol));
      if (std::abs(k) <= 125 && k != 0) {
        for (const double s : {-0.5, 0.5}) record(rhat_ref(delta, x + s) / r <= std::pow(32.0 * x * x, delta) * (1 + tol));
      }
      const auto lib = check_rhat_bounds(delta, Eigen::VectorXd::Constant(1, x));
      record(lib.upper.holds && lib.lower.holds && lib.ratio.holds);
    }
  }
  for (int m = 2; m <= 6; ++m) {
    int shifts = 1;
    for (int i = 0; i < m; ++i) shifts *= 3;
    for (int delta = 1; delta <= 8; ++delta) {
      for (const double half : {0.5, 0.25, 0.125}) {
        const auto points = box_test_points(m, -half, half, 200, derive(kSeed, 1000 * m + 10 * delta + int(8 * half)));
        for (const auto& theta : points) {
          double r = 1.0;
          for (int i = 0; i < m; ++i) r *= rhat_ref(delta, theta(i));
          const double n2 = theta.squaredNorm();
          record(r <= std::exp(-pi2 * delta * n2) * (1 + tol));
          if (half <= 0.25) record(r >= std::exp(-pi2 * delta * n2 - 20.0 * delta * n2 * n2) * (1 - tol));
          if (half <= 0.125) {
            for (int code = 1; code < shifts; ++code) {
              double lhs = 1.0, rhs = 1.0;
              int c = code;
              for (int i = 0; i < m; ++i, c /= 3) {
                if (c % 3 == 0) continue;
                const double s = c % 3 == 1 ? -0.5 : 0.5;
                lhs *= rhat_ref(delta, theta(i) + s) / rhat_ref(delta, theta(i));
                rhs *= std::pow(32.0 * theta(i) * theta(i), delta);
              }
              record(lhs <= rhs * (1 + tol));
            }
          }
          const auto lib = check_rhat_bounds(delta, theta);
          record(lib.upper.holds && lib.lower.holds && lib.ratio.holds);
        }
      }
    }
  }
  return {violations == 0, fmt("%lld inequality checks, %lld violations", (long long)checks, (long long)violations)};
}

Outcome spike_dominance() {
  std::int64_t points = 0, failures = 0;
  for (int m = 1; m <= 8; ++m) {
    int shifts = 1;
    for (int i = 0; i < m; ++i) shifts *= 3;
    for (const auto& theta : ball_test_points(m, 1.0 / 16.0, 1000, 10, derive(kSeed, 400 + m))) {
      double lhs = 1.0;
      for (int i = 0; i < m; ++i) lhs *= rhat_ref(1, theta(i));
      double rhs = 0.0;
      for (int code = 1; code < shifts; ++code) {
        double term = 1.0;
        int c = code;
        for (int i = 0; i < m; ++i, c /= 3) term *= rhat_ref(1, theta(i) + (c % 3 == 0 ? 0.0 : c % 3 == 1 ? -0.5 : 0.5));
        rhs += term;
      }
      ++points;
      failures += !(lhs > 2.0 * rhs) || !spike_dominance_r(1, theta).dominates;
    }
  }
  const Smoother r1 = build_pmf(1);
  std::int64_t xpoints = 0, xfailures = 0;
  for (int k = 0; k < 100; ++k) {
    const auto a = sample_bernoulli(6, 200, 0.5, derive(kSeed, 500 + k));
    for (const auto& theta : ball_test_points(6, 1.0 / 16.0, 40, 2, derive(kSeed, 600 + k))) {
      const double lhs = std::abs(xhat(a, r1, theta));
      double rhs = 0.0;
      for (int code = 1; code < 729; ++code) {
        Eigen::VectorXd shifted = theta;
        int c = code;
        for (int i = 0; i < 6; ++i, c /= 3) shifted(i) += c % 3 == 0 ? 0.0 : c % 3 == 1 ? -0.5 : 0.5;
        rhs += std::abs(xhat(a, r1, shifted));
      }
      ++xpoints;
      xfailures += !(lhs > 2.0 * rhs) || !spike_dominance_x(a, r1, theta).dominates;
    }
  }
  return {failures == 0 && xfailures == 0,
          fmt("smoother: %lld points over m=1..8, %lld failures; instances: %lld points over 100 (m=6, n=200), "
              "%lld failures",
              (long long)points, (long long)failures, (long long)xpoints, (long long)xfailures)};
}

Outcome one_factor_decay() {
  RngStream rng(kSeed, 5);
  const double tol = 1e-12;
  auto random_theta = [&](int m) {
    std::vector<double> t(m);
    const double scale = rng.uniform();
    for (auto& x : t) x = scale * rng.uniform(-0.25, 0.25);
    return t;
  };
  auto sq = [](const std::vector<double>& t) {
    double s = 0.0;
    for (double x : t) s += x * x;
    return s;
  };
  auto sup = [](const std::vector<double>& t) {
    double s = 0.0;
    for (double x : t) s = std::max(s, std::abs(x));
    return s;
  };
  int v1 = 0, v2 = 0, v3 = 0;
  double w1 = 1.0, w2 = 1.0, w3 = 1.0;
  for (int k = 0; k < 1000; ++k) {
    const int m = 1 + static_cast<int>(rng.below(14));
    const double p = rng.uniform(0.0, 0.5);
    const auto t = random_theta(m);
    const double e = oracle::abs_cos_expectation(t, p, 0.0, false);
    const double margin = 1.0 - kPi * kPi / 4.0 * p * sup(t) * sup(t) - e;
    w1 = std::min(w1, margin);
    v1 += margin < -tol;
  }
  for (int k = 0; k < 1000; ++k) {
    const int m = 1 + static_cast<int>(rng.below(14));
    const double p = rng.uniform(0.0, 0.5);
    auto t = random_theta(m);
    const double limit = std::sqrt(kSmallL2B / std::max(p, 1e-300));
    const double norm = std::sqrt(sq(t));
    if (norm > limit) {
      for (auto& x : t) x *= limit / norm;
    }
    const double s = rng.uniform(-kPi, kPi);
    const double e = oracle::abs_cos_expectation(t, p, s, true);
    const double margin = 1.0 - 0.5 * p * sq(t) - e;
    w2 = std::min(w2, margin);
    v2 += margin < -tol;
  }
  for (int k = 0; k < 1000; ++k) {
    const int m = 1 + static_cast<int>(rng.below(14));
    const double p = rng.uniform(0.0, 0.5);
    const auto t = random_theta(m);
    const double e = oracle::abs_cos_expectation(t, p, 0.0, false);
    const Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(t.data(), m);
    const double margin = 1.0 - std::min(0.25 * p * sq(t), kOneFactorC) - e;
    w3 = std::min(w3, margin);
    v3 += margin < -tol || std::abs(one_factor_abs_cos_exact(theta, p) - e) > 1e-12;
  }
  return {v1 + v2 + v3 == 0,
          fmt("violations %d/%d/%d of 1000 each (large entry, small l2 with b=%.0e, summary with c=%.0e); worst "
              "margins %.2e/%.2e/%.2e",
              v1, v2, v3, kSmallL2B, kOneFactorC, w1, w2, w3)};
}

Outcome far_region() {
  std::vector<double> mean_log;
  std::string detail;
  bool pass = true;
  for (const int n : {500, 1000, 2000}) {
    int within = 0;
    double log_sum = 0.0;
    for (int k = 0; k < 20; ++k) {
      const auto a = sample_bernoulli(4, n, 0.5, derive(kSeed, 7000 + 100 * n + k));
      const double delta = 1.0 / (16.0 * std::sqrt(a.expected_frequency()));
      const auto r = far_region_integral(a, delta, 1 << 17, derive(kSeed, 8000 + 100 * n + k));
      within += r.side_conditions && r.integral.value + 3.0 * r.integral.std_error <= r.bound;
      log_sum += std::log(std::max(r.integral.value, 1e-300));
    }
    mean_log.push_back(log_sum / 20);
    pass = pass && within >= 18;
    detail += fmt("n=%d: %d/20 under bound, mean ln estimate %.1f; ", n, within, mean_log.back());
  }
  pass = pass && mean_log[1] < mean_log[0] && mean_log[2] < mean_log[1];
  return {pass, detail + "decreasing in n"};
}

Outcome gaussian_comparator() {
  bool pass = true;
  std::string detail;
  for (const int m : {2, 3}) {
    for (const double r : {1.0, 4.0}) {
      const auto e = integrate_euclidean_ball(
          [r](const Eigen::VectorXd& x) { return std::exp(-2.0 * kPi * kPi * r * x.squaredNorm()); }, m,
          std::sqrt(m / r) / kPi, 1 << 20, derive(kSeed, 900 + 10 * m + int(r)));
      const double lower = 0.5 * std::pow(2.0 * kPi * r, -0.5 * m);
      pass = pass && e.value >= lower - 3.0 * e.std_error;
      detail += fmt("(m=%d r=%g) %.4g vs %.4g; ", m, r, e.value, lower);
    }
  }
  return {pass, detail};
}

Outcome cancellation() {
  const auto zero = cancellation_check(Eigen::VectorXi::Zero(3), 100000, kSeed);
  bool pass = zero.real.value == 1.0 && zero.imag.value == 0.0;
  int ok = 0;
  const std::vector<std::vector<int>> ts{{1}, {3, -2}, {0, 1}, {2, 2, -1}, {-5, 0, 4, 1}};
  for (std::size_t k = 0; k < ts.size(); ++k) {
    auto v = ts[k];
    const Eigen::VectorXi t = Eigen::Map<Eigen::VectorXi>(v.data(), static_cast<Eigen::Index>(v.size()));
    const auto c = cancellation_check(t, 100000, derive(kSeed, 950 + k));
    ok += std::abs(c.real.value) <= 3.0 * c.real.std_error && std::abs(c.imag.value) <= 3.0 * c.imag.std_error;
  }
  pass = pass && ok == 5;
  return {pass, fmt("t=0 gives %.17g exactly; %d/5 nonzero t within 3 stderr of 0", zero.real.value, ok)};
}

Outcome rho_check() {
  int ok = 0;
  double worst = 0.0;
  for (int delta = 1; delta <= 12; ++delta) {
    double grid = 0.0;
    for (int k = 0; k <= 250; ++k) grid = std::max(grid, std::abs(rhat_ref(delta, 0.25 + k / 1000.0)));
    const double r = rho(delta);
    const double dev = std::max(std::abs(r - std::ldexp(1.0, -delta)), std::abs(grid - std::ldexp(1.0, -delta)));
    worst = std::max(worst, dev);
    ok += dev <= 1e-9 && r <= std::exp(-0.69 * delta);
  }
  return {ok == 12, fmt("%d/12 values equal 2^-delta (max deviation %.1e) and lie below exp(-0.69 delta)", ok, worst)};
}

Outcome theorem_regime() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.m_list = {3};
  cfg.c = 4.0;
  cfg.p = 0.5;
  cfg.trials = 100;
  cfg.solver = "random";
  cfg.budget = 1'000'000;
  cfg.seed = derive(kSeed, 10);
  const auto main = run_theorem_experiment(cfg);
  const double t_main = elapsed(start);
  const auto& s = main.summaries.at(0);

  ExperimentConfig bench;
  bench.solver = "local";
  bench.restarts = 50;
  bench.budget = 1'000'000;
  bench.trials = 50;
  bench.seed = derive(kSeed, 11);
  std::vector<double> rates;
  std::string table;
  for (const int n : {500, 1000, 2000}) {
    ExperimentConfig one = bench;
    one.m_list = {8};
    one.n_override[8] = n;
    const auto r = run_theorem_experiment(one);
    std::int64_t flips = 0;
    for (const auto& row : r.rows) flips += row.flips;
    rates.push_back(r.summaries.at(0).rate());
    table += fmt("n=%d rate %.2f mean flips %.0f; ", n, rates.back(), double(flips) / r.rows.size());
  }
  bool monotone = true;
  for (std::size_t k = 1; k < rates.size(); ++k) {
    const double se = std::sqrt(std::max(rates[k] * (1 - rates[k]), rates[k - 1] * (1 - rates[k - 1])) / 50.0);
    monotone = monotone && rates[k] >= rates[k - 1] - 2.0 * se;
  }
  return {s.n == 40 && s.successes >= 95 && t_main <= 600.0 && monotone,
          fmt("m=3 n=%d: %d/100 found in %.1f s; local search m=8: ", s.n, s.successes, t_main) + table +
              (monotone ? "monotone in n" : "NOT monotone in n")};
}

Outcome even_variant() {
  std::vector<oracle::Dense> cases{{{1, 1}},
                                   {{1}},
                                   {{0, 0, 0}, {0, 0, 0}},
                                   {{1, 1, 0, 0}, {0, 1, 1, 0}, {1, 1, 1, 1}},
                                   {{1, 0, 0}, {1, 1, 1}, {0, 1, 0}},
                                   {{1, 1, 1, 0, 0}, {0, 0, 1, 0, 0}}};
  for (int k = 0; cases.size() < 20; ++k) {
    cases.push_back(dense_rows(sample_bernoulli(1 + k % 3, 4 + k % 8, 0.5, derive(kSeed, 1100 + k))));
  }
  int ok = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto a = IncidenceMatrix::from_rows(cases[k]);
    const double exact = prob_exact(a, ParitySmoother::from(a), Eigen::VectorXi::Zero(a.rows())).to_double();
    const double reference = oracle::parity_point_probability(cases[k]);
    const auto e = prob_even_variant(a, 1 << 18, derive(kSeed, 1200 + k));
    ok += std::abs(e.value - exact) <= std::max(3.0 * e.std_error, 1e-3) && std::abs(exact - reference) <= 1e-12;
  }
  return {ok == 20, fmt("%d/20 instances agree (includes all-even and all-odd row cases)", ok)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"inversion oracle equivalence", inversion_oracle},
      {"product formula vs brute force", dhat_oracle},
      {"smoothing transform bounds", smoothing_bounds},
      {"spike dominance", spike_dominance},
      {"one-factor decay", one_factor_decay},
      {"far-region decay", far_region},
      {"gaussian comparator", gaussian_comparator},
      {"cancellation", cancellation},
      {"rho equals 2^-delta", rho_check},
      {"desk-scale regime experiment", theorem_regime},
      {"even-parity variant", even_variant},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = criteria[k].second();
    failed += !o.pass;
    std::printf("criterion %2zu %s %-30s %s [%.1f s]\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                o.detail.c_str(), elapsed(start));
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
