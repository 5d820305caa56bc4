// Pre-run for the quadratic approximation constant: the smallest power of
// two K with |ln D(theta) + 2 pi^2 theta^T A A^T theta| <= K n t^2 |theta|^4
// on every sampled (A, theta).
#include <cmath>
#include <cstdint>
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "fdisc/fourier.hpp"
#include "fdisc/harness.hpp"
#include "fdisc/parallel.hpp"
#include "fdisc/rng.hpp"
#include "fdisc/setsystem.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Calibrate the quadratic approximation constant"};
  std::uint64_t seed = 2024;
  int instances = 10000, m = 6, n = 400;
  double p = 0.5;
  unsigned threads = 0;
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--instances", instances)->capture_default_str();
  app.add_option("--m", m)->capture_default_str();
  app.add_option("--n", n)->capture_default_str();
  app.add_option("--p", p)->capture_default_str();
  app.add_option("--threads", threads)->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  fdisc::set_thread_count(threads);

  std::vector<double> ratios(instances, 0.0);
  fdisc::parallel_for(static_cast<std::size_t>(instances), [&](std::size_t k) {
    const std::uint64_t s = fdisc::derive(seed, k);
    const auto a = fdisc::sample_bernoulli(m, n, p, s);
    const double t = a.expected_frequency();
    fdisc::RngStream rng(s, 1);
    Eigen::VectorXd theta(m);
    for (int i = 0; i < m; ++i) theta(i) = rng.normal();
    theta *= std::pow(rng.uniform(), 1.0 / m) / (16.0 * std::sqrt(t) * theta.norm());
    const auto r = fdisc::check_quadratic_approx(a, theta, 1.0);
    ratios[k] = r.bound > 0.0 ? r.residual / r.bound : 0.0;
  });
  double worst = 0.0;
  for (const double v : ratios) worst = std::max(worst, v);
  const double k = std::exp2(std::ceil(std::log2(worst)));
  fdisc::Json out = {{"m", m}, {"n", n}, {"p", p}, {"instances", instances}, {"seed", seed},
                     {"largest_ratio", worst}, {"K", k}};
  std::cout << out.dump(2) << "\n";
  return 0;
}
