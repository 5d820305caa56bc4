#include "fdisc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fdisc/errors.hpp"
#include "fdisc/fourier.hpp"
#include "fdisc/integrate.hpp"
#include "fdisc/inversion.hpp"
#include "fdisc/parallel.hpp"
#include "fdisc/rng.hpp"
#include "fdisc/smoothing.hpp"
#include "fdisc/solvers.hpp"
#include "fdisc/torus.hpp"

namespace fdisc {
namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Json vec_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json vec_json(const Eigen::VectorXi& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json estimate_json(const Estimate& e) {
  return {{"value", e.value}, {"stderr", e.std_error}, {"samples", e.samples}, {"seed", e.seed}};
}

Eigen::VectorXd random_box(RngStream& rng, int m, double lo, double hi) {
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

Eigen::VectorXd random_ball(RngStream& rng, int m, double radius) {
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) v(i) = rng.normal();
  const double scale = radius * std::pow(rng.uniform(), 1.0 / m) / v.norm();
  return v * scale;
}

class Recorder {
 public:
  Recorder(std::string suite, std::uint64_t seed) : start_(Clock::now()) {
    report_.suite = std::move(suite);
    report_.seed = seed;
  }

  bool check(const std::string& name, bool ok, Json witness = Json::object()) {
    ++report_.checks_run;
    if (!ok) add_failure(name, std::move(witness));
    return ok;
  }

  // Records one evaluation of an inequality whose slack is `margin`.
  bool bound(const std::string& name, const std::string& domain, double margin, const Eigen::VectorXd& point,
             bool holds, Json witness = Json::object()) {
    auto it = std::find_if(report_.bounds.begin(), report_.bounds.end(),
                           [&](const BoundSummary& b) { return b.bound == name && b.domain == domain; });
    if (it == report_.bounds.end()) {
      report_.bounds.push_back({name, domain, 0, 0, std::numeric_limits<double>::infinity(), {}});
      it = std::prev(report_.bounds.end());
    }
    ++it->checks;
    if (margin < it->worst_margin) {
      it->worst_margin = margin;
      it->worst_point.assign(point.data(), point.data() + point.size());
    }
    if (!holds) {
      ++it->violations;
      witness["point"] = vec_json(point);
      witness["margin"] = margin;
    }
    return check(name, holds, std::move(witness));
  }

  Json& info() { return report_.info; }

  SuiteReport finish() {
    report_.runtime_s = seconds_since(start_);
    if (dropped_ > 0) report_.info["failures_not_listed"] = dropped_;
    return std::move(report_);
  }

 private:
  void add_failure(const std::string& name, Json witness) {
    if (report_.failures.size() >= 100) {
      ++dropped_;
      return;
    }
    witness["suite_seed"] = report_.seed;
    report_.failures.push_back({name, std::move(witness)});
  }

  SuiteReport report_;
  Clock::time_point start_;
  std::int64_t dropped_ = 0;
};

bool within(double value, double expected, double tol) { return std::abs(value - expected) <= tol; }

// ---------------------------------------------------------------- smoothing

void smoothing_suite(Recorder& rec, std::uint64_t seed) {
  for (int delta = 0; delta <= 12; ++delta) {
    const SmoothingSpec spec = build_pmf(delta);
    BigInt second = 0;
    for (int k = -delta; k <= delta; ++k) second += BigInt(k) * k * spec.weight(k);
    // Var = delta / 2 exactly: sum k^2 w_k = (delta / 2) 4^delta.
    rec.check("pmf_variance", second * 2 == BigInt(delta) * (BigInt(1) << (2 * delta)), {{"delta", delta}});
  }
  {
    const SmoothingSpec one = build_pmf(1);
    const SmoothingSpec two = build_pmf(2);
    rec.check("pmf_delta1", one.probability(-1) == DyadicRational(1, 2) && one.probability(0) == DyadicRational(1, 1));
    rec.check("pmf_delta2", two.probability(2) == DyadicRational(1, 4) && two.probability(1) == DyadicRational(1, 2) &&
                                two.probability(0) == DyadicRational(3, 3));
    rec.check("pmf_delta0", build_pmf(0).probability(0) == DyadicRational(1, 0));
  }

  double worst_transform = 0.0;
  for (int delta = 1; delta <= 8; ++delta) {
    const SmoothingSpec spec = build_pmf(delta);
    for (int k = 0; k < 1000; ++k) {
      const double theta = -0.5 + k / 1000.0;
      double direct = 0.0;
      for (int v = -delta; v <= delta; ++v) direct += spec.probability_double(v) * std::cos(2.0 * kPi * theta * v);
      const double dev = std::abs(direct - rhat_1d(delta, theta));
      worst_transform = std::max(worst_transform, dev);
      rec.check("transform_matches_pmf", dev <= 1e-12, {{"delta", delta}, {"theta", theta}, {"deviation", dev}});
    }
  }
  rec.info()["transform_max_deviation"] = worst_transform;

  rec.check("rhat_examples", rhat_1d(1, 0.0) == 1.0 && within(rhat_1d(1, 0.25), 0.5, 1e-15) && rhat_1d(3, 0.5) == 0.0);

  auto record = [&](int delta, const Eigen::VectorXd& theta, const RhatBoundReport& r, const std::string& tag) {
    const Json w = {{"delta", delta}};
    if (r.upper.applicable) {
      rec.bound("rhat_upper", tag + " |theta|_inf <= 1/2", r.upper.margin, theta, r.upper.holds, w);
    }
    if (r.lower.applicable) {
      rec.bound("rhat_lower", tag + " |theta|_inf <= 1/4", r.lower.margin, theta, r.lower.holds, w);
    }
    if (r.ratio.applicable) {
      rec.bound("rhat_shift_ratio", tag + " |theta|_inf <= 1/8", r.ratio.margin, theta, r.ratio.holds, w);
    }
  };
  for (int delta = 1; delta <= 8; ++delta) {
    for (int k = -500; k <= 500; ++k) {
      Eigen::VectorXd theta(1);
      theta(0) = k / 1000.0;
      record(delta, theta, check_rhat_bounds(delta, theta), "1-d grid step 1e-3,");
    }
  }
  for (int m = 2; m <= 6; ++m) {
    for (int delta = 1; delta <= 8; ++delta) {
      const std::uint64_t s = derive(seed, static_cast<std::uint64_t>(100 * m + delta));
      for (const double half : {0.5, 0.25, 0.125}) {
        for (const auto& theta : box_test_points(m, -half, half, 100, derive(s, static_cast<std::uint64_t>(8 * half)))) {
          record(delta, theta, check_rhat_bounds(delta, theta, s), "m in 2..6,");
        }
      }
    }
  }

  Json rhos = Json::array();
  for (int delta = 1; delta <= 12; ++delta) {
    const double r = rho(delta);
    rhos.push_back({{"delta", delta}, {"rho", r}, {"decay_constant", -std::log(r) / delta}});
    rec.check("rho_equals_2^-delta", within(r, std::ldexp(1.0, -delta), 1e-9), {{"delta", delta}, {"rho", r}});
    rec.check("rho_below_exp(-0.69 delta)", r <= std::exp(-0.69 * delta), {{"delta", delta}, {"rho", r}});
  }
  rec.info()["rho"] = rhos;

  {
    const ParitySmoother none{3, {}};
    const ParitySmoother one{2, {0}};
    Eigen::VectorXd theta(2);
    theta << 0.125, 0.3;
    rec.check("parity_rhat_no_odd_rows", parity_rhat(none, Eigen::VectorXd::Constant(3, 0.2)) == 1.0);
    rec.check("parity_rhat_eighth", within(parity_rhat(one, theta), std::sqrt(0.5), 1e-15));
    theta(0) = 0.25;
    rec.check("parity_rhat_quarter_zero", parity_rhat(one, theta) == 0.0);
  }

  for (const int delta : {1, 2}) {
    const SmoothingSpec spec = build_pmf(delta);
    constexpr int draws = 1'000'000;
    std::vector<int> counts(2 * delta + 1, 0);
    RngStream rng(derive(seed, 7000 + delta), 0);
    for (int k = 0; k < draws; ++k) ++counts[sample(spec, rng) + delta];
    for (int v = -delta; v <= delta; ++v) {
      const double p = spec.probability_double(v);
      const double freq = static_cast<double>(counts[v + delta]) / draws;
      const double se = std::sqrt(p * (1.0 - p) / draws);
      rec.check("sample_frequency", std::abs(freq - p) <= 5.0 * se,
                {{"delta", delta}, {"value", v}, {"frequency", freq}, {"probability", p}});
    }
  }
}

// ---------------------------------------------------------------- fourier

void fourier_suite(Recorder& rec, std::uint64_t seed) {
  {
    const auto zero = IncidenceMatrix::zeros(3, 5);
    rec.check("dhat_zero_matrix", dhat(zero, Eigen::Vector3d(0.1, -0.3, 0.45)) == 1.0);
    const auto single = IncidenceMatrix::from_rows({{1}});
    rec.check("dhat_single", within(dhat(single, Eigen::VectorXd::Constant(1, 0.125)), std::sqrt(0.5), 1e-15));
    const auto id = IncidenceMatrix::from_rows({{1, 0}, {0, 1}});
    rec.check("dhat_identity_zero", dhat(id, Eigen::Vector2d(0.25, 1.0 / 6.0)) == 0.0);
    const auto pair = IncidenceMatrix::from_rows({{1, 1}});
    rec.check("dhat_bruteforce_pair", std::abs(dhat_bruteforce(pair, Eigen::VectorXd::Constant(1, 0.25))) <= 1e-15);
    Smoother r1 = build_pmf(1);
    rec.check("xhat_single", within(xhat(single, r1, Eigen::VectorXd::Constant(1, 0.125)),
                                    std::sqrt(0.5) * (0.5 + 0.5 * std::sqrt(0.5)), 1e-15));
  }

  RngStream rng(derive(seed, 1), 0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int m = 1 + static_cast<int>(rng.below(4));
    const int n = 1 + static_cast<int>(rng.below(16));
    const double p = rng.uniform(0.1, 0.9);
    const std::uint64_t s = derive(seed, 1000 + k);
    const auto a = sample_bernoulli(m, n, p, s);
    const Eigen::VectorXd theta = random_box(rng, m, -0.5, 0.5);
    const double dev = std::abs(dhat(a, theta) - dhat_bruteforce(a, theta));
    worst = std::max(worst, dev);
    rec.check("dhat_matches_bruteforce", dev <= 1e-10,
              {{"m", m}, {"n", n}, {"p", p}, {"instance_seed", s}, {"theta", vec_json(theta)}, {"deviation", dev}});
  }
  rec.info()["bruteforce_max_deviation"] = worst;

  for (int k = 0; k < 200; ++k) {
    const int m = 1 + static_cast<int>(rng.below(6));
    const int n = 1 + static_cast<int>(rng.below(300));
    const std::uint64_t s = derive(seed, 2000 + k);
    const auto a = sample_bernoulli(m, n, 0.5, s);
    const Eigen::VectorXd theta = random_box(rng, m, -0.5, 0.5);
    Eigen::VectorXd shift(m);
    for (int i = 0; i < m; ++i) shift(i) = static_cast<double>(static_cast<int>(rng.below(5)) - 2);
    const Json w = {{"m", m}, {"n", n}, {"instance_seed", s}, {"theta", vec_json(theta)}};
    const SignedLog base = dhat_log(a, theta);
    const double d = base.value();
    rec.check("dhat_bounded", std::abs(d) <= 1.0, w);
    rec.check("dhat_even", std::abs(dhat(a, -theta) - d) <= 1e-12, w);
    const SignedLog shifted = dhat_log(a, theta + shift);
    rec.check("dhat_integer_periodic",
              shifted.sign == base.sign && std::abs(shifted.log_abs - base.log_abs) <= 1e-9 * std::max(1.0, std::abs(base.log_abs)), w);
    const SignedLog half = dhat_log(a, theta + 0.5 * shift);
    rec.check("abs_dhat_half_periodic",
              (half.sign == 0) == (base.sign == 0) && std::abs(half.log_abs - base.log_abs) <= 1e-9 * std::max(1.0, std::abs(base.log_abs)), w);
    rec.check("xhat_bounded", std::abs(xhat(a, build_pmf(1), theta)) <= 1.0, w);
    double previous = dhat_partial(a, theta, 0);
    bool monotone = previous == 1.0;
    for (int j = 1; j <= n; ++j) {
      const double next = dhat_partial(a, theta, j);
      monotone = monotone && next <= previous;
      previous = next;
    }
    rec.check("dhat_partial_monotone", monotone && within(previous, std::abs(d), 1e-12 + 1e-9 * std::abs(d)), w);
  }

  {
    rec.check("d2_examples", d2_to_lattice(Eigen::Vector2d(0, 0)) == 0.0 &&
                                 within(d2_to_lattice(Eigen::Vector2d(0.25, 0.25)), std::sqrt(2.0) / 4.0, 1e-15) &&
                                 within(d2_to_lattice(Eigen::Vector2d(0.4, 0.0)), 0.1, 1e-15));
  }

  // Quadratic approximation near the origin.
  const double spec_k = 256.0 * std::pow(kPi, 4) / 3.0;
  double worst_ratio = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::uint64_t s = derive(seed, 3000 + k);
    const auto a = sample_bernoulli(6, 400, 0.5, s);
    const double t = a.expected_frequency();
    const Eigen::VectorXd theta = random_ball(rng, 6, 1.0 / (16.0 * std::sqrt(t)));
    const auto r = check_quadratic_approx(a, theta, spec_k);
    const auto calibrated = check_quadratic_approx(a, theta, kQuadraticK);
    if (r.bound > 0.0) worst_ratio = std::max(worst_ratio, r.residual / (r.bound / spec_k));
    const Json w = {{"instance_seed", s}, {"theta", vec_json(theta)}, {"residual", r.residual}};
    rec.check("quadratic_approx_preconditions", r.preconditions_met, w);
    rec.bound("quadratic_approx", "m=6 n=400 p=1/2 K=256 pi^4/3", r.bound - r.residual, theta, r.ok, w);
    rec.bound("quadratic_approx", "m=6 n=400 p=1/2 K=calibrated", calibrated.bound - calibrated.residual, theta,
              calibrated.ok, w);
  }
  rec.info()["quadratic_smallest_k_seen"] = worst_ratio;
  rec.info()["quadratic_calibrated_k"] = kQuadraticK;
  {
    const auto single = IncidenceMatrix::from_rows({{1}});
    const auto r = check_quadratic_approx(single, Eigen::VectorXd::Constant(1, 0.02), spec_k);
    rec.check("quadratic_single_column", r.residual <= spec_k * std::pow(0.02, 4));
    const auto zero = check_quadratic_approx(sample_bernoulli(6, 400, 0.5, seed), Eigen::VectorXd::Zero(6), 0.0);
    rec.check("quadratic_origin", zero.ok && zero.residual == 0.0);
  }

  // theta^T A A^T theta <= n m |theta|^2 / 2 for p <= 1/2, via the top eigenvalue.
  for (int k = 0; k < 200; ++k) {
    const int m = 2 + static_cast<int>(rng.below(7));
    const int n = 50 + static_cast<int>(rng.below(451));
    const double p = rng.uniform(0.05, 0.5);
    const std::uint64_t s = derive(seed, 4000 + k);
    const auto a = sample_bernoulli(m, n, p, s);
    const Eigen::MatrixXd sigma = covariance_empirical(a).cast<double>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma, Eigen::EigenvaluesOnly);
    const double top = eig.eigenvalues().maxCoeff();
    Eigen::VectorXd point(3);
    point << m, n, p;
    rec.bound("quadratic_form_sandwich", "p <= 1/2, m in 2..8", 0.5 * n * m - top, point, top <= 0.5 * n * m,
              {{"instance_seed", s}});
  }

  // Central mass against the Gaussian comparator with covariance n m I.
  Smoother r1 = build_pmf(1);
  for (int m = 2; m <= 4; ++m) {
    for (int k = 0; k < 3; ++k) {
      const int n = 200;
      const std::uint64_t s = derive(seed, 5000 + 10 * m + k);
      const auto a = sample_bernoulli(m, n, 0.5, s);
      const DhatKernel kernel(a);
      const Estimate e = integrate_mc(
          [&](const ThetaPoint& th) { return kernel.value(th.coords()) * rhat_md(1, th.coords()); },
          Region::origin_ball(1.0 / (kPi * std::sqrt(static_cast<double>(n)))), m, 1 << 18, derive(s, 1));
      const double lower = 0.5 * std::pow(2.0 * kPi * n * m, -0.5 * m);
      Eigen::VectorXd point(2);
      point << m, n;
      rec.bound("central_mass_lower", "m in 2..4, n=200, delta=1", e.value + 3.0 * e.std_error - lower, point,
                e.value >= lower - 3.0 * e.std_error, {{"instance_seed", s}, {"estimate", estimate_json(e)}});
    }
  }
}

// ---------------------------------------------------------------- gaussian

void gaussian_suite(Recorder& rec, std::uint64_t seed) {
  const Eigen::MatrixXd i1 = Eigen::MatrixXd::Identity(1, 1);
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  rec.check("gaussian_fhat_origin", gaussian_fhat(i2, Eigen::VectorXd::Zero(2)) == 1.0);
  rec.check("gaussian_fhat_unit", within(gaussian_fhat(i1, Eigen::VectorXd::Ones(1)), std::exp(-2.0 * kPi * kPi), 1e-20));
  rec.check("gaussian_fhat_scaled",
            within(gaussian_fhat(2.0 * i2, Eigen::Vector2d(0.5, 0.0)), std::exp(-kPi * kPi), 1e-15));
  rec.check("gaussian_density_1d", within(gaussian_density_zero(i1), 1.0 / std::sqrt(2.0 * kPi), 1e-15));
  rec.check("gaussian_density_2d", within(gaussian_density_zero(i2), 1.0 / (2.0 * kPi), 1e-15));
  double previous = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (int k = 1; k <= 50; ++k) {
    const double value = gaussian_density_zero(0.25 * k * Eigen::MatrixXd::Identity(3, 3));
    monotone = monotone && value < previous;
    previous = value;
  }
  rec.check("gaussian_density_monotone", monotone);
  bool rejected = false;
  try {
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;
    gaussian_fhat(bad, Eigen::VectorXd::Zero(2));
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  rec.check("gaussian_rejects_indefinite", rejected);

  for (const int m : {2, 3}) {
    for (const double r : {1.0, 4.0}) {
      const Eigen::MatrixXd sigma = r * Eigen::MatrixXd::Identity(m, m);
      const double radius = std::sqrt(m / r) / kPi;
      const Estimate e = integrate_euclidean_ball([&](const Eigen::VectorXd& th) { return gaussian_fhat(sigma, th); },
                                                  m, radius, 1 << 20, derive(seed, 10 * m + static_cast<int>(r)));
      const double lower = 0.5 * std::pow(2.0 * kPi * r, -0.5 * m);
      Eigen::VectorXd point(2);
      point << m, r;
      rec.bound("gaussian_ball_mass", "Sigma = r I, radius sqrt(m/r)/pi", e.value + 3.0 * e.std_error - lower, point,
                e.value >= lower - 3.0 * e.std_error, {{"estimate", estimate_json(e)}});
    }
  }

  for (const int m : {2, 8}) {
    RngStream rng(derive(seed, 100 + m), 0);
    constexpr int draws = 100000;
    std::vector<double> norms(draws);
    for (auto& x : norms) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        const double g = rng.normal();
        s += g * g;
      }
      x = std::sqrt(s);
    }
    for (const double lambda : {1.0, 2.0, 3.0}) {
      const double cut = std::sqrt(static_cast<double>(m)) + lambda;
      const double freq = static_cast<double>(std::count_if(norms.begin(), norms.end(), [&](double v) { return v > cut; })) / draws;
      const double bound = 2.0 * std::exp(-lambda * lambda / 2.0);
      Eigen::VectorXd point(2);
      point << m, lambda;
      rec.bound("gaussian_norm_tail", "m in {2,8}, lambda in {1,2,3}", bound - freq, point, freq <= bound);
    }
  }

  {
    const Estimate cube = integrate_mc([](const ThetaPoint&) { return 1.0; }, Region::full_cube(), 3, 5000, seed);
    rec.check("integrate_constant_cube", cube.value == 1.0 && cube.std_error == 0.0);
    const double r = 0.2;
    const Estimate ball = integrate_mc([](const ThetaPoint&) { return 1.0; }, Region::origin_ball(r), 2, 50000, seed);
    rec.check("integrate_ball_volume", within(ball.value, kPi * r * r, 1e-12));
    const Estimate far = integrate_mc([](const ThetaPoint&) { return 1.0; }, Region::far_from_lattice(r), 2, 1 << 18, seed);
    const double volume = *Region::far_from_lattice(r).volume(2);
    rec.check("integrate_far_volume", std::abs(far.value - volume) <= 3.0 * far.std_error,
              {{"estimate", estimate_json(far)}, {"volume", volume}});
    const Estimate near = integrate_mc([](const ThetaPoint&) { return 1.0; }, Region::near_lattice(r), 2, 1 << 18, seed);
    const double near_volume = *Region::near_lattice(r).volume(2);
    rec.check("integrate_near_volume", std::abs(near.value - near_volume) <= 3.0 * near.std_error,
              {{"estimate", estimate_json(near)}, {"volume", near_volume}});
  }
}

// ---------------------------------------------------------------- spike

double largest_dominance_radius(int m, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < m; ++i) {
    for (const double sgn : {-1.0, 1.0}) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
      e(i) = sgn;
      dirs.push_back(e);
    }
  }
  for (auto& p : box_test_points(m, -1.0, 1.0, 50, seed)) {
    if (p.norm() > 0.0) dirs.push_back(p / p.norm());
  }
  double last = 0.0;
  for (int k = 1; k <= 128; ++k) {
    const double r = k / 512.0;
    for (const auto& d : dirs) {
      if (!spike_dominance_r(1, r * d).dominates) return last;
    }
    last = r;
  }
  return last;
}

void spike_suite(Recorder& rec, std::uint64_t seed) {
  Json radii = Json::object();
  for (int m = 1; m <= 8; ++m) {
    const auto points = ball_test_points(m, kSpikeRadius, 1000, 10, derive(seed, m));
    for (const auto& theta : points) {
      const auto sd = spike_dominance_r(1, theta);
      rec.bound("spike_dominance_R", "delta=1, |theta|_2 <= 1/16, m in 1..8", sd.lhs - sd.rhs, theta, sd.dominates);
    }
    radii[std::to_string(m)] = largest_dominance_radius(m, derive(seed, 50 + m));
  }
  rec.info()["largest_dominance_radius"] = radii;

  const Smoother r1 = build_pmf(1);
  {
    const auto a = sample_bernoulli(1, 50, 0.5, derive(seed, 99));
    const auto sd = spike_dominance_x(a, r1, Eigen::VectorXd::Constant(1, 0.01));
    const double ratio = std::exp(sd.log_rhs - sd.log_lhs);
    const double expected = 2.0 * (rhat_1d(1, 0.51) + rhat_1d(1, -0.49)) / rhat_1d(1, 0.01);
    rec.check("spike_x_m1_example", sd.dominates && within(ratio, expected, 1e-9 * expected));
    const auto origin = spike_dominance_x(a, r1, Eigen::VectorXd::Zero(1));
    rec.check("spike_x_origin", origin.dominates && origin.log_lhs == 0.0);
  }
  for (int k = 0; k < 100; ++k) {
    const std::uint64_t s = derive(seed, 200 + k);
    const auto a = sample_bernoulli(6, 200, 0.5, s);
    for (const auto& theta : ball_test_points(6, kSpikeRadius, 40, 2, derive(s, 1))) {
      const auto sd = spike_dominance_x(a, r1, theta);
      rec.bound("spike_dominance_X", "delta=1, m=6, n=200, p=1/2, |theta|_2 <= 1/16", sd.log_lhs - sd.log_rhs, theta,
                sd.dominates, {{"instance_seed", s}});
      rec.check("abs_dhat_lattice_periodic", sd.periodic, {{"instance_seed", s}, {"theta", vec_json(theta)}});
    }
  }
}

// ---------------------------------------------------------------- decay

void far_region_battery(Recorder& rec, std::uint64_t seed, int instances, std::int64_t samples) {
  const std::vector<int> ns{500, 1000, 2000};
  Json table = Json::array();
  std::vector<double> mean_log;
  for (const int n : ns) {
    int within_bound = 0;
    double log_sum = 0.0;
    for (int k = 0; k < instances; ++k) {
      const std::uint64_t s = derive(seed, static_cast<std::uint64_t>(n) * 1000 + k);
      const auto a = sample_bernoulli(4, n, 0.5, s);
      const double delta = 1.0 / (16.0 * std::sqrt(a.expected_frequency()));
      const auto r = far_region_integral(a, delta, samples, derive(s, 1));
      rec.check("far_side_conditions", r.side_conditions, {{"instance_seed", s}, {"n", n}});
      within_bound += r.integral.value + 3.0 * r.integral.std_error <= r.bound;
      log_sum += std::log(std::max(r.integral.value, std::numeric_limits<double>::min()));
      table.push_back({{"n", n}, {"instance_seed", s}, {"estimate", estimate_json(r.integral)}, {"bound", r.bound}});
    }
    mean_log.push_back(log_sum / instances);
    const double fraction = static_cast<double>(within_bound) / instances;
    rec.check("far_region_bound_90pct", fraction >= 0.9, {{"n", n}, {"fraction", fraction}});
  }
  for (std::size_t k = 1; k < ns.size(); ++k) {
    rec.check("far_region_log_decreasing", mean_log[k] < mean_log[k - 1],
              {{"n", ns[k]}, {"mean_log", mean_log[k]}, {"previous", mean_log[k - 1]}});
  }
  rec.info()["far_region"] = table;
  rec.info()["far_region_mean_log"] = mean_log;
}

void decay_suite(Recorder& rec, std::uint64_t seed) {
  constexpr double tol = 1e-12;
  {
    const double v = one_factor_abs_cos_exact(Eigen::VectorXd::Constant(1, 0.25), 0.5);
    rec.check("one_factor_example_m1", within(v, 0.5, 1e-15) && v <= large_entry_bound(Eigen::VectorXd::Constant(1, 0.25), 0.5));
    const Eigen::VectorXd eighth = Eigen::VectorXd::Constant(2, 0.125);
    const double direct = 0.25 * (1.0 + 2.0 * std::abs(std::cos(kPi / 4.0)) + std::abs(std::cos(kPi / 2.0)));
    const double v2 = one_factor_abs_cos_exact(eighth, 0.5);
    rec.check("one_factor_example_m2", within(v2, direct, 1e-15) && v2 <= one_factor_bound(eighth, 0.5, kOneFactorC));
    rec.check("one_factor_origin", within(one_factor_abs_cos_exact(Eigen::VectorXd::Zero(3), 0.3), 1.0, 1e-12));
  }

  RngStream rng(derive(seed, 1), 0);
  for (int k = 0; k < 1000; ++k) {
    const int m = 1 + static_cast<int>(rng.below(14));
    const double p = rng.uniform(0.0, 0.5);
    const Eigen::VectorXd theta = random_box(rng, m, -0.25, 0.25) * rng.uniform();
    const double e = expected_abs_cos(theta, p);
    const double b = large_entry_bound(theta, p);
    rec.bound("one_factor_large_entry", "|theta|_inf <= 1/4, p <= 1/2, m <= 14", b - e, theta, e <= b + tol,
              {{"p", p}});
  }
  // Outside p <= 1/2 the inequality can fail (all-ones rows cancel); count only.
  {
    int violations = 0;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const int m = 1 + static_cast<int>(rng.below(14));
      const double p = rng.uniform(0.5, 1.0);
      const Eigen::VectorXd theta = random_box(rng, m, -0.25, 0.25) * rng.uniform();
      const double margin = large_entry_bound(theta, p) - expected_abs_cos(theta, p);
      violations += margin < -tol;
      worst = std::min(worst, margin);
    }
    rec.info()["large_entry_p_above_half"] = {{"samples", 1000}, {"violations", violations}, {"worst_margin", worst}};
  }
  for (int k = 0; k < 1000; ++k) {
    const int m = 1 + static_cast<int>(rng.below(14));
    const double p = rng.uniform(0.0, 0.5);
    Eigen::VectorXd theta = random_box(rng, m, -0.25, 0.25);
    const double limit = std::sqrt(kSmallL2B / std::max(p, 1e-300));
    if (theta.norm() > limit) theta *= limit / theta.norm();
    theta *= rng.uniform();
    const double s = rng.uniform(-kPi, kPi);
    const double e = expected_abs_cos_centered(theta, p, s);
    const double b = small_l2_bound(theta, p);
    rec.bound("one_factor_small_l2_shifted", "|theta|_inf <= 1/4, p <= 1/2, p|theta|^2 <= b=1e-3, any s", b - e, theta,
              e <= b + tol, {{"p", p}, {"s", s}});
  }
  for (int k = 0; k < 1000; ++k) {
    const int m = 1 + static_cast<int>(rng.below(14));
    const double p = rng.uniform(0.0, 0.5);
    const Eigen::VectorXd theta = random_box(rng, m, -0.25, 0.25) * rng.uniform();
    const double e = one_factor_abs_cos_exact(theta, p);
    const double b = one_factor_bound(theta, p, kOneFactorC);
    rec.bound("one_factor_summary", "|theta|_inf <= 1/4, p <= 1/2, c=1e-3", b - e, theta, e <= b + tol, {{"p", p}});
  }

  {
    const auto zero = IncidenceMatrix::zeros(2, 5);
    const auto r = far_region_integral(zero, 0.1, 1 << 18, derive(seed, 2));
    const double volume = *Region::far_from_lattice(0.1).volume(2);
    rec.check("far_region_zero_matrix_volume",
              r.calibration_only && std::abs(r.integral.value - volume) <= 3.0 * r.integral.std_error,
              {{"estimate", estimate_json(r.integral)}, {"volume", volume}});
  }
  far_region_battery(rec, derive(seed, 3), 20, 1 << 17);
}

// ---------------------------------------------------------------- inversion

void inversion_suite(Recorder& rec, std::uint64_t seed) {
  const Smoother r0 = build_pmf(0);
  const Smoother r1 = build_pmf(1);
  const Eigen::VectorXi zero1 = Eigen::VectorXi::Zero(1);
  {
    const auto pair = IncidenceMatrix::from_rows({{1, 1}});
    const auto single = IncidenceMatrix::from_rows({{1}});
    rec.check("prob_exact_pair", prob_exact(pair, r1, zero1) == DyadicRational(1, 2));
    rec.check("prob_exact_single", prob_exact(single, r1, zero1) == DyadicRational(1, 2));
    rec.check("prob_exact_zero_matrix", prob_exact(IncidenceMatrix::zeros(1, 3), r0, zero1) == DyadicRational(1, 0));
  }

  RngStream rng(derive(seed, 1), 0);
  for (int k = 0; k < 10; ++k) {
    const int m = 1 + static_cast<int>(rng.below(2));
    const int n = 1 + static_cast<int>(rng.below(10));
    const int delta = 1 + static_cast<int>(rng.below(2));
    const std::uint64_t s = derive(seed, 100 + k);
    const auto a = sample_bernoulli(m, n, 0.5, s);
    const Smoother sm = build_pmf(delta);
    const int reach = n + delta;
    DyadicRational total;
    bool symmetric = true;
    Eigen::VectorXi lambda(m);
    std::vector<int> digits(m, -reach);
    for (;;) {
      for (int i = 0; i < m; ++i) lambda(i) = digits[i];
      const auto pr = prob_exact(a, sm, lambda);
      total = total + pr;
      if (k < 4) symmetric = symmetric && pr == prob_exact(a, sm, (-lambda).eval());
      int i = 0;
      while (i < m && ++digits[i] > reach) digits[i++] = -reach;
      if (i == m) break;
    }
    const Json w = {{"m", m}, {"n", n}, {"delta", delta}, {"instance_seed", s}};
    rec.check("prob_exact_total_one", total == DyadicRational(1, 0), w);
    rec.check("prob_exact_symmetric", symmetric, w);
  }

  for (int k = 0; k < 50; ++k) {
    const int m = 1 + static_cast<int>(rng.below(3));
    const int n = 4 + static_cast<int>(rng.below(9));
    const double p = rng.coin() ? 0.3 : 0.5;
    const std::uint64_t s = derive(seed, 200 + k);
    const auto a = sample_bernoulli(m, n, p, s);
    const Eigen::VectorXi lambda = Eigen::VectorXi::Zero(m);
    const double exact = prob_exact(a, r1, lambda).to_double();
    const auto est = prob_fourier_mc(a, r1, lambda, 1'000'000, derive(s, 1));
    const double gap = std::abs(est.real.value - exact);
    const Json w = {{"m", m}, {"n", n}, {"p", p}, {"instance_seed", s}, {"exact", exact},
                    {"estimate", estimate_json(est.real)}};
    rec.check("inversion_matches_exact", gap <= std::max(3.0 * est.real.std_error, 1e-3), w);
    rec.check("inversion_imaginary_vanishes", est.imaginary_consistent(), w);
  }
  {
    const auto a = sample_bernoulli(2, 6, 0.5, derive(seed, 300));
    const Eigen::VectorXi far_lambda = Eigen::VectorXi::Constant(2, 9);
    const auto est = prob_fourier_mc(a, r1, far_lambda, 1 << 18, derive(seed, 301));
    rec.check("inversion_unreachable_lambda", std::abs(est.real.value) <= 3.0 * est.real.std_error,
              {{"estimate", estimate_json(est.real)}});
    const auto pair = IncidenceMatrix::from_rows({{1, 1}});
    const Eigen::VectorXi two = Eigen::VectorXi::Constant(1, 2);
    const double exact = prob_exact(pair, r1, two).to_double();
    const auto e2 = prob_fourier_mc(pair, r1, two, 1 << 18, derive(seed, 302));
    rec.check("inversion_pair_lambda2", std::abs(e2.real.value - exact) <= std::max(3.0 * e2.real.std_error, 1e-3),
              {{"exact", exact}, {"estimate", estimate_json(e2.real)}});
  }

  // Column permutations leave the estimate unchanged up to noise.
  for (int k = 0; k < 5; ++k) {
    const std::uint64_t s = derive(seed, 400 + k);
    const auto a = sample_bernoulli(2, 10, 0.5, s);
    Eigen::MatrixXi dense = a.to_dense();
    Eigen::MatrixXi permuted(dense.rows(), dense.cols());
    RngStream prng(s, 1);
    std::vector<int> order(dense.cols());
    for (int j = 0; j < dense.cols(); ++j) order[j] = j;
    std::shuffle(order.begin(), order.end(), prng);
    for (int j = 0; j < dense.cols(); ++j) permuted.col(j) = dense.col(order[j]);
    const auto b = IncidenceMatrix::from_dense(permuted);
    const Eigen::VectorXi lambda = Eigen::VectorXi::Zero(2);
    const auto e1 = prob_fourier_mc(a, r1, lambda, 1 << 17, derive(s, 2));
    const auto e2 = prob_fourier_mc(b, r1, lambda, 1 << 17, derive(s, 3));
    const double se = std::hypot(e1.real.std_error, e2.real.std_error);
    rec.check("inversion_column_permutation", std::abs(e1.real.value - e2.real.value) <= 3.0 * se,
              {{"instance_seed", s}});
  }

  // Parity smoother on the quarter cube.
  std::vector<IncidenceMatrix> cases{IncidenceMatrix::from_rows({{1, 1}}), IncidenceMatrix::from_rows({{1}}),
                                     IncidenceMatrix::zeros(2, 3), IncidenceMatrix::from_rows({{1, 1, 0}, {0, 1, 1}}),
                                     IncidenceMatrix::from_rows({{1, 0, 0}, {1, 1, 1}})};
  for (int k = 0; k < 15; ++k) cases.push_back(sample_bernoulli(1 + k % 3, 4 + k % 9, 0.5, derive(seed, 500 + k)));
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& a = cases[k];
    const Smoother parity = ParitySmoother::from(a);
    const double exact = prob_exact(a, parity, Eigen::VectorXi::Zero(a.rows())).to_double();
    const Estimate e = prob_even_variant(a, 1 << 18, derive(seed, 600 + k));
    rec.check("even_variant_matches_exact", std::abs(e.value - exact) <= std::max(3.0 * e.std_error, 1e-3),
              {{"case", k}, {"exact", exact}, {"estimate", estimate_json(e)}});
  }

  {
    const auto c0 = cancellation_check(Eigen::VectorXi::Zero(3), 1 << 16, seed);
    rec.check("cancellation_zero", c0.real.value == 1.0 && c0.imag.value == 0.0 && c0.real.std_error == 0.0);
    const std::vector<std::vector<int>> ts{{1}, {3, -2}, {0, 1}, {2, 2, -1}, {-5}};
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const Eigen::VectorXi t = Eigen::Map<const Eigen::VectorXi>(ts[k].data(), static_cast<Eigen::Index>(ts[k].size()));
      const auto c = cancellation_check(t, 100000, derive(seed, 700 + k));
      rec.check("cancellation_nonzero",
                std::abs(c.real.value) <= 3.0 * c.real.std_error && std::abs(c.imag.value) <= 3.0 * c.imag.std_error,
                {{"t", vec_json(t)}, {"real", estimate_json(c.real)}, {"imag", estimate_json(c.imag)}});
    }
  }

  // Pr[X = 0] > 0 means some coloring has disc <= 1; the solvers must find one.
  for (int k = 0; k < 10; ++k) {
    const std::uint64_t s = derive(seed, 800 + k);
    const auto a = sample_bernoulli(3, 12, 0.5, s);
    const auto pr = prob_exact(a, r1, Eigen::VectorXi::Zero(3));
    if (pr.numerator() == 0) continue;
    const auto ex = exhaustive_min_disc(a);
    const auto rs = random_search(a, 1, 1'000'000, derive(s, 1));
    const auto ls = local_search(a, 1, 50, 10'000, derive(s, 2));
    rec.check("positive_probability_has_witness", ex.disc <= 1 && rs.found && ls.found, {{"instance_seed", s}});
  }
}

// ---------------------------------------------------------------- assembly

void assembly_suite(Recorder& rec, std::uint64_t seed) {
  const Smoother r1 = build_pmf(1);
  {
    const std::uint64_t s = derive(seed, 1);
    const auto a = sample_bernoulli(4, 1200, 0.5, s);
    const auto r = three_region_assembly(a, r1, 1 << 18, derive(s, 1));
    const Json w = {{"instance_seed", s}, {"central", estimate_json(r.central)}, {"near", estimate_json(r.near)},
                    {"far", estimate_json(r.far)}};
    rec.check("assembly_central_positive", r.central_positive, w);
    rec.check("assembly_holds", r.holds, w);
    rec.info()["assembly_m4_n1200"] = w;
  }
  {
    const auto zero = IncidenceMatrix::zeros(2, 4);
    const auto r = three_region_assembly(zero, r1, 1 << 16, derive(seed, 2), 0.1);
    const Estimate central = integrate_mc([](const ThetaPoint& th) { return rhat_md(1, th.coords()); },
                                          Region::origin_ball(0.1), 2, 1 << 16, derive(derive(seed, 2), 0));
    rec.check("assembly_zero_matrix_central", r.central.value > 0.0 && r.central.value == central.value);
    rec.check("assembly_zero_matrix_near_small", std::abs(r.near.value) < 0.5 * r.central.value);
    bool centers_vanish = true;
    for (int s1 = 0; s1 < 2; ++s1) {
      for (int s2 = 0; s2 < 2; ++s2) {
        if (s1 + s2 == 0) continue;
        centers_vanish = centers_vanish && rhat_md(1, Eigen::Vector2d(0.5 * s1, 0.5 * s2)) == 0.0;
      }
    }
    rec.check("assembly_zero_matrix_centers", centers_vanish);
  }
  {
    std::vector<double> ratios;
    Json trend = Json::array();
    for (const int n : {300, 600, 1200}) {
      const std::uint64_t s = derive(seed, 10 + n);
      const auto a = sample_bernoulli(4, n, 0.5, s);
      const auto r = three_region_assembly(a, r1, 1 << 18, derive(s, 1));
      const double ratio = r.far.value > 0.0 ? r.central.value / r.far.value : std::numeric_limits<double>::infinity();
      ratios.push_back(ratio);
      trend.push_back({{"n", n}, {"central", r.central.value}, {"far", r.far.value}, {"ratio", ratio}});
    }
    rec.info()["assembly_trend"] = trend;
    for (std::size_t k = 1; k < ratios.size(); ++k) {
      rec.check("assembly_ratio_increasing", ratios[k] > ratios[k - 1], trend);
    }
  }

  // Solver sanity.
  {
    const auto pair = IncidenceMatrix::from_rows({{1, 1}});
    const auto ex = exhaustive_min_disc(pair);
    rec.check("exhaustive_pair", ex.disc == 0 && ex.witness == Coloring::parse("+-"));
    rec.check("exhaustive_single", exhaustive_min_disc(IncidenceMatrix::from_rows({{1}})).disc == 1);
    rec.check("exhaustive_identity",
              exhaustive_min_disc(IncidenceMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})).disc == 1);
    const auto z = local_search(IncidenceMatrix::zeros(3, 5), 0, 1, 10, seed);
    rec.check("local_zero_matrix", z.found && z.disc == 0 && z.flips_used == 0);
  }
  {
    const auto pair = IncidenceMatrix::from_rows({{1, 1}});
    constexpr int runs = 10000;
    int hits = 0;
    for (int k = 0; k < runs; ++k) hits += random_search(pair, 0, 1, derive(seed, 100000 + k)).found;
    const double freq = static_cast<double>(hits) / runs;
    rec.check("random_search_single_trial_rate", std::abs(freq - 0.5) <= 5.0 * std::sqrt(0.25 / runs),
              {{"frequency", freq}});
    int eight = 0;
    for (int k = 0; k < 200; ++k) eight += random_search(pair, 0, 8, derive(seed, 200000 + k)).found;
    rec.check("random_search_budget_eight", eight == 200, {{"successes", eight}});
  }
  {
    int checked = 0;
    int successes = 0;
    for (int k = 0; checked < 100 && k < 2000; ++k) {
      const std::uint64_t s = derive(seed, 300000 + k);
      const auto a = sample_bernoulli(4, 16, 0.5, s);
      if (exhaustive_min_disc(a).disc != 0) continue;
      ++checked;
      const auto r = local_search(a, 1, 50, 100000, derive(s, 1));
      successes += r.found;
    }
    rec.check("local_search_matches_oracle", checked == 100 && successes >= 99,
              {{"instances", checked}, {"successes", successes}});
  }
  {
    int found = 0;
    for (int k = 0; k < 100; ++k) {
      const std::uint64_t s = derive(seed, 400000 + k);
      const auto a = sample_bernoulli(3, 24, 0.5, s);
      const auto r = random_search(a, 1, 1'000'000, derive(s, 1));
      const auto ex = exhaustive_min_disc(a);
      if (r.found) {
        ++found;
        rec.check("witness_not_below_oracle", ex.disc <= r.disc, {{"instance_seed", s}});
      }
      rec.check("exhaustive_parity_floor", odd_rows(a).empty() || ex.disc >= 1, {{"instance_seed", s}});
    }
    rec.check("random_search_m3_n24", found >= 95, {{"successes", found}});
  }

  // Regime experiment at desk scale.
  {
    ExperimentConfig cfg;
    cfg.m_list = {3};
    cfg.trials = 100;
    cfg.seed = derive(seed, 5);
    const auto result = run_theorem_experiment(cfg);
    rec.check("regime_m3_success", result.summaries.at(0).successes >= 95, result.to_json()["summaries"]);
    bool guarded = false;
    try {
      ExperimentConfig big = cfg;
      big.c = 1e7;
      run_theorem_experiment(big);
    } catch (const SizeLimitExceeded&) {
      guarded = true;
    }
    rec.check("regime_size_guard", guarded);
    ExperimentConfig none = cfg;
    none.trials = 0;
    const auto empty = run_theorem_experiment(none);
    rec.check("regime_zero_trials", empty.rows.empty());
  }
  {
    ExperimentConfig cfg;
    cfg.solver = "local";
    cfg.budget = 1'000'000;
    cfg.restarts = 50;
    cfg.trials = 10;
    cfg.seed = derive(seed, 6);
    std::vector<double> rates;
    std::vector<int> trials;
    Json table = Json::array();
    for (const int n : {500, 1000, 2000}) {
      ExperimentConfig one = cfg;
      one.m_list = {8};
      one.n_override[8] = n;
      const auto result = run_theorem_experiment(one);
      rates.push_back(result.summaries.at(0).rate());
      trials.push_back(result.summaries.at(0).trials);
      table.push_back({{"n", n}, {"rate", rates.back()}});
    }
    rec.info()["local_search_m8"] = table;
    for (std::size_t k = 1; k < rates.size(); ++k) {
      const double se = std::sqrt(std::max(rates[k] * (1 - rates[k]), rates[k - 1] * (1 - rates[k - 1])) /
                                  std::max(1, trials[k]));
      rec.check("success_monotone_in_n", rates[k] >= rates[k - 1] - 2.0 * se, table);
    }
  }

  {
    const auto probe = run_lowerbound_probe(10, 10, 0.5, 50, derive(seed, 7));
    rec.info()["lowerbound_m10_n10"] = probe.to_json();
    rec.check("counting_bound_dominates", probe.mean_good_colorings <= probe.counting_bound, probe.to_json());
    const auto opposite = run_lowerbound_probe(1, 24, 0.5, 50, derive(seed, 8));
    rec.check("lowerbound_single_row", opposite.fraction_within_one >= 0.95);
    bool guarded = false;
    try {
      run_lowerbound_probe(2, 25, 0.5, 1, seed);
    } catch (const SizeLimitExceeded&) {
      guarded = true;
    }
    rec.check("lowerbound_size_guard", guarded);
    rec.check("counting_bound_examples",
              within(counting_bound(1, 1, 1, 1.0), 2.0, 1e-12) && within(counting_bound(8, 16, 1, 1.0), 1.0, 1e-12));
  }
}

}  // namespace

int regime_columns(int m, double c) {
  if (m < 2) throw std::invalid_argument("the regime n = C m^2 ln m needs m >= 2");
  if (!(c > 0.0)) throw std::invalid_argument("C must be positive");
  const double n = std::ceil(c * m * m * std::log(static_cast<double>(m)));
  if (n > static_cast<double>(kMaxColumns)) {
    throw SizeLimitExceeded("n = ceil(C m^2 ln m) exceeds the cap of " + std::to_string(kMaxColumns));
  }
  return static_cast<int>(n);
}

Json ExperimentConfig::to_json() const {
  Json overrides = Json::object();
  for (const auto& [m, n] : n_override) overrides[std::to_string(m)] = n;
  return {{"m", m_list},         {"C", c},         {"p", p},
          {"trials", trials},    {"solver", solver}, {"budget", budget},
          {"restarts", restarts}, {"seed", seed},   {"out", output_path},
          {"n_override", overrides}};
}

std::string csv_line(const TrialRecord& r) {
  std::ostringstream out;
  out.precision(17);
  out << r.m << ',' << r.n << ',' << r.p << ',' << r.c << ',' << r.trial << ',' << r.seed << ',' << r.solver << ','
      << r.budget << ',' << (r.found ? 1 : 0) << ',' << r.disc << ',' << r.flips;
  return out.str();
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) out << csv_line(row) << '\n';
}

Json ExperimentResult::to_json() const {
  Json per_m = Json::array();
  for (const auto& s : summaries) {
    per_m.push_back({{"m", s.m},
                     {"n", s.n},
                     {"t", s.t},
                     {"trials", s.trials},
                     {"successes", s.successes},
                     {"success_rate", s.rate()},
                     {"n_regime", s.n_regime},
                     {"t_regime", s.t_regime}});
  }
  return {{"config", config.to_json()}, {"summaries", per_m}, {"runtime_s", runtime_s}};
}

ExperimentResult run_theorem_experiment(const ExperimentConfig& config) {
  const auto start = Clock::now();
  if (config.trials < 0) throw std::invalid_argument("trials must be nonnegative");
  if (!(config.p >= 0.0 && config.p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (config.solver != "random" && config.solver != "local" && config.solver != "exhaustive") {
    throw std::invalid_argument("unknown solver '" + config.solver + "'");
  }
  ExperimentResult result;
  result.config = config;

  struct Job {
    int m;
    int n;
    int trial;
  };
  std::vector<Job> jobs;
  for (const int m : config.m_list) {
    const int regime = regime_columns(m, config.c);
    const auto it = config.n_override.find(m);
    const int n = it != config.n_override.end() ? it->second : regime;
    if (n < 1 || n > kMaxColumns) throw SizeLimitExceeded("n out of range");
    RegimeSummary s;
    s.m = m;
    s.n = n;
    s.t = config.p * m;
    s.n_regime = n >= config.c * m * m * std::log(static_cast<double>(m));
    s.t_regime = s.t >= config.c * std::log(static_cast<double>(n));
    result.summaries.push_back(s);
    for (int k = 0; k < config.trials; ++k) jobs.push_back({m, n, k});
  }

  result.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t idx) {
    const Job& job = jobs[idx];
    const std::uint64_t s = derive(derive(config.seed, static_cast<std::uint64_t>(job.m)), static_cast<std::uint64_t>(job.trial));
    const auto a = sample_bernoulli(job.m, job.n, config.p, s);
    const std::uint64_t solver_seed = derive(s, 1);
    TrialRecord row{job.m, job.n, config.p, config.c, job.trial, s, config.solver, config.budget, false, 0, 0};
    if (config.solver == "random") {
      const auto r = random_search(a, 1, config.budget, solver_seed);
      row.found = r.found;
      row.disc = r.disc;
      row.flips = r.flips_used;
    } else if (config.solver == "local") {
      const auto r = local_search(a, 1, config.restarts, config.budget, solver_seed);
      row.found = r.found;
      row.disc = r.disc;
      row.flips = r.flips_used;
    } else {
      const auto r = exhaustive_min_disc(a);
      row.found = r.disc <= 1;
      row.disc = r.disc;
    }
    result.rows[idx] = row;
  });
  std::size_t idx = 0;
  for (auto& s : result.summaries) {
    for (int k = 0; k < config.trials; ++k, ++idx) {
      ++s.trials;
      s.successes += result.rows[idx].found;
    }
  }
  result.runtime_s = seconds_since(start);
  return result;
}

Json LowerboundReport::to_json() const {
  Json hist = Json::object();
  for (const auto& [d, count] : min_disc_histogram) hist[std::to_string(d)] = count;
  return {{"m", m},
          {"n", n},
          {"p", p},
          {"trials", trials},
          {"seed", seed},
          {"kappa", kappa},
          {"min_disc_histogram", hist},
          {"fraction_min_disc_le_1", fraction_within_one},
          {"mean_colorings_disc_le_1", mean_good_colorings},
          {"counting_bound", counting_bound}};
}

LowerboundReport run_lowerbound_probe(int m, int n, double p, int trials, std::uint64_t seed, double kappa) {
  if (n > 24) throw SizeLimitExceeded("the lower-bound probe enumerates colorings; n must be <= 24");
  if (m < 1 || n < 1 || trials < 0) throw std::invalid_argument("invalid probe size");
  LowerboundReport r;
  r.m = m;
  r.n = n;
  r.p = p;
  r.trials = trials;
  r.seed = seed;
  r.kappa = kappa;
  std::vector<int> mins(trials);
  std::vector<std::uint64_t> goods(trials);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t k) {
    const auto a = sample_bernoulli(m, n, p, derive(seed, k));
    mins[k] = exhaustive_min_disc(a).disc;
    goods[k] = count_colorings_within(a, 1);
  });
  int within_one = 0;
  double good_sum = 0.0;
  for (int k = 0; k < trials; ++k) {
    ++r.min_disc_histogram[mins[k]];
    within_one += mins[k] <= 1;
    good_sum += static_cast<double>(goods[k]);
  }
  r.fraction_within_one = trials == 0 ? 0.0 : static_cast<double>(within_one) / trials;
  r.mean_good_colorings = trials == 0 ? 0.0 : good_sum / trials;
  r.counting_bound = counting_bound(m, n, 1, kappa);
  return r;
}

Json SuiteReport::to_json() const {
  Json fails = Json::array();
  for (const auto& f : failures) fails.push_back({{"check", f.check}, {"witness", f.witness}});
  Json bnds = Json::array();
  for (const auto& b : bounds) {
    bnds.push_back({{"bound", b.bound},
                    {"domain", b.domain},
                    {"checks", b.checks},
                    {"violations", b.violations},
                    {"worst_margin", b.worst_margin},
                    {"worst_point", b.worst_point}});
  }
  return {{"suite", suite},  {"seed", seed}, {"passed", passed()}, {"checks_run", checks_run},
          {"failures", fails}, {"bounds", bnds}, {"info", info},     {"runtime_s", runtime_s}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"smoothing", "fourier", "spike", "decay",
                                              "gaussian",  "inversion", "assembly"};
  return names;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  static const std::map<std::string, std::function<void(Recorder&, std::uint64_t)>> suites{
      {"smoothing", smoothing_suite}, {"fourier", fourier_suite},     {"spike", spike_suite},
      {"decay", decay_suite},         {"gaussian", gaussian_suite},   {"inversion", inversion_suite},
      {"assembly", assembly_suite}};
  const auto it = suites.find(name);
  if (it == suites.end()) throw std::invalid_argument("unknown suite '" + name + "'");
  Recorder rec(name, seed);
  it->second(rec, seed);
  return rec.finish();
}

}  // namespace fdisc
