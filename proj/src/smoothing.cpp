#include "fdisc/smoothing.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fdisc {

SmoothingSpec::SmoothingSpec(int delta, std::vector<BigInt> weights)
    : delta_(delta), weights_(std::move(weights)) {
  if (delta_ < 0) throw std::invalid_argument("delta must be nonnegative");
  if (weights_.size() != static_cast<std::size_t>(2 * delta_ + 1)) {
    throw std::invalid_argument("smoothing PMF must have 2 delta + 1 weights");
  }
  BigInt total = 0;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    if (weights_[k] < 0) throw std::invalid_argument("smoothing weights must be nonnegative");
    if (weights_[k] != weights_[weights_.size() - 1 - k]) {
      throw std::invalid_argument("smoothing PMF must be symmetric");
    }
    total += weights_[k];
  }
  if (total != (BigInt(1) << (2 * delta_))) throw std::invalid_argument("smoothing PMF must sum to one");
}

DyadicRational SmoothingSpec::probability(int k) const {
  if (k < -delta_ || k > delta_) return DyadicRational(0, 0);
  return DyadicRational(weight(k), 2 * delta_);
}

double SmoothingSpec::probability_double(int k) const { return probability(k).to_double(); }

SmoothingSpec build_pmf(int delta) {
  if (delta < 0) throw std::invalid_argument("delta must be nonnegative");
  std::vector<BigInt> weights{1};
  const BigInt step[3] = {1, 2, 1};
  for (int d = 0; d < delta; ++d) {
    std::vector<BigInt> next(weights.size() + 2, 0);
    for (std::size_t k = 0; k < weights.size(); ++k) {
      for (int s = 0; s < 3; ++s) next[k + s] += weights[k] * step[s];
    }
    weights = std::move(next);
  }
  return SmoothingSpec(delta, std::move(weights));
}

int sample(const SmoothingSpec& spec, RngStream& rng) {
  int value = 0;
  int remaining = spec.delta();
  while (remaining > 0) {
    // Each 64-bit draw supplies 32 summands.
    std::uint64_t bits = rng();
    const int batch = std::min(remaining, 32);
    for (int b = 0; b < batch; ++b) {
      value += static_cast<int>(bits & 1u) - static_cast<int>((bits >> 1) & 1u);
      bits >>= 2;
    }
    remaining -= batch;
  }
  return value;
}

std::vector<RowPmf> row_pmfs(const Smoother& smoother, int m) {
  std::vector<RowPmf> out;
  out.reserve(m);
  if (const auto* spec = std::get_if<SmoothingSpec>(&smoother)) {
    RowPmf row;
    row.min_value = -spec->delta();
    row.log2_den = spec->log2_denominator();
    for (int k = -spec->delta(); k <= spec->delta(); ++k) row.weights.push_back(spec->weight(k));
    out.assign(m, row);
    return out;
  }
  const auto& parity = std::get<ParitySmoother>(smoother);
  if (parity.m != m) throw std::invalid_argument("parity smoother built for a different m");
  out.assign(m, RowPmf{0, {1}, 0});
  for (const int i : parity.odd_rows) out[i] = RowPmf{-1, {1, 0, 1}, 1};
  return out;
}

namespace {

BoundCheck upper_check(double lhs, double rhs) {
  return {true, lhs <= rhs * (1.0 + kBoundRelTol), rhs - lhs};
}

BoundCheck lower_check(double value, double lower) {
  return {true, value >= lower * (1.0 - kBoundRelTol), value - lower};
}

}  // namespace

RhatBoundReport check_rhat_bounds(int delta, const Eigen::VectorXd& theta, std::uint64_t seed,
                                  std::int64_t sampled_shifts) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const int m = static_cast<int>(theta.size());
  const double sup = m == 0 ? 0.0 : theta.cwiseAbs().maxCoeff();
  const double norm2 = theta.squaredNorm();

  RhatBoundReport report;
  report.value = rhat_md(delta, theta);
  if (sup <= 0.5) report.upper = upper_check(report.value, std::exp(-pi2 * delta * norm2));
  if (sup <= 0.25) {
    report.lower = lower_check(report.value, std::exp(-pi2 * delta * norm2 - 20.0 * delta * norm2 * norm2));
  }
  if (sup > 0.125) return report;

  // Per-coordinate ratio factors for s_i = -1/2, +1/2, and the bound factor.
  std::vector<double> minus(m), plus(m), bound(m);
  for (int i = 0; i < m; ++i) {
    const double base = rhat_1d(delta, theta(i));
    minus[i] = rhat_1d(delta, theta(i) - 0.5) / base;
    plus[i] = rhat_1d(delta, theta(i) + 0.5) / base;
    bound[i] = std::pow(32.0 * theta(i) * theta(i), delta);
  }
  BoundCheck ratio{true, true, std::numeric_limits<double>::infinity()};
  auto visit = [&](const std::vector<int>& digits) {
    double lhs = 1.0;
    double rhs = 1.0;
    bool nonzero = false;
    for (int i = 0; i < m; ++i) {
      if (digits[i] == 0) continue;
      nonzero = true;
      lhs *= digits[i] == 1 ? minus[i] : plus[i];
      rhs *= bound[i];
    }
    if (!nonzero) return;
    const auto check = upper_check(lhs, rhs);
    ratio.holds = ratio.holds && check.holds;
    ratio.margin = std::min(ratio.margin, check.margin);
    ++report.shifts_checked;
  };

  double total = 1.0;
  for (int i = 0; i < m; ++i) total *= 3.0;
  std::vector<int> digits(m, 0);
  if (total <= 1e6) {
    for (;;) {
      visit(digits);
      int i = 0;
      while (i < m && ++digits[i] == 3) digits[i++] = 0;
      if (i == m) break;
    }
  } else {
    report.shifts_exhaustive = false;
    RngStream rng(seed, 0);
    for (std::int64_t k = 0; k < sampled_shifts; ++k) {
      for (auto& d : digits) d = static_cast<int>(rng.below(3));
      visit(digits);
    }
  }
  if (report.shifts_checked == 0) ratio.margin = 0.0;
  report.ratio = ratio;
  return report;
}

double rho(int delta) {
  constexpr double lo = 0.25;
  constexpr double hi = 0.5;
  constexpr double step = 1e-3;
  const int points = static_cast<int>(std::lround((hi - lo) / step));
  double best = -1.0;
  int best_k = 0;
  for (int k = 0; k <= points; ++k) {
    const double value = std::abs(rhat_1d(delta, lo + k * step));
    if (value > best) {
      best = value;
      best_k = k;
    }
  }
  // Golden-section search on the bracket around the best grid point.
  double a = std::max(lo, lo + (best_k - 1) * step);
  double b = std::min(hi, lo + (best_k + 1) * step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  for (int iter = 0; iter < 80; ++iter) {
    if (std::abs(rhat_1d(delta, c)) > std::abs(rhat_1d(delta, d))) b = d;
    else a = c;
    c = b - ratio * (b - a);
    d = a + ratio * (b - a);
  }
  for (const double x : {a, b, lo, hi}) best = std::max(best, std::abs(rhat_1d(delta, x)));
  return best;
}

SpikeDominance spike_dominance_r(int delta, const Eigen::VectorXd& theta) {
  const int m = static_cast<int>(theta.size());
  if (m > 16) throw std::invalid_argument("spike enumeration is limited to m <= 16");
  std::vector<std::array<double, 3>> factors(m);
  for (int i = 0; i < m; ++i) {
    factors[i] = {rhat_1d(delta, theta(i)), rhat_1d(delta, theta(i) - 0.5), rhat_1d(delta, theta(i) + 0.5)};
  }
  SpikeDominance out;
  out.lhs = std::abs(rhat_md(delta, theta));
  std::vector<int> digits(m, 0);
  double sum = 0.0;
  for (;;) {
    int i = 0;
    while (i < m && ++digits[i] == 3) digits[i++] = 0;
    if (i == m) break;
    double term = 1.0;
    for (int k = 0; k < m; ++k) term *= factors[k][digits[k]];
    sum += std::abs(term);
  }
  out.rhs = 2.0 * sum;
  out.dominates = out.lhs > out.rhs;
  return out;
}

}  // namespace fdisc
