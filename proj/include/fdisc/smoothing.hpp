#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fdisc/dyadic.hpp"
#include "fdisc/rng.hpp"
#include "fdisc/setsystem.hpp"

namespace fdisc {

/// The smoothing distribution R(delta): a sum of delta independent
/// variables on {-1, 0, 1} with probabilities (1/4, 1/2, 1/4).
///
/// The PMF is kept exactly as integer weights over the common denominator
/// 4^delta; weight(k) is defined for k in [-delta, delta].
class SmoothingSpec {
 public:
  SmoothingSpec(int delta, std::vector<BigInt> weights);

  int delta() const { return delta_; }
  const BigInt& weight(int k) const { return weights_[static_cast<std::size_t>(k + delta_)]; }
  DyadicRational probability(int k) const;
  double probability_double(int k) const;
  int log2_denominator() const { return 2 * delta_; }

 private:
  int delta_;
  std::vector<BigInt> weights_;
};

/// Delta-fold convolution of (1/4, 1/2, 1/4), exact.
SmoothingSpec build_pmf(int delta);

/// One draw of R(delta): each summand is the difference of two fair bits.
int sample(const SmoothingSpec& spec, RngStream& rng);

/// (1/2 + 1/2 cos(2 pi theta))^delta, evaluated as cos(pi u)^(2 delta) on
/// the reduced phase u = theta - round(theta) so that zeros at half
/// integers are exact.
inline double rhat_1d(int delta, double theta) {
  const double u = theta - std::round(theta);
  const double c = std::sin(std::numbers::pi * (0.5 - std::abs(u)));
  return std::pow(c * c, delta);
}

/// Product of one-dimensional transforms.
template <typename Derived>
double rhat_md(int delta, const Eigen::MatrixBase<Derived>& theta) {
  double value = 1.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) value *= rhat_1d(delta, theta(i));
  return value;
}

/// Sign-flip smoother for rows with odd set size: R_i uniform on {-1, 1}
/// for odd rows, R_i = 0 otherwise, so D + R always has even entries.
struct ParitySmoother {
  int m = 0;
  std::vector<int> odd_rows;

  static ParitySmoother from(const IncidenceMatrix& a) { return {a.rows(), fdisc::odd_rows(a)}; }
};

/// prod over odd rows of cos(2 pi theta_i); 1 when no row is odd.
template <typename Derived>
double parity_rhat(const ParitySmoother& smoother, const Eigen::MatrixBase<Derived>& theta) {
  double value = 1.0;
  for (const int i : smoother.odd_rows) {
    const double u = theta(i) - std::round(theta(i));
    value *= std::sin(2.0 * std::numbers::pi * (0.25 - std::abs(u)));
  }
  return value;
}

using Smoother = std::variant<SmoothingSpec, ParitySmoother>;

template <typename Derived>
double smoother_rhat(const Smoother& smoother, const Eigen::MatrixBase<Derived>& theta) {
  if (const auto* spec = std::get_if<SmoothingSpec>(&smoother)) return rhat_md(spec->delta(), theta);
  return parity_rhat(std::get<ParitySmoother>(smoother), theta);
}

/// Exact per-row PMF of a smoother: weight[k] is the numerator of
/// Pr[R_i = min_value + k] over 2^log2_den.
struct RowPmf {
  int min_value = 0;
  std::vector<BigInt> weights;
  int log2_den = 0;

  int max_value() const { return min_value + static_cast<int>(weights.size()) - 1; }
};

std::vector<RowPmf> row_pmfs(const Smoother& smoother, int m);

/// Outcome of one inequality at one point. `margin` is the slack
/// (right side minus left side for upper bounds); `applicable` is false
/// when the point lies outside the inequality's domain, in which case
/// `holds` is vacuously true.
struct BoundCheck {
  bool applicable = false;
  bool holds = true;
  double margin = 0.0;
};

struct RhatBoundReport {
  double value = 1.0;
  BoundCheck upper;  // R(theta) <= exp(-pi^2 delta |theta|^2),         |theta|_inf <= 1/2
  BoundCheck lower;  // R(theta) >= exp(-pi^2 delta |theta|^2 - 20 delta |theta|^4), |theta|_inf <= 1/4
  BoundCheck ratio;  // R(theta+s)/R(theta) <= prod_supp(s) (32 theta_i^2)^delta,   |theta|_inf <= 1/8
  std::int64_t shifts_checked = 0;
  bool shifts_exhaustive = true;
};

/// Relative tolerance used when comparing a computed transform to a bound.
inline constexpr double kBoundRelTol = 1e-12;

/// Checks the three decay bounds of the multi-dimensional transform at
/// theta. Shifts s in {-1/2, 0, 1/2}^m are enumerated when 3^m <= 10^6 and
/// otherwise `sampled_shifts` are drawn from RngStream(seed, 0).
RhatBoundReport check_rhat_bounds(int delta, const Eigen::VectorXd& theta, std::uint64_t seed = 0,
                                  std::int64_t sampled_shifts = 100000);

/// rho(R) = max |R(theta)| over [1/4, 1/2]: a step-1e-3 grid followed by a
/// golden-section refinement around the best grid point.
double rho(int delta);

/// Dominance of the central transform over its half-integer translates:
/// lhs = |R(theta)|, rhs = 2 sum_{s in Lambda \ 0} |R(theta + s)| by full
/// 3^m enumeration.
struct SpikeDominance {
  double lhs = 0.0;
  double rhs = 0.0;
  bool dominates = false;
};
SpikeDominance spike_dominance_r(int delta, const Eigen::VectorXd& theta);

}  // namespace fdisc
