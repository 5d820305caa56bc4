#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fdisc/integrate.hpp"
#include "fdisc/setsystem.hpp"
#include "fdisc/smoothing.hpp"
#include "fdisc/torus.hpp"

namespace fdisc {

/// sign * exp(log_abs); sign is 0 for an exact zero.
struct SignedLog {
  int sign = 1;
  double log_abs = 0.0;

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

/// Precomputed column classes of A for repeated evaluation of
///   D(theta) = prod_j cos(2 pi <A^j, theta>).
/// Columns with equal patterns share one factor raised to their
/// multiplicity; the product is accumulated as a sum of ln|cos|.
class DhatKernel {
 public:
  explicit DhatKernel(const IncidenceMatrix& a);

  int rows() const { return m_; }
  SignedLog log_value(const Eigen::Ref<const Eigen::VectorXd>& theta) const;
  double value(const Eigen::Ref<const Eigen::VectorXd>& theta) const { return log_value(theta).value(); }

 private:
  int m_;
  std::vector<std::vector<int>> class_rows_;
  std::vector<int> class_counts_;
};

/// cos(2 pi x) with exact zeros at odd multiples of 1/4.
inline double cos_2pi(double x) {
  const double u = x - std::round(x);
  return std::sin(2.0 * std::numbers::pi * (0.25 - std::abs(u)));
}

/// Product formula; theta may be any real vector of length m.
SignedLog dhat_log(const IncidenceMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& theta);
double dhat(const IncidenceMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& theta);
inline double dhat(const IncidenceMatrix& a, const ThetaPoint& theta) { return dhat(a, theta.coords()); }

/// E[exp(2 pi i <D, theta>)] by enumerating all 2^n colorings. Refuses n > 24.
double dhat_bruteforce(const IncidenceMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& theta);

/// |prod_{j < k} cos(2 pi <A^j, theta>)|, column by column.
double dhat_partial(const IncidenceMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& theta, int k);

/// D(theta) * R(theta).
double xhat(const IncidenceMatrix& a, const Smoother& smoother, const Eigen::Ref<const Eigen::VectorXd>& theta);

/// Throws std::invalid_argument unless sigma is square, symmetric and has
/// no eigenvalue below -kPsdTolerance * max(1, largest |eigenvalue|).
inline constexpr double kPsdTolerance = 1e-10;
void validate_covariance(const Eigen::MatrixXd& sigma);

/// exp(-2 pi^2 theta^T Sigma theta).
double gaussian_fhat(const Eigen::MatrixXd& sigma, const Eigen::Ref<const Eigen::VectorXd>& theta);
/// (2 pi)^(-m/2) det(Sigma)^(-1/2); Sigma must be positive definite.
double gaussian_density_zero(const Eigen::MatrixXd& sigma);

struct QuadraticApproxReport {
  double log_dhat = 0.0;
  double quad_form = 0.0;  // theta^T A A^T theta
  double residual = 0.0;   // |ln D(theta) + 2 pi^2 quad_form|
  double bound = 0.0;      // K n t^2 |theta|^4
  bool preconditions_met = true;
  std::vector<std::string> violations;
  bool ok = false;
};

/// Smallest power of two K such that 10^4 random instances at m = 6,
/// n = 400, p = 1/2 with |theta|_2 <= 1/(16 sqrt t) all satisfy the
/// quadratic approximation (`fdisc_calibrate --seed 2024`: largest ratio
/// 70.6).
inline constexpr double kQuadraticK = 128.0;

QuadraticApproxReport check_quadratic_approx(const IncidenceMatrix& a, const Eigen::VectorXd& theta, double k);

/// E |cos(s + 2 pi <a, theta>)| for a in {0,1}^m with independent
/// Bernoulli(p) entries, by exact enumeration (m <= 20).
double expected_abs_cos(const Eigen::VectorXd& theta, double p, double s = 0.0);
/// E |cos(s + 2 pi sum theta_i (a_i - p))|.
double expected_abs_cos_centered(const Eigen::VectorXd& theta, double p, double s);
/// E |cos(2 pi <a, theta>)|; requires |theta|_inf <= 1/4.
double one_factor_abs_cos_exact(const Eigen::VectorXd& theta, double p);

/// 1 - (pi^2 / 4) p |theta|_inf^2.
double large_entry_bound(const Eigen::VectorXd& theta, double p);
/// 1 - p |theta|_2^2 / 2.
double small_l2_bound(const Eigen::VectorXd& theta, double p);
/// 1 - min(p |theta|_2^2 / 4, c).
double one_factor_bound(const Eigen::VectorXd& theta, double p, double c);

/// Constants that the decay inequalities only assert to exist.
inline constexpr double kSmallL2B = 1e-3;
inline constexpr double kOneFactorC = 1e-3;
inline constexpr double kSpikeRadius = 1.0 / 16.0;

struct SpikeDominanceX {
  double log_lhs = 0.0;  // ln |X(theta)|
  double log_rhs = 0.0;  // ln (2 sum_{s != 0} |X(theta + s)|)
  bool dominates = false;
  bool periodic = true;  // |D(theta + s)| == |D(theta)| for every tested s
  double max_periodicity_error = 0.0;
  std::int64_t shifts = 0;
  bool exhaustive = true;
};

/// Shifts s in {-1/2, 0, 1/2}^m \ 0 are enumerated when 3^m <= 10^6 and
/// otherwise `sampled_shifts` are drawn from RngStream(seed, 0), in which
/// case log_rhs is only a lower estimate.
SpikeDominanceX spike_dominance_x(const IncidenceMatrix& a, const Smoother& smoother, const Eigen::VectorXd& theta,
                                  std::uint64_t seed = 0, std::int64_t sampled_shifts = 100000);

struct FarRegionReport {
  Estimate integral;          // of |D| over d_2(theta, Lambda) >= delta
  double p = 0.0;
  double bound = 0.0;         // exp(-p delta^2 n / 24)
  bool side_conditions = false;  // p delta^2 / 6 <= 1 and p delta^2 <= kOneFactorC
  bool calibration_only = false;  // no generation probability recorded
};

FarRegionReport far_region_integral(const IncidenceMatrix& a, double delta, std::int64_t samples,
                                    std::uint64_t seed);

}  // namespace fdisc
