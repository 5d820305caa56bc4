#include "fdisc/fourier.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "fdisc/errors.hpp"

namespace fdisc {
namespace {

constexpr double kPi = std::numbers::pi;

void require_dim(const IncidenceMatrix& a, Eigen::Index size) {
  if (size != a.rows()) {
    throw DimensionMismatch("theta has length " + std::to_string(size) + " but A has " +
                            std::to_string(a.rows()) + " rows");
  }
}

double log_sum_exp(const std::vector<double>& logs) {
  double top = -std::numeric_limits<double>::infinity();
  for (const double v : logs) top = std::max(top, v);
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (const double v : logs) sum += std::exp(v - top);
  return top + std::log(sum);
}

}  // namespace

DhatKernel::DhatKernel(const IncidenceMatrix& a) : m_(a.rows()) {
  for (const auto& cls : a.column_classes()) {
    std::vector<int> rows;
    a.for_each_row_in_column(cls.representative, [&](int i) { rows.push_back(i); });
    if (rows.empty()) continue;  // cos 0 = 1
    class_rows_.push_back(std::move(rows));
    class_counts_.push_back(cls.count);
  }
}

SignedLog DhatKernel::log_value(const Eigen::Ref<const Eigen::VectorXd>& theta) const {
  if (theta.size() != m_) throw DimensionMismatch("theta length does not match A");
  SignedLog out;
  for (std::size_t c = 0; c < class_rows_.size(); ++c) {
    double phase = 0.0;
    for (const int i : class_rows_[c]) phase += theta(i);
    const double factor = cos_2pi(phase);
    if (factor == 0.0) return {0, -std::numeric_limits<double>::infinity()};
    out.log_abs += class_counts_[c] * std::log(std::abs(factor));
    if (factor < 0.0 && (class_counts_[c] & 1)) out.sign = -out.sign;
  }
  return out;
}

SignedLog dhat_log(const IncidenceMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  require_dim(a, theta.size());
  return DhatKernel(a).log_value(theta);
}

double dhat(const IncidenceMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  return dhat_log(a, theta).value();
}

double dhat_bruteforce(const IncidenceMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  require_dim(a, theta.size());
  const int n = a.cols();
  const int m = a.rows();
  if (n > 24) throw SizeLimitExceeded("brute-force transform enumerates 2^n colorings; n must be <= 24");
  // Start from the all-minus coloring and walk the Gray code.
  Eigen::VectorXi d = Eigen::VectorXi::Zero(m);
  for (int i = 0; i < m; ++i) d(i) = -a.row_sum(i);
  std::vector<int> sign(n, -1);
  const std::uint64_t total = std::uint64_t{1} << n;
  double re = 0.0;
  double im = 0.0;
  for (std::uint64_t k = 0;; ++k) {
    double phase = 0.0;
    for (int i = 0; i < m; ++i) phase += d(i) * theta(i);
    re += std::cos(2.0 * kPi * phase);
    im += std::sin(2.0 * kPi * phase);
    if (k + 1 == total) break;
    const int j = std::countr_zero(k + 1);
    sign[j] = -sign[j];
    a.for_each_row_in_column(j, [&](int i) { d(i) += 2 * sign[j]; });
  }
  re /= static_cast<double>(total);
  im /= static_cast<double>(total);
  if (std::abs(im) >= 1e-12) throw std::logic_error("imaginary part of the transform did not vanish");
  return re;
}

double dhat_partial(const IncidenceMatrix& a, const Eigen::Ref<const Eigen::VectorXd>& theta, int k) {
  require_dim(a, theta.size());
  if (k < 0 || k > a.cols()) throw std::invalid_argument("k must lie in [0, n]");
  double value = 1.0;
  for (int j = 0; j < k; ++j) {
    double phase = 0.0;
    a.for_each_row_in_column(j, [&](int i) { phase += theta(i); });
    value *= std::abs(cos_2pi(phase));
  }
  return value;
}

double xhat(const IncidenceMatrix& a, const Smoother& smoother, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  return dhat(a, theta) * smoother_rhat(smoother, theta);
}

void validate_covariance(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols()) throw std::invalid_argument("covariance must be square");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if (!sigma.isApprox(sigma.transpose(), 1e-12) && (sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("covariance must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma, Eigen::EigenvaluesOnly);
  const auto& values = eig.eigenvalues();
  const double top = std::max(1.0, values.cwiseAbs().maxCoeff());
  if (values.size() > 0 && values.minCoeff() < -kPsdTolerance * top) {
    throw std::invalid_argument("covariance must be positive semidefinite");
  }
}

double gaussian_fhat(const Eigen::MatrixXd& sigma, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  validate_covariance(sigma);
  if (theta.size() != sigma.rows()) throw DimensionMismatch("theta length does not match covariance");
  return std::exp(-2.0 * kPi * kPi * theta.dot(sigma * theta));
}

double gaussian_density_zero(const Eigen::MatrixXd& sigma) {
  validate_covariance(sigma);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("covariance must be positive definite");
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double m = static_cast<double>(sigma.rows());
  return std::exp(-0.5 * m * std::log(2.0 * kPi) - 0.5 * log_det);
}

QuadraticApproxReport check_quadratic_approx(const IncidenceMatrix& a, const Eigen::VectorXd& theta, double k) {
  require_dim(a, theta.size());
  QuadraticApproxReport r;
  const double t = a.expected_frequency();
  const double norm = theta.norm();
  if (t > 0.0 && norm > 1.0 / (16.0 * std::sqrt(t))) {
    r.violations.push_back("|theta|_2 exceeds 1/(16 sqrt t)");
  }
  if (max_column_frequency(a) > 4.0 * t) r.violations.push_back("some element lies in more than 4t sets");
  const SignedLog d = dhat_log(a, theta);
  if (d.sign <= 0) r.violations.push_back("transform is not positive at theta");
  r.preconditions_met = r.violations.empty();

  const Eigen::MatrixXd sigma = covariance_empirical(a).cast<double>();
  r.log_dhat = d.sign > 0 ? d.log_abs : -std::numeric_limits<double>::infinity();
  r.quad_form = theta.dot(sigma * theta);
  r.residual = std::abs(r.log_dhat + 2.0 * kPi * kPi * r.quad_form);
  const double n4 = norm * norm * norm * norm;
  r.bound = k * a.cols() * t * t * n4;
  r.ok = r.preconditions_met && r.residual <= r.bound + 1e-12 * std::max(1.0, std::abs(r.log_dhat));
  return r;
}

double expected_abs_cos(const Eigen::VectorXd& theta, double p, double s) {
  const int m = static_cast<int>(theta.size());
  if (m > 20) throw SizeLimitExceeded("exact expectation enumerates 2^m vectors; m must be <= 20");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  // Depth-first over coordinates, carrying phase and probability weight.
  double total = 0.0;
  auto visit = [&](auto&& self, int i, double phase, double weight) -> void {
    if (weight == 0.0) return;
    if (i == m) {
      total += weight * std::abs(std::cos(s + 2.0 * kPi * phase));
      return;
    }
    self(self, i + 1, phase, weight * (1.0 - p));
    self(self, i + 1, phase + theta(i), weight * p);
  };
  visit(visit, 0, 0.0, 1.0);
  return total;
}

double expected_abs_cos_centered(const Eigen::VectorXd& theta, double p, double s) {
  return expected_abs_cos(theta, p, s - 2.0 * kPi * p * theta.sum());
}

double one_factor_abs_cos_exact(const Eigen::VectorXd& theta, double p) {
  if (theta.size() > 0 && theta.cwiseAbs().maxCoeff() > 0.25) {
    throw std::invalid_argument("one-factor expectation requires |theta|_inf <= 1/4");
  }
  return expected_abs_cos(theta, p, 0.0);
}

double large_entry_bound(const Eigen::VectorXd& theta, double p) {
  const double sup = theta.size() == 0 ? 0.0 : theta.cwiseAbs().maxCoeff();
  return 1.0 - kPi * kPi / 4.0 * p * sup * sup;
}

double small_l2_bound(const Eigen::VectorXd& theta, double p) { return 1.0 - 0.5 * p * theta.squaredNorm(); }

double one_factor_bound(const Eigen::VectorXd& theta, double p, double c) {
  return 1.0 - std::min(0.25 * p * theta.squaredNorm(), c);
}

SpikeDominanceX spike_dominance_x(const IncidenceMatrix& a, const Smoother& smoother, const Eigen::VectorXd& theta,
                                  std::uint64_t seed, std::int64_t sampled_shifts) {
  require_dim(a, theta.size());
  const int m = a.rows();
  const DhatKernel kernel(a);
  const SignedLog base = kernel.log_value(theta);
  auto log_rhat = [&](const Eigen::VectorXd& x) {
    const double r = std::abs(smoother_rhat(smoother, x));
    return r == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(r);
  };

  SpikeDominanceX out;
  out.log_lhs = base.sign == 0 ? -std::numeric_limits<double>::infinity() : base.log_abs + log_rhat(theta);
  std::vector<double> terms;
  Eigen::VectorXd shifted(m);
  std::vector<int> digits(m, 0);
  auto visit = [&] {
    bool zero = true;
    for (int i = 0; i < m; ++i) {
      shifted(i) = theta(i) + 0.5 * (digits[i] == 0 ? 0 : digits[i] == 1 ? -1 : 1);
      zero = zero && digits[i] == 0;
    }
    if (zero) return;
    const SignedLog d = kernel.log_value(shifted);
    if (d.sign == 0 || base.sign == 0) {
      if ((d.sign == 0) != (base.sign == 0)) {
        out.periodic = false;
        out.max_periodicity_error = std::numeric_limits<double>::infinity();
      }
    } else {
      const double err = std::abs(d.log_abs - base.log_abs) / std::max(1.0, std::abs(base.log_abs));
      out.max_periodicity_error = std::max(out.max_periodicity_error, err);
      if (err > 1e-9) out.periodic = false;
    }
    if (d.sign != 0) terms.push_back(d.log_abs + log_rhat(shifted));
    ++out.shifts;
  };

  double total = 1.0;
  for (int i = 0; i < m; ++i) total *= 3.0;
  if (total <= 1e6) {
    for (;;) {
      visit();
      int i = 0;
      while (i < m && ++digits[i] == 3) digits[i++] = 0;
      if (i == m) break;
    }
  } else {
    out.exhaustive = false;
    RngStream rng(seed, 0);
    for (std::int64_t k = 0; k < sampled_shifts; ++k) {
      for (auto& dgt : digits) dgt = static_cast<int>(rng.below(3));
      visit();
    }
  }
  out.log_rhs = std::log(2.0) + log_sum_exp(terms);
  out.dominates = out.log_lhs > out.log_rhs;
  return out;
}

FarRegionReport far_region_integral(const IncidenceMatrix& a, double delta, std::int64_t samples,
                                    std::uint64_t seed) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  FarRegionReport r;
  const auto& meta = a.meta();
  r.calibration_only = !(meta && meta->p);
  r.p = r.calibration_only ? a.expected_frequency() / std::max(1, a.rows()) : *meta->p;
  const double pd2 = r.p * delta * delta;
  r.side_conditions = pd2 / 6.0 <= 1.0 && pd2 <= kOneFactorC && r.p <= 0.5;
  r.bound = std::exp(-pd2 * a.cols() / 24.0);
  const DhatKernel kernel(a);
  r.integral = integrate_mc([&](const ThetaPoint& theta) { return std::abs(kernel.value(theta.coords())); },
                            Region::far_from_lattice(delta), a.rows(), samples, seed);
  return r;
}

}  // namespace fdisc
