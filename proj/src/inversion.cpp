#include "fdisc/inversion.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "fdisc/errors.hpp"
#include "fdisc/fourier.hpp"

namespace fdisc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_enumerable(const IncidenceMatrix& a) {
  if (a.cols() > 24) throw SizeLimitExceeded("exact enumeration needs n <= 24");
}

// Walks all 2^n colorings in Gray-code order starting from all minus,
// calling visit(d) with the current D = A x, and on_flip(j, sign) before.
template <typename Flip, typename Visit>
void gray_walk(const IncidenceMatrix& a, Eigen::VectorXi& d, Flip&& on_flip, Visit&& visit) {
  const int n = a.cols();
  for (int i = 0; i < a.rows(); ++i) d(i) = -a.row_sum(i);
  std::vector<int> sign(n, -1);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 0;; ++k) {
    visit();
    if (k + 1 == total) break;
    const int j = std::countr_zero(k + 1);
    sign[j] = -sign[j];
    on_flip(j, sign[j]);
  }
}

// Per-coordinate factor of a product-form smoother transform.
class CoordinateRhat {
 public:
  CoordinateRhat(const Smoother& smoother, int m) : odd_(m, false) {
    if (const auto* spec = std::get_if<SmoothingSpec>(&smoother)) {
      delta_ = spec->delta();
    } else {
      for (const int i : std::get<ParitySmoother>(smoother).odd_rows) odd_[i] = true;
    }
  }
  double operator()(int i, double x) const {
    if (delta_ >= 0) return rhat_1d(delta_, x);
    return odd_[i] ? cos_2pi(x) : 1.0;
  }

 private:
  int delta_ = -1;
  std::vector<bool> odd_;
};

}  // namespace

std::optional<double> PointProbability::gap() const {
  if (!exact || !estimate) return std::nullopt;
  return std::abs(exact->to_double() - estimate->value);
}

std::map<std::vector<int>, std::uint64_t> discrepancy_distribution(const IncidenceMatrix& a) {
  require_enumerable(a);
  const int m = a.rows();
  const std::uint64_t base = 2 * static_cast<std::uint64_t>(a.cols()) + 1;
  double span = 1.0;
  for (int i = 0; i < m; ++i) span *= static_cast<double>(base);
  if (span > 1.8e19) throw SizeLimitExceeded("discrepancy histogram key does not fit 64 bits");

  std::vector<std::uint64_t> place(m, 1);
  for (int i = 1; i < m; ++i) place[i] = place[i - 1] * base;
  const std::uint64_t n = static_cast<std::uint64_t>(a.cols());
  Eigen::VectorXi d(m);
  std::uint64_t key = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> hist;
  bool started = false;
  gray_walk(
      a, d,
      [&](int j, int sign) {
        a.for_each_row_in_column(j, [&](int i) {
          d(i) += 2 * sign;
          if (sign > 0) key += 2 * place[i];
          else key -= 2 * place[i];
        });
      },
      [&] {
        if (!started) {
          key = 0;
          for (int i = 0; i < m; ++i) key += static_cast<std::uint64_t>(d(i) + static_cast<int>(n)) * place[i];
          started = true;
        }
        ++hist[key];
      });

  std::map<std::vector<int>, std::uint64_t> out;
  for (const auto& [k, count] : hist) {
    std::vector<int> v(m);
    std::uint64_t rest = k;
    for (int i = 0; i < m; ++i) {
      v[i] = static_cast<int>(rest % base) - static_cast<int>(n);
      rest /= base;
    }
    out[v] = count;
  }
  return out;
}

DyadicRational prob_exact(const IncidenceMatrix& a, const Smoother& smoother, const Eigen::VectorXi& lambda) {
  require_enumerable(a);
  const int m = a.rows();
  if (lambda.size() != m) throw DimensionMismatch("lambda length does not match A");
  const auto pmfs = row_pmfs(smoother, m);

  // Only D with lambda_i - D_i in the support of every row PMF matter;
  // those D live in a box indexed by a mixed-radix key.
  std::vector<int> lo(m), width(m);
  std::vector<std::uint64_t> place(m);
  std::uint64_t cells = 1;
  int log2_den = a.cols();
  for (int i = 0; i < m; ++i) {
    lo[i] = lambda(i) - pmfs[i].max_value();
    width[i] = static_cast<int>(pmfs[i].weights.size());
    place[i] = cells;
    cells *= static_cast<std::uint64_t>(width[i]);
    if (cells > (std::uint64_t{1} << 26)) throw SizeLimitExceeded("smoothing window box is too large");
    log2_den += pmfs[i].log2_den;
  }
  auto inside = [&](int i, int value) { return value >= lo[i] && value < lo[i] + width[i]; };

  std::vector<std::uint64_t> counts(cells, 0);
  Eigen::VectorXi d(m);
  int outside = -1;
  gray_walk(
      a, d,
      [&](int j, int sign) {
        a.for_each_row_in_column(j, [&](int i) {
          const bool before = inside(i, d(i));
          d(i) += 2 * sign;
          outside += static_cast<int>(before) - static_cast<int>(inside(i, d(i)));
        });
      },
      [&] {
        if (outside < 0) {
          outside = 0;
          for (int i = 0; i < m; ++i) outside += !inside(i, d(i));
        }
        if (outside != 0) return;
        std::uint64_t key = 0;
        for (int i = 0; i < m; ++i) key += static_cast<std::uint64_t>(d(i) - lo[i]) * place[i];
        ++counts[key];
      });

  BigInt numerator = 0;
  for (std::uint64_t key = 0; key < cells; ++key) {
    if (counts[key] == 0) continue;
    BigInt term = counts[key];
    std::uint64_t rest = key;
    for (int i = 0; i < m && term != 0; ++i) {
      const int digit = static_cast<int>(rest % static_cast<std::uint64_t>(width[i]));
      rest /= static_cast<std::uint64_t>(width[i]);
      // R_i = lambda_i - D_i = max_value - digit.
      term *= pmfs[i].weights[static_cast<std::size_t>(width[i] - 1 - digit)];
    }
    numerator += term;
  }
  return DyadicRational(numerator, log2_den);
}

bool InversionEstimate::imaginary_consistent() const {
  return std::abs(imag.value) <= 3.0 * imag.std_error;
}

namespace {

MultiIntegrand inversion_integrand(const DhatKernel& kernel, const Smoother& smoother, const Eigen::VectorXi& lambda) {
  const Eigen::VectorXd lam = lambda.cast<double>();
  return [&kernel, &smoother, lam](const ThetaPoint& theta, std::span<double> out) {
    const double x = kernel.value(theta.coords()) * smoother_rhat(smoother, theta.coords());
    const double phase = kTwoPi * lam.dot(theta.coords());
    out[0] = x * std::cos(phase);
    out[1] = -x * std::sin(phase);
  };
}

}  // namespace

InversionEstimate prob_fourier_mc(const IncidenceMatrix& a, const Smoother& smoother, const Eigen::VectorXi& lambda,
                                  std::int64_t samples, std::uint64_t seed) {
  if (lambda.size() != a.rows()) throw DimensionMismatch("lambda length does not match A");
  const DhatKernel kernel(a);
  const auto est = integrate_mc(inversion_integrand(kernel, smoother, lambda), 2, Region::full_cube(), a.rows(),
                                samples, seed);
  return {est[0], est[1]};
}

InversionEstimate prob_fourier_mc_adaptive(const IncidenceMatrix& a, const Smoother& smoother,
                                           const Eigen::VectorXi& lambda, double target_std_error,
                                           std::int64_t initial_samples, std::int64_t max_samples,
                                           std::uint64_t seed) {
  if (lambda.size() != a.rows()) throw DimensionMismatch("lambda length does not match A");
  const DhatKernel kernel(a);
  const auto est = integrate_mc_adaptive(inversion_integrand(kernel, smoother, lambda), 2, Region::full_cube(),
                                         a.rows(), target_std_error, initial_samples, max_samples, seed);
  return {est[0], est[1]};
}

Estimate prob_even_variant(const IncidenceMatrix& a, std::int64_t samples, std::uint64_t seed) {
  const DhatKernel kernel(a);
  const ParitySmoother parity = ParitySmoother::from(a);
  Estimate est = integrate_mc(
      [&](const ThetaPoint& theta) { return kernel.value(theta.coords()) * parity_rhat(parity, theta.coords()); },
      Region::quarter_cube(), a.rows(), samples, seed);
  const double scale = std::ldexp(1.0, a.rows());
  est.value *= scale;
  est.std_error *= scale;
  return est;
}

InversionEstimate cancellation_check(const Eigen::VectorXi& t, std::int64_t samples, std::uint64_t seed) {
  const Eigen::VectorXd tt = t.cast<double>();
  const MultiIntegrand f = [&tt](const ThetaPoint& theta, std::span<double> out) {
    const double phase = kTwoPi * tt.dot(theta.coords());
    out[0] = std::cos(phase);
    out[1] = std::sin(phase);
  };
  const auto est = integrate_mc(f, 2, Region::full_cube(), static_cast<int>(t.size()), samples, seed);
  return {est[0], est[1]};
}

AssemblyReport three_region_assembly(const IncidenceMatrix& a, const Smoother& smoother, std::int64_t samples,
                                     std::uint64_t seed, std::optional<double> radius) {
  const int m = a.rows();
  AssemblyReport r;
  r.seed = seed;
  r.t = a.expected_frequency();
  if (radius) {
    if (!(*radius > 0.0 && *radius < 0.25)) throw std::invalid_argument("assembly radius must lie in (0, 1/4)");
    r.radius = *radius;
  } else {
    if (!(r.t > 1.0 / 16.0)) throw std::invalid_argument("assembly needs t > 1/16 so that the radius is below 1/4");
    r.radius = 1.0 / (16.0 * std::sqrt(r.t));
  }

  const DhatKernel kernel(a);
  const CoordinateRhat coord(smoother, m);
  std::vector<int> tau(m);
  for (int i = 0; i < m; ++i) tau[i] = (a.row_sum(i) & 1) ? -1 : 1;

  r.central = integrate_mc(
      [&](const ThetaPoint& theta) { return kernel.value(theta.coords()) * smoother_rhat(smoother, theta.coords()); },
      Region::origin_ball(r.radius), m, samples, derive(seed, 0));

  // sum_{s != 0} sign(s) R(s + phi) = prod_i (g_i(phi_i) + tau_i g_i(phi_i + 1/2)) - prod_i g_i(phi_i).
  r.near = integrate_mc(
      [&](const ThetaPoint& phi) {
        const double d = kernel.value(phi.coords());
        if (d == 0.0) return 0.0;
        double base = 1.0;
        double log_ratio = 0.0;
        double with = 1.0;
        bool finite = true;
        for (int i = 0; i < m; ++i) {
          const double g0 = coord(i, phi(i));
          const double g1 = tau[i] * coord(i, phi(i) + 0.5);
          base *= g0;
          with *= g0 + g1;
          if (g0 != 0.0 && g1 / g0 > -1.0) log_ratio += std::log1p(g1 / g0);
          else finite = false;
        }
        const double shells = finite ? base * std::expm1(log_ratio) : with - base;
        return d * shells;
      },
      Region::origin_ball(r.radius), m, samples, derive(seed, 1));

  r.far = integrate_mc(
      [&](const ThetaPoint& theta) {
        return std::abs(kernel.value(theta.coords()) * smoother_rhat(smoother, theta.coords()));
      },
      Region::far_from_lattice(r.radius), m, samples, derive(seed, 2));

  const auto& meta = a.meta();
  const double p = meta && meta->p ? *meta->p : r.t / m;
  r.far_bound = std::exp(-p * r.radius * r.radius * a.cols() / 24.0);
  r.lower_estimate = r.central.value - std::abs(r.near.value) - r.far.value;
  r.central_positive = r.central.value > 0.0;
  r.central_dominates_near = r.central.value >= 2.0 * std::abs(r.near.value);
  r.central_exceeds_far = r.central.value > r.far.value;
  r.central_exceeds_far_bound = r.central.value > r.far_bound;
  r.holds = r.central_positive && r.central_dominates_near && r.lower_estimate > 0.0;
  return r;
}

}  // namespace fdisc
