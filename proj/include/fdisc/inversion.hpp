#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fdisc/dyadic.hpp"
#include "fdisc/integrate.hpp"
#include "fdisc/setsystem.hpp"
#include "fdisc/smoothing.hpp"

namespace fdisc {

/// Pr[X = lambda] for X = D + R, exactly and/or estimated.
struct PointProbability {
  Eigen::VectorXi lambda;
  std::optional<DyadicRational> exact;
  std::optional<Estimate> estimate;
  std::optional<Estimate> imaginary;  // of the inversion integral; zero in expectation

  /// |exact - estimate| when both are present.
  std::optional<double> gap() const;
};

/// Exact law of D = A x over uniform colorings, as counts out of 2^n.
/// Refuses n > 24.
std::map<std::vector<int>, std::uint64_t> discrepancy_distribution(const IncidenceMatrix& a);

/// Pr[D + R = lambda] by Gray-code enumeration of all colorings. The result
/// has denominator 2^n times the product of the per-row smoothing
/// denominators. Refuses n > 24.
DyadicRational prob_exact(const IncidenceMatrix& a, const Smoother& smoother, const Eigen::VectorXi& lambda);

/// Real and imaginary parts of the inversion integral
///   int X(theta) exp(-2 pi i <lambda, theta>) dtheta
/// over the full cube.
struct InversionEstimate {
  Estimate real;
  Estimate imag;

  /// |imag| <= 3 imag.std_error, with equality allowed for a zero integrand.
  bool imaginary_consistent() const;
};

InversionEstimate prob_fourier_mc(const IncidenceMatrix& a, const Smoother& smoother, const Eigen::VectorXi& lambda,
                                  std::int64_t samples, std::uint64_t seed);

/// As prob_fourier_mc, doubling samples until the real part reaches
/// `target_std_error` or `max_samples`.
InversionEstimate prob_fourier_mc_adaptive(const IncidenceMatrix& a, const Smoother& smoother,
                                           const Eigen::VectorXi& lambda, double target_std_error,
                                           std::int64_t initial_samples, std::int64_t max_samples,
                                           std::uint64_t seed);

/// Pr[X = 0] = 2^m int_{[-1/4, 1/4)^m} X(theta) dtheta under the parity
/// smoother of A.
Estimate prob_even_variant(const IncidenceMatrix& a, std::int64_t samples, std::uint64_t seed);

/// int exp(2 pi i <t, theta>) dtheta over the full cube; 1 iff t = 0.
InversionEstimate cancellation_check(const Eigen::VectorXi& t, std::int64_t samples, std::uint64_t seed);

/// The three pieces of Pr[X = 0] around the radius r = 1/(16 sqrt t):
///   central  int_{|theta| <= r} X
///   near     int_{0 < d_2(theta, Lambda \ 0) < r} X  (signed)
///   far      int_{d_2(theta, Lambda) >= r} |X|
/// The near piece is one ball integral: for s in {0, 1/2}^m,
/// D(s + phi) = (-1)^{sum_{i in supp s} |A_i|_1} D(phi).
struct AssemblyReport {
  double t = 0.0;
  double radius = 0.0;
  Estimate central;
  Estimate near;
  Estimate far;
  double far_bound = 0.0;           // exp(-p r^2 n / 24)
  double lower_estimate = 0.0;      // central - |near| - far
  bool central_positive = false;
  bool central_dominates_near = false;  // central >= 2 |near|
  bool central_exceeds_far = false;     // central > far
  bool central_exceeds_far_bound = false;
  bool holds = false;  // central > 0, central >= 2|near| and lower_estimate > 0
  std::uint64_t seed = 0;
};

/// `radius` overrides 1/(16 sqrt t); it must lie in (0, 1/4).
AssemblyReport three_region_assembly(const IncidenceMatrix& a, const Smoother& smoother, std::int64_t samples,
                                     std::uint64_t seed, std::optional<double> radius = std::nullopt);

}  // namespace fdisc
