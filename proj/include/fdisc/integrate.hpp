#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdisc/torus.hpp"

namespace fdisc {

/// Result of a Monte Carlo integral: std_error is the sample standard
/// deviation of the weighted integrand divided by sqrt(samples).
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Subsets of the fundamental domain [-1/2, 1/2)^m.
///
///   FullCube        the whole domain
///   QuarterCube     [-1/4, 1/4)^m
///   OriginBall      |theta|_2 <= r
///   NearLattice     d_2(theta, Lambda) < r and |theta|_2 > r
///   FarFromLattice  d_2(theta, Lambda) >= r
///
/// For r < 1/4, OriginBall(r), NearLattice(r) and FarFromLattice(r)
/// partition the domain up to measure zero.
struct Region {
  enum class Kind { FullCube, QuarterCube, OriginBall, NearLattice, FarFromLattice };

  Kind kind = Kind::FullCube;
  double radius = 0.0;

  static Region full_cube() { return {Kind::FullCube, 0.0}; }
  static Region quarter_cube() { return {Kind::QuarterCube, 0.0}; }
  static Region origin_ball(double r) { return {Kind::OriginBall, r}; }
  static Region near_lattice(double r) { return {Kind::NearLattice, r}; }
  static Region far_from_lattice(double r) { return {Kind::FarFromLattice, r}; }

  bool contains(const Eigen::VectorXd& theta) const;
  /// Closed-form volume where one exists (balls and shells need r < 1/4).
  std::optional<double> volume(int m) const;
  std::string name() const;
};

/// Smallest acceptance rate tolerated by rejection sampling of a ball.
inline constexpr double kMinAcceptanceRate = 1e-3;

/// Samples per RNG block. Block b draws from RngStream(seed, b) and block
/// statistics are merged in block order, so results do not depend on the
/// number of worker threads.
inline constexpr std::int64_t kSamplesPerBlock = 1 << 14;

using Integrand = std::function<double(const ThetaPoint&)>;
/// Fills `out` with several integrands evaluated at the same point.
using MultiIntegrand = std::function<void(const ThetaPoint&, std::span<double> out)>;

/// Unbiased estimate of the integral of f over `region` in dimension m.
///
/// OriginBall with r <= 1/2 is sampled by rejection from [-r, r]^m and the
/// estimate is vol(ball) * mean(f); SamplingError is thrown when the
/// acceptance rate vol(ball) / (2r)^m falls below kMinAcceptanceRate.
/// Other regions are sampled uniformly from the cube (or quarter cube)
/// with an exact membership indicator folded into the integrand.
Estimate integrate_mc(const Integrand& f, const Region& region, int m, std::int64_t samples,
                      std::uint64_t seed);

std::vector<Estimate> integrate_mc(const MultiIntegrand& f, int outputs, const Region& region, int m,
                                   std::int64_t samples, std::uint64_t seed);

/// Integral of f over the Euclidean ball |x|_2 <= radius in R^m (not reduced
/// modulo 1), by rejection from the bounding cube. Same block scheme and
/// acceptance floor as integrate_mc.
Estimate integrate_euclidean_ball(const std::function<double(const Eigen::VectorXd&)>& f, int m, double radius,
                                  std::int64_t samples, std::uint64_t seed);

/// Doubles the sample count (starting at `initial_samples`, rounded up to
/// whole blocks) until output 0 has std_error <= target or `max_samples`
/// is reached. Each round reuses the blocks of the previous one, so the
/// result equals a plain integrate_mc call at the final sample count.
std::vector<Estimate> integrate_mc_adaptive(const MultiIntegrand& f, int outputs, const Region& region,
                                            int m, double target_std_error, std::int64_t initial_samples,
                                            std::int64_t max_samples, std::uint64_t seed);

}  // namespace fdisc
