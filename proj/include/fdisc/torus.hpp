#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace fdisc {

/// A point of the fundamental domain [-1/2, 1/2)^m of the torus.
class ThetaPoint {
 public:
  /// Throws std::invalid_argument unless every coordinate lies in [-1/2, 1/2).
  explicit ThetaPoint(Eigen::VectorXd coords);
  /// Reduces each coordinate modulo 1 into [-1/2, 1/2).
  static ThetaPoint wrap(const Eigen::VectorXd& coords);

  const Eigen::VectorXd& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double operator()(int i) const { return coords_(i); }

 private:
  struct Unchecked {};
  ThetaPoint(Eigen::VectorXd coords, Unchecked) : coords_(std::move(coords)) {}
  friend class ThetaSampler;

  Eigen::VectorXd coords_;
};

/// Distance from x to the nearest point of (1/2)Z.
inline double distance_to_half_integers(double x) {
  const double r = x - 0.5 * std::round(2.0 * x);
  return std::abs(r);
}

/// d_2(theta, Lambda) with Lambda = {-1/2, 0, 1/2}^m, computed coordinatewise.
/// Exact on the fundamental domain; off it, this is the distance to (1/2)Z^m.
template <typename Derived>
double d2_to_lattice(const Eigen::MatrixBase<Derived>& theta) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double d = distance_to_half_integers(theta(i));
    total += d * d;
  }
  return std::sqrt(total);
}

/// Volume of the Euclidean unit ball in dimension m.
double unit_ball_volume(int m);

/// Deterministic test points in the ball of radius `radius`: points along
/// each coordinate axis (both signs, `axis_steps` per half-axis, including
/// the origin once) followed by randomly shifted Halton points kept if they
/// fall inside the ball, until `count` points in total.
std::vector<Eigen::VectorXd> ball_test_points(int m, double radius, int count, int axis_steps,
                                              std::uint64_t seed);

/// Randomly shifted Halton points in the box [lo, hi)^m.
std::vector<Eigen::VectorXd> box_test_points(int m, double lo, double hi, int count, std::uint64_t seed);

}  // namespace fdisc
