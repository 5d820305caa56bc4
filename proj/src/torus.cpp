#include "fdisc/torus.hpp"

#include <numbers>
#include <stdexcept>

#include "fdisc/rng.hpp"

namespace fdisc {
namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double scale = 1.0 / base;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale /= base;
  }
  return result;
}

// Halton coordinate d of point k with a Cranley-Patterson rotation.
double halton(std::uint64_t k, int d, double shift) {
  double v = radical_inverse(k + 1, kPrimes[d]) + shift;
  return v >= 1.0 ? v - 1.0 : v;
}

}  // namespace

ThetaPoint::ThetaPoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  for (Eigen::Index i = 0; i < coords_.size(); ++i) {
    if (!(coords_(i) >= -0.5 && coords_(i) < 0.5)) {
      throw std::invalid_argument("theta coordinates must lie in [-1/2, 1/2)");
    }
  }
}

ThetaPoint ThetaPoint::wrap(const Eigen::VectorXd& coords) {
  Eigen::VectorXd out(coords.size());
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    double v = coords(i) - std::floor(coords(i) + 0.5);
    if (v >= 0.5) v -= 1.0;
    out(i) = v;
  }
  return ThetaPoint(std::move(out), Unchecked{});
}

double unit_ball_volume(int m) {
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

std::vector<Eigen::VectorXd> box_test_points(int m, double lo, double hi, int count, std::uint64_t seed) {
  if (m > static_cast<int>(std::size(kPrimes))) throw std::invalid_argument("Halton points need m <= 32");
  RngStream rng(seed, 0);
  std::vector<double> shift(m);
  for (auto& s : shift) s = rng.uniform();
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd p(m);
    for (int d = 0; d < m; ++d) p(d) = lo + (hi - lo) * halton(static_cast<std::uint64_t>(k), d, shift[d]);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Eigen::VectorXd> ball_test_points(int m, double radius, int count, int axis_steps,
                                              std::uint64_t seed) {
  if (m > static_cast<int>(std::size(kPrimes))) throw std::invalid_argument("Halton points need m <= 32");
  std::vector<Eigen::VectorXd> out;
  out.push_back(Eigen::VectorXd::Zero(m));
  for (int d = 0; d < m; ++d) {
    for (int k = 1; k <= axis_steps; ++k) {
      for (const double sign : {-1.0, 1.0}) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(m);
        p(d) = sign * radius * k / axis_steps;
        out.push_back(std::move(p));
      }
    }
  }
  RngStream rng(seed, 0);
  std::vector<double> shift(m);
  for (auto& s : shift) s = rng.uniform();
  for (std::uint64_t k = 0; static_cast<int>(out.size()) < count; ++k) {
    Eigen::VectorXd p(m);
    for (int d = 0; d < m; ++d) p(d) = radius * (2.0 * halton(k, d, shift[d]) - 1.0);
    if (p.norm() <= radius) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace fdisc
