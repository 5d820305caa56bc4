#include "fdisc/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdisc/errors.hpp"
#include "fdisc/parallel.hpp"
#include "fdisc/rng.hpp"

namespace fdisc {

bool Region::contains(const Eigen::VectorXd& theta) const {
  switch (kind) {
    case Kind::FullCube:
      return true;
    case Kind::QuarterCube:
      return ((theta.array() >= -0.25) && (theta.array() < 0.25)).all();
    case Kind::OriginBall:
      return theta.norm() <= radius;
    case Kind::NearLattice:
      return d2_to_lattice(theta) < radius && theta.norm() > radius;
    case Kind::FarFromLattice:
      return d2_to_lattice(theta) >= radius;
  }
  return false;
}

std::optional<double> Region::volume(int m) const {
  const double ball = unit_ball_volume(m) * std::pow(radius, m);
  switch (kind) {
    case Kind::FullCube:
      return 1.0;
    case Kind::QuarterCube:
      return std::ldexp(1.0, -m);
    case Kind::OriginBall:
      if (radius <= 0.5) return ball;
      return std::nullopt;
    case Kind::NearLattice:
      // Pieces of the balls around equivalent lattice points tile one full
      // ball per class of {0, 1/2}^m modulo Z^m.
      if (radius < 0.25) return (std::ldexp(1.0, m) - 1.0) * ball;
      return std::nullopt;
    case Kind::FarFromLattice:
      if (radius < 0.25) return 1.0 - std::ldexp(1.0, m) * ball;
      return std::nullopt;
  }
  return std::nullopt;
}

std::string Region::name() const {
  switch (kind) {
    case Kind::FullCube: return "full_cube";
    case Kind::QuarterCube: return "quarter_cube";
    case Kind::OriginBall: return "origin_ball(" + std::to_string(radius) + ")";
    case Kind::NearLattice: return "near_lattice(" + std::to_string(radius) + ")";
    case Kind::FarFromLattice: return "far_from_lattice(" + std::to_string(radius) + ")";
  }
  return "?";
}

/// Draws points for one block of a region integral.
class ThetaSampler {
 public:
  ThetaSampler(const Region& region, int m) : region_(region), m_(m) {
    using Kind = Region::Kind;
    if (region.kind == Kind::OriginBall && region.radius <= 0.5) {
      rejection_ = true;
      half_width_ = region.radius;
      weight_ = *region.volume(m);
      const double acceptance = weight_ / std::pow(2.0 * half_width_, m);
      if (!(region.radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
      if (acceptance < kMinAcceptanceRate) {
        throw SamplingError("ball rejection sampling in dimension " + std::to_string(m) +
                            " has acceptance rate " + std::to_string(acceptance) +
                            " below the floor; integrate over a smaller-dimensional or cube region instead");
      }
    } else if (region.kind == Kind::QuarterCube) {
      half_width_ = 0.25;
      weight_ = std::ldexp(1.0, -m);
    } else {
      half_width_ = 0.5;
      weight_ = 1.0;
      indicator_ = region.kind != Kind::FullCube;
    }
  }

  // Returns a point and whether the integrand counts there.
  ThetaPoint draw(RngStream& rng, bool& inside) const {
    Eigen::VectorXd p(m_);
    for (;;) {
      for (int i = 0; i < m_; ++i) p(i) = rng.uniform(-half_width_, half_width_);
      if (!rejection_ || p.norm() <= half_width_) break;
    }
    inside = !indicator_ || region_.contains(p);
    return ThetaPoint(std::move(p), ThetaPoint::Unchecked{});
  }

  double weight() const { return weight_; }

 private:
  Region region_;
  int m_;
  bool rejection_ = false;
  bool indicator_ = false;
  double half_width_ = 0.5;
  double weight_ = 1.0;
};

namespace {

// Welford accumulator; merge() is Chan's pairwise update.
struct Moments {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(other.count) / total;
    count += other.count;
  }
};

std::vector<Moments> run_block(const MultiIntegrand& f, int outputs, const ThetaSampler& sampler,
                               std::int64_t begin, std::int64_t end, std::uint64_t seed, std::uint64_t block) {
  RngStream rng(seed, block);
  std::vector<Moments> acc(outputs);
  std::vector<double> values(outputs);
  for (std::int64_t s = begin; s < end; ++s) {
    bool inside = true;
    const ThetaPoint theta = sampler.draw(rng, inside);
    if (inside) {
      f(theta, values);
    } else {
      std::fill(values.begin(), values.end(), 0.0);
    }
    for (int k = 0; k < outputs; ++k) acc[k].add(values[k]);
  }
  return acc;
}

class BlockedIntegral {
 public:
  BlockedIntegral(const MultiIntegrand& f, int outputs, const Region& region, int m, std::uint64_t seed)
      : f_(f), outputs_(outputs), sampler_(region, m), seed_(seed) {
    if (outputs <= 0) throw std::invalid_argument("need at least one integrand output");
  }

  // Extends the block list to cover `samples` samples.
  void extend_to(std::int64_t samples) {
    if (samples <= 0) throw std::invalid_argument("sample count must be positive");
    const std::int64_t blocks = (samples + kSamplesPerBlock - 1) / kSamplesPerBlock;
    // A trailing partial block is recomputed when the target grows.
    if (!blocks_.empty() && block_sizes_.back() < kSamplesPerBlock) {
      blocks_.pop_back();
      block_sizes_.pop_back();
    }
    const auto first = static_cast<std::int64_t>(blocks_.size());
    if (first >= blocks) return;
    std::vector<std::vector<Moments>> fresh(static_cast<std::size_t>(blocks - first));
    std::vector<std::int64_t> sizes(fresh.size());
    parallel_for(fresh.size(), [&](std::size_t k) {
      const std::int64_t b = first + static_cast<std::int64_t>(k);
      const std::int64_t begin = b * kSamplesPerBlock;
      const std::int64_t end = std::min(samples, begin + kSamplesPerBlock);
      fresh[k] = run_block(f_, outputs_, sampler_, begin, end, seed_, static_cast<std::uint64_t>(b));
      sizes[k] = end - begin;
    });
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      blocks_.push_back(std::move(fresh[k]));
      block_sizes_.push_back(sizes[k]);
    }
    samples_ = samples;
  }

  std::vector<Estimate> estimates() const {
    std::vector<Moments> total(outputs_);
    for (const auto& block : blocks_) {
      for (int k = 0; k < outputs_; ++k) total[k].merge(block[k]);
    }
    std::vector<Estimate> out(outputs_);
    const double w = sampler_.weight();
    for (int k = 0; k < outputs_; ++k) {
      const auto& mo = total[k];
      const double n = static_cast<double>(mo.count);
      const double sd = mo.count > 1 ? std::sqrt(std::max(0.0, mo.m2 / (n - 1.0))) : 0.0;
      out[k] = {w * mo.mean, w * sd / std::sqrt(n), mo.count, seed_};
    }
    return out;
  }

  std::int64_t samples() const { return samples_; }

 private:
  const MultiIntegrand& f_;
  int outputs_;
  ThetaSampler sampler_;
  std::uint64_t seed_;
  std::int64_t samples_ = 0;
  std::vector<std::vector<Moments>> blocks_;
  std::vector<std::int64_t> block_sizes_;
};

}  // namespace

std::vector<Estimate> integrate_mc(const MultiIntegrand& f, int outputs, const Region& region, int m,
                                   std::int64_t samples, std::uint64_t seed) {
  BlockedIntegral integral(f, outputs, region, m, seed);
  integral.extend_to(samples);
  return integral.estimates();
}

Estimate integrate_mc(const Integrand& f, const Region& region, int m, std::int64_t samples,
                      std::uint64_t seed) {
  const MultiIntegrand wrapped = [&f](const ThetaPoint& theta, std::span<double> out) { out[0] = f(theta); };
  return integrate_mc(wrapped, 1, region, m, samples, seed).front();
}

Estimate integrate_euclidean_ball(const std::function<double(const Eigen::VectorXd&)>& f, int m, double radius,
                                  std::int64_t samples, std::uint64_t seed) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (samples <= 0) throw std::invalid_argument("sample count must be positive");
  const double volume = unit_ball_volume(m) * std::pow(radius, m);
  if (volume / std::pow(2.0 * radius, m) < kMinAcceptanceRate) {
    throw SamplingError("ball rejection sampling in dimension " + std::to_string(m) +
                        " has acceptance rate below the floor");
  }
  const std::int64_t blocks = (samples + kSamplesPerBlock - 1) / kSamplesPerBlock;
  std::vector<Moments> parts(static_cast<std::size_t>(blocks));
  parallel_for(parts.size(), [&](std::size_t b) {
    RngStream rng(seed, b);
    const std::int64_t begin = static_cast<std::int64_t>(b) * kSamplesPerBlock;
    const std::int64_t end = std::min(samples, begin + kSamplesPerBlock);
    Eigen::VectorXd x(m);
    for (std::int64_t s = begin; s < end; ++s) {
      do {
        for (int i = 0; i < m; ++i) x(i) = rng.uniform(-radius, radius);
      } while (x.norm() > radius);
      parts[b].add(f(x));
    }
  });
  Moments total;
  for (const auto& part : parts) total.merge(part);
  const double n = static_cast<double>(total.count);
  const double sd = total.count > 1 ? std::sqrt(std::max(0.0, total.m2 / (n - 1.0))) : 0.0;
  return {volume * total.mean, volume * sd / std::sqrt(n), total.count, seed};
}

std::vector<Estimate> integrate_mc_adaptive(const MultiIntegrand& f, int outputs, const Region& region,
                                            int m, double target_std_error, std::int64_t initial_samples,
                                            std::int64_t max_samples, std::uint64_t seed) {
  if (initial_samples <= 0 || max_samples < initial_samples) {
    throw std::invalid_argument("need 0 < initial_samples <= max_samples");
  }
  const auto round_up = [](std::int64_t s) {
    return ((s + kSamplesPerBlock - 1) / kSamplesPerBlock) * kSamplesPerBlock;
  };
  BlockedIntegral integral(f, outputs, region, m, seed);
  std::int64_t samples = round_up(initial_samples);
  const std::int64_t cap = std::max(samples, round_up(max_samples));
  for (;;) {
    integral.extend_to(samples);
    auto est = integral.estimates();
    if (est.front().std_error <= target_std_error || samples >= cap) return est;
    samples = std::min(cap, 2 * samples);
  }
}

}  // namespace fdisc
