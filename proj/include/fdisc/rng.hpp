#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fdisc {

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit seed is the key. The 128-bit counter is split into a 64-bit
/// block index (low words) and a 64-bit stream id (high words), so
/// `RngStream(seed, k)` for distinct k are non-overlapping sequences. Nested
/// streams (for example seed -> m -> trial) are obtained with derive().
///
/// Satisfies std::uniform_random_bit_generator with 64-bit outputs.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, bound) (bound > 0), rejection-sampled so it is unbiased.
  std::uint64_t below(std::uint64_t bound);
  bool coin() { return (operator()() >> 63) != 0; }
  /// Standard normal (Box-Muller; the second variate is cached).
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Raw Philox4x32-10 block function (exposed for known-answer tests).
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Mixes (seed, index) into a fresh seed; used to build nested stream trees.
std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

}  // namespace fdisc
