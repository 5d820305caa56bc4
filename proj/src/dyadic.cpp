#include "fdisc/dyadic.hpp"

#include <algorithm>
#include <cmath>

namespace fdisc {

DyadicRational::DyadicRational(BigInt num, int log2_den) : num_(std::move(num)), log2_den_(log2_den) {
  if (log2_den_ < 0) {
    num_ <<= -log2_den_;
    log2_den_ = 0;
  }
}

DyadicRational DyadicRational::normalized() const {
  if (num_ == 0) return DyadicRational(0, 0);
  BigInt num = num_;
  int k = log2_den_;
  while (k > 0 && (num & 1) == 0) {
    num >>= 1;
    --k;
  }
  return DyadicRational(std::move(num), k);
}

double DyadicRational::to_double() const {
  // Keep the leading 64 bits so the conversion never overflows a double.
  const auto bits = num_ == 0 ? 0 : static_cast<int>(boost::multiprecision::msb(abs(num_))) + 1;
  const int shift = std::max(0, bits - 64);
  const BigInt top = num_ >> shift;
  return std::ldexp(top.convert_to<double>(), shift - log2_den_);
}

std::string DyadicRational::to_string() const {
  const auto r = normalized();
  return r.num_.str() + "/2^" + std::to_string(r.log2_den_);
}

DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
  const int k = std::max(a.log2_den_, b.log2_den_);
  return DyadicRational((a.num_ << (k - a.log2_den_)) + (b.num_ << (k - b.log2_den_)), k);
}

DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
  return DyadicRational(a.num_ * b.num_, a.log2_den_ + b.log2_den_);
}

bool operator==(const DyadicRational& a, const DyadicRational& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
  const int k = std::max(a.log2_den_, b.log2_den_);
  const BigInt lhs = a.num_ << (k - a.log2_den_);
  const BigInt rhs = b.num_ << (k - b.log2_den_);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace fdisc
