#pragma once

#include <compare>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace fdisc {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational num / 2^log2_den. Arithmetic keeps the value exact;
/// normalized() strips common factors of two.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(BigInt num, int log2_den);

  const BigInt& numerator() const { return num_; }
  int log2_denominator() const { return log2_den_; }

  DyadicRational normalized() const;
  double to_double() const;
  std::string to_string() const;  // "num/2^k" in lowest terms

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b);
  friend bool operator==(const DyadicRational& a, const DyadicRational& b);
  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);

 private:
  BigInt num_ = 0;
  int log2_den_ = 0;
};

}  // namespace fdisc
