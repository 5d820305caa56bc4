#pragma once

#include <stdexcept>
#include <string>

namespace fdisc {

/// Operand shapes disagree (for example a coloring whose length is not n).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exact enumeration was asked to run past its size cap.
class SizeLimitExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sampling scheme cannot reach its region efficiently enough.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fdisc
