#pragma once

#include <stdexcept>
#include <string>

namespace convexkit {

/// Mismatched vector/operator dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An evaluation left the representable range (e.g. cosh overflow).
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// A nonfinite value or gradient showed up mid-computation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require_same_dim(long a, long b, const std::string& what) {
  if (a != b) {
    throw DimensionError(what + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace convexkit
