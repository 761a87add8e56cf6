#pragma once

#include <stdexcept>
#include <string>

namespace letcc {

/// Bad caller input: shapes, ranges, ordering, non-finite values.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fewer than three knots; natural cubic splines need at least three.
class DegenerateBasis : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A factorization that should succeed did not.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nothing to decode from (no surviving workers).
class DecodeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace letcc
