#pragma once

#include <stdexcept>
#include <string>

namespace besov {

// Raised on malformed arguments: bad exponents, mismatched grids, off-line pairs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a function carries spectral mass the partition cannot resolve.
class SpectralTruncation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when an input violates a documented precondition (nonzero mean, L1 mass above 1, ...).
class InvalidInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace besov
