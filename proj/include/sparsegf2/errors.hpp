#pragma once

#include <stdexcept>
#include <string>

namespace sparsegf2 {

// Malformed user input (rho grammar, matrix text, CLI values).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidDistribution : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidParam : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Arbitrary-precision sum could not reach the requested relative accuracy.
class PrecisionLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncationTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalResidue : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Independent numerical routes to the same quantity disagree.
class Inconsistent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparsegf2
