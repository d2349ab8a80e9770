#pragma once

#include <stdexcept>
#include <string>

namespace gaussdist {

/// Input violates a documented precondition (bad dimensions, invalid state, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A size guard (dense Hilbert-space dimension, enumeration size) was exceeded.
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A numerical condition that the algorithm cannot recover from.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gaussdist
