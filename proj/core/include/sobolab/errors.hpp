#pragma once

#include <stdexcept>
#include <string>

namespace sobolab {

/// Precondition violated by the caller (bad exponent, nonpositive length, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A size or iteration guard tripped.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spectral function is undefined on part of the spectrum (e.g. H^{-1/2} with a zero mode).
class SingularOperatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A theorem hypothesis does not hold for the supplied data (e.g. lambda0 <= 0).
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sobolab
