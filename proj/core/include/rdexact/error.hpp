#pragma once

#include <stdexcept>
#include <string>

namespace rdexact {

// Every library failure derives from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Caller asked for something that does not exist or does not fit together
// (unknown family name, parity mismatch, branch/parameter mismatch).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Too few defined samples to say anything about a residual.
class VerificationImpossible : public Error {
 public:
  using Error::Error;
};

// Time integration produced a non-finite value.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

// A front level was crossed zero or several times in one profile.
class AmbiguousFront : public Error {
 public:
  using Error::Error;
};

// Exact sampler undefined somewhere inside a comparison window.
class ComparisonDomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace rdexact
