#pragma once

#include <stdexcept>
#include <string>

namespace twopoint {

/// Base of every error raised by the library. `family()` is a stable,
/// machine-readable tag used by the CLI for error objects and exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* family() const noexcept { return "internal"; }
  virtual int exit_code() const noexcept { return 1; }
};

class ValidationError : public Error {
 public:
  using Error::Error;
  const char* family() const noexcept override { return "validation"; }
  int exit_code() const noexcept override { return 2; }
};

class ArithmeticError : public Error {
 public:
  using Error::Error;
  const char* family() const noexcept override { return "arithmetic"; }
  int exit_code() const noexcept override { return 3; }
};

/// Classes from different sectors of the inertia stack were combined.
class SectorError : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
  const char* family() const noexcept override { return "sector"; }
};

/// A nonzero remainder appeared while dividing by (z1 + z2).
class DivisibilityError : public Error {
 public:
  DivisibilityError(const std::string& msg, int antidiagonal)
      : Error(msg), antidiagonal_(antidiagonal) {}
  int antidiagonal() const noexcept { return antidiagonal_; }
  const char* family() const noexcept override { return "divisibility"; }
  int exit_code() const noexcept override { return 4; }

 private:
  int antidiagonal_;
};

/// A column generator produced positive powers of z.
class ConditionError : public Error {
 public:
  using Error::Error;
  const char* family() const noexcept override { return "condition"; }
  int exit_code() const noexcept override { return 5; }
};

/// Non-equivariant limits disagree between two lambda assignments.
class LimitError : public Error {
 public:
  using Error::Error;
  const char* family() const noexcept override { return "limit"; }
  int exit_code() const noexcept override { return 6; }
};

class DegenerateLambdaError : public Error {
 public:
  using Error::Error;
  const char* family() const noexcept override { return "degenerate-lambda"; }
  int exit_code() const noexcept override { return 7; }
};

class NotCertifiedError : public Error {
 public:
  using Error::Error;
  const char* family() const noexcept override { return "not-certified"; }
  int exit_code() const noexcept override { return 8; }
};

}  // namespace twopoint
