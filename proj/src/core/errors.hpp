#pragma once

#include <stdexcept>
#include <string>

namespace subpert {

// Mirrors subpert_status in the C header; the C API maps one onto the other.
enum class ErrorCode {
  kDomain = 1,
  kValidation = 2,
  kNumeric = 3,
  kAmbiguity = 4,
  kDimension = 5,
  kSize = 6,
  kIo = 7,
  kInternal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Argument outside the domain of an estimating function.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::kDomain, what) {}
};

/// Input violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::kValidation, what) {}
};

/// Non-convergence, near-singular systems, stale residuals.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorCode::kNumeric, what) {}
};

/// An eigenvalue cannot be assigned to a spectral class with confidence.
class AmbiguityError : public Error {
 public:
  explicit AmbiguityError(const std::string& what)
      : Error(ErrorCode::kAmbiguity, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorCode::kDimension, what) {}
};

class SizeError : public Error {
 public:
  explicit SizeError(const std::string& what)
      : Error(ErrorCode::kSize, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

/// A self-consistency check failed; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what)
      : Error(ErrorCode::kInternal, what) {}
};

}  // namespace subpert
