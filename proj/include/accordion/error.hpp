#pragma once

#include <stdexcept>
#include <string>

namespace accordion {

// Process exit codes and C API status values share this numbering.
enum class ErrorCode : int {
  ok = 0,
  validation = 1,
  numerical = 2,
  io = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Bad parameters, out-of-range indices, malformed configuration.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::validation, what) {}
};

// Norm drift, eigensolver failure, ambiguous mode labelling.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::numerical, what) {}
};

// Perturbative series hits a vanishing denominator (2h = m*omega).
class ResonanceError : public NumericalError {
 public:
  explicit ResonanceError(const std::string& what) : NumericalError(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

}  // namespace accordion
