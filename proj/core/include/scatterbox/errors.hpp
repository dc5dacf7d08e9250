#pragma once

#include <stdexcept>
#include <string>

namespace scatterbox {

/// Error categories; the CLI maps them to process exit codes.
enum class ErrorCategory : int {
  validation = 2,  ///< malformed spec, config, or argument combination
  domain = 3,      ///< query outside a function's mathematical domain
  numerical = 4,   ///< pole proximity, truncation validity, convergence failure
  capacity = 5,    ///< problem-size guard tripped
  sample = 6,      ///< statistics requested on too small a sample
  io = 7,          ///< file system failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }
  int exit_code() const noexcept { return static_cast<int>(category_); }

 private:
  ErrorCategory category_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& w) : Error(ErrorCategory::validation, w) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& w) : Error(ErrorCategory::domain, w) {}
};

/// Operation only defined for some spatial dimensions (e.g. the bare series in d=1).
class DimensionError : public DomainError {
 public:
  explicit DimensionError(const std::string& w) : DomainError(w) {}
};

/// Enumeration cutoff below the first retained level.
class EmptySetError : public DomainError {
 public:
  explicit EmptySetError(const std::string& w) : DomainError(w) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& w) : Error(ErrorCategory::numerical, w) {}
};

/// Evaluation point indistinguishable from a pole at double precision.
class PoleProximityError : public NumericalError {
 public:
  explicit PoleProximityError(const std::string& w) : NumericalError(w) {}
};

/// Query outside the region where the truncation-plus-tail scheme is valid.
class TruncationError : public NumericalError {
 public:
  explicit TruncationError(const std::string& w) : NumericalError(w) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& w) : Error(ErrorCategory::capacity, w) {}
};

class SampleSizeError : public Error {
 public:
  explicit SampleSizeError(const std::string& w) : Error(ErrorCategory::sample, w) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& w) : Error(ErrorCategory::io, w) {}
};

}  // namespace scatterbox
