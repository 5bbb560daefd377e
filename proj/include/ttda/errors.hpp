#pragma once

#include <stdexcept>
#include <string>

namespace ttda {

// Base of every error raised by the library. Each subclass corresponds to one
// failure family; the CLI maps them onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid synthesis / analysis configuration (a bound is violated).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Unsupported or malformed file content.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Requested analysis window does not fit in the signal.
class ExtractionError : public Error {
 public:
  ExtractionError(const std::string& what, std::size_t available_tail)
      : Error(what), available_tail_(available_tail) {}
  std::size_t available_tail() const noexcept { return available_tail_; }

 private:
  std::size_t available_tail_;
};

/// Delay embedding infeasible for the given signal length.
class EmbeddingError : public Error {
 public:
  EmbeddingError(const std::string& what, std::size_t max_feasible_delay)
      : Error(what), max_feasible_delay_(max_feasible_delay) {}
  std::size_t max_feasible_delay() const noexcept { return max_feasible_delay_; }

 private:
  std::size_t max_feasible_delay_;
};

/// A filtration whose ordering violates the face-before-coface rule.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace ttda
