#ifndef LOMEM_ERROR_HPP
#define LOMEM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lomem {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied data or arguments that violate a precondition (exit code 2).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Input is well-formed but degenerate (e.g. zero periodogram sums under a log).
class DegenerateInput : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Frequency bandwidth / trimming combination yields no usable grid.
class InvalidBandwidth : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A text cell could not be parsed as a number, or is a missing-value marker.
class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& what, std::size_t row)
      : InvalidInput(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// A selected column or file holds no observations.
class EmptyInput : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Floating-point failure inside an estimator or sampler (exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// File system failure (exit code 4).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Process exit code associated with an error category.
inline int exit_code(const Error& e) {
  if (dynamic_cast<const InvalidInput*>(&e)) return 2;
  if (dynamic_cast<const NumericError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  return 1;
}

}  // namespace lomem

#endif  // LOMEM_ERROR_HPP
