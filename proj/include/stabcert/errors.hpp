#ifndef STABCERT_ERRORS_HPP
#define STABCERT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stabcert {

enum class ErrorCode {
  InvalidArgument,
  InvalidMatrix,
  NotMetzler,
  IndexOutOfRange,
  ZeroPivot,
  SingularMatrix,
  NonNegativeDiagonal,
  MissingEdge,
  TooManyCycles,
  CombinatorialBlowup,
  InvalidWitness,
  NoConvergence,
  StepRejected,
  ParseError,
  ConsistencyCheckFailed,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Off-diagonal entry below zero. Indices are 1-based, as in all reports.
class NotMetzlerError : public Error {
 public:
  NotMetzlerError(std::size_t row, std::size_t col, double value);

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t row_, col_;
  double value_;
};

/// Schur elimination hit a pivot below tolerance at the given working dimension.
class ZeroPivotError : public Error {
 public:
  explicit ZeroPivotError(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }

 private:
  std::size_t dimension_;
};

class TooManyCyclesError : public Error {
 public:
  explicit TooManyCyclesError(std::size_t cap);

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

/// Text/JSON input rejected; line and column are 1-based (0 when unknown).
class FileParseError : public Error {
 public:
  FileParseError(std::string message, std::size_t line, std::size_t col);

  std::size_t line() const noexcept { return line_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t line_, col_;
};

}  // namespace stabcert

#endif
