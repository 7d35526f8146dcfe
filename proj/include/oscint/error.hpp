#pragma once

#include <stdexcept>
#include <string>

namespace oscint {

/// Error categories; the numeric values double as C API status codes.
enum class ErrorCode : int {
  kParse = 1,
  kDimension = 2,
  kDomain = 3,
  kIncompatible = 4,
  kNotConverged = 5,
  kIo = 6,
  kInternal = 7,
  kArgument = 8,
  kPrecondition = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(ErrorCode::kParse, what + " at line " + std::to_string(line) +
                                     ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorCode::kDimension, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::kDomain, what) {}
};

class IncompatibleMatrix : public Error {
 public:
  explicit IncompatibleMatrix(const std::string& what)
      : Error(ErrorCode::kIncompatible, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorCode::kPrecondition, what) {}
};

}  // namespace oscint
