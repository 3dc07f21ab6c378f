#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corec {

enum class ErrorCode {
  ArityMismatch,
  ForeignSymbol,
  NotASummand,
  KindMismatch,
  MissingRule,
  DuplicateRule,
  UnguardedPath,
  InvalidHandle,
  RuleDiverged,
  ValidationFailed,
  VariableClash,
  EmptyAlphabet,
  BadActionStructure,
  UnknownOracle,
  UnknownSuite,
  SyntaxError,
  UnknownSymbol,
  InvalidCircuit,
  DanglingPort,
  NotGnf,
  Unguarded,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code is stable; the message is
/// for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace corec
