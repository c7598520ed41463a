#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace escdb {

enum class ErrorCode {
  // storage
  DuplicateTable,
  EmptySchema,
  DuplicateColumn,
  ArityMismatch,
  TypeMismatch,
  ParseError,
  LengthMismatch,
  DeadHandle,
  UnknownTable,
  IoError,
  // frontend
  SyntaxError,
  UnsupportedConstruct,
  UnknownColumn,
  AmbiguousColumn,
  UnknownFunction,
  DuplicateFunction,
  UnsupportedPredicate,
  // catalog
  UnsupportedColumnKind,
  Inestimable,
  // optimizer
  NoPredicate,
  CartesianProductRequired,
  InvalidConfig,
  // executor
  ExecutionError,
  // bench / cli
  ScaleTooSmall,
  UsageError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace escdb
