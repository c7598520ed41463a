#include "escdb/error.hpp"

namespace escdb {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateTable: return "DuplicateTable";
    case ErrorCode::EmptySchema: return "EmptySchema";
    case ErrorCode::DuplicateColumn: return "DuplicateColumn";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DeadHandle: return "DeadHandle";
    case ErrorCode::UnknownTable: return "UnknownTable";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::AmbiguousColumn: return "AmbiguousColumn";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::DuplicateFunction: return "DuplicateFunction";
    case ErrorCode::UnsupportedPredicate: return "UnsupportedPredicate";
    case ErrorCode::UnsupportedColumnKind: return "UnsupportedColumnKind";
    case ErrorCode::Inestimable: return "Inestimable";
    case ErrorCode::NoPredicate: return "NoPredicate";
    case ErrorCode::CartesianProductRequired: return "CartesianProductRequired";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ExecutionError: return "ExecutionError";
    case ErrorCode::ScaleTooSmall: return "ScaleTooSmall";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace escdb
