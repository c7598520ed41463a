#pragma once

#include <optional>
#include <string>
#include <vector>

#include "escdb/sql/predicate.hpp"

namespace escdb::ast {

struct SourceSpan {
  int line = 1;
  int column = 1;

  // Spans are diagnostics only; they never take part in AST identity.
  friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

struct ColumnRef {
  std::string qualifier;  // empty when unqualified
  std::string name;
  SourceSpan span;

  std::string to_string() const { return qualifier.empty() ? name : qualifier + "." + name; }
  friend bool operator==(const ColumnRef&, const ColumnRef&) = default;
};

struct Literal {
  enum class Kind { Integer, Decimal, String, Date };
  Kind kind = Kind::Integer;
  // Integer/Decimal: digits with optional leading '-'; String: unquoted
  // contents; Date: YYYY-MM-DD.
  std::string text;
  SourceSpan span;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Operand {
  enum class Kind { Column, Literal, Call };
  Kind kind = Kind::Column;
  ColumnRef column;
  Literal literal;
  std::string function;
  std::vector<ColumnRef> args;
  SourceSpan span;

  friend bool operator==(const Operand&, const Operand&) = default;
};

struct Expr {
  enum class Kind { And, Or, Not, Compare, Between };
  Kind kind = Kind::Compare;
  std::vector<Expr> children;  // And/Or/Not
  CompareOp op = CompareOp::Eq;
  Operand lhs;
  Operand rhs;  // Compare
  Literal low;  // Between
  Literal high;
  SourceSpan span;

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct TableRef {
  std::string name;
  std::string alias;  // empty when none given
  SourceSpan span;

  const std::string& effective_name() const { return alias.empty() ? name : alias; }
  friend bool operator==(const TableRef&, const TableRef&) = default;
};

struct Query {
  bool count_star = false;
  bool select_all = false;
  std::vector<ColumnRef> projections;
  std::vector<TableRef> tables;
  std::optional<Expr> where;

  friend bool operator==(const Query&, const Query&) = default;
};

}  // namespace escdb::ast
