#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "escdb/storage/types.hpp"

namespace escdb {

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view compare_op_symbol(CompareOp op);
/// NOT (a op b) == a negate(op) b
CompareOp negate(CompareOp op);
/// (a op b) == (b mirror(op) a)
CompareOp mirror(CompareOp op);

template <typename T>
bool compare(CompareOp op, const T& lhs, const T& rhs) {
  switch (op) {
    case CompareOp::Eq: return lhs == rhs;
    case CompareOp::Ne: return lhs != rhs;
    case CompareOp::Lt: return lhs < rhs;
    case CompareOp::Le: return lhs <= rhs;
    case CompareOp::Gt: return lhs > rhs;
    case CompareOp::Ge: return lhs >= rhs;
  }
  return false;
}

/// A column of one relation in a query. `relation` indexes the FROM list,
/// `column` indexes the relation's base table.
struct ColumnId {
  std::size_t relation = 0;
  std::size_t column = 0;

  friend auto operator<=>(const ColumnId&, const ColumnId&) = default;
};

/// Bound boolean expression. Constants are already encoded in the physical
/// representation of the column they are compared with (scaled decimals,
/// day numbers, dictionary codes), so evaluation is integer comparison.
struct Predicate {
  enum class Kind {
    True,
    False,
    And,
    Or,
    Not,
    Compare,        // column op value (TEXT: Eq/Ne on dictionary code, -1 when absent)
    Between,        // value <= column <= high
    TextCompare,    // column op text, compared on decoded strings
    Function,       // fn(args...) op threshold
    ColumnCompare,  // column op other (cross-relation; only Eq becomes a join edge)
  };

  Kind kind = Kind::True;
  std::vector<Predicate> children;
  ColumnId column;
  ColumnId other;
  CompareOp op = CompareOp::Eq;
  std::int64_t value = 0;
  std::int64_t high = 0;
  std::string text;
  std::string function;
  std::vector<ColumnId> args;
  double threshold = 0;

  static Predicate always_true() { return {}; }
  static Predicate always_false();
  static Predicate conjunction(std::vector<Predicate> children);
  static Predicate disjunction(std::vector<Predicate> children);
  static Predicate negation(Predicate child);
  static Predicate compare(ColumnId column, CompareOp op, std::int64_t value);
  static Predicate text_equals(ColumnId column, CompareOp op, std::int64_t code, std::string text);
  static Predicate between(ColumnId column, std::int64_t low, std::int64_t high);
  static Predicate text_compare(ColumnId column, CompareOp op, std::string text);
  static Predicate call(std::string function, std::vector<ColumnId> args, CompareOp op, double threshold);
  static Predicate column_compare(ColumnId lhs, CompareOp op, ColumnId rhs);

  bool is_true() const { return kind == Kind::True; }
  bool is_false() const { return kind == Kind::False; }
  bool is_atom() const;

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Simplifies constant subtrees and flattens nested AND/OR.
Predicate fold_constants(Predicate predicate);

/// Pushes every NOT down to the atoms. Atoms evaluate to false on NULL, so
/// the result matches SQL three-valued logic collapsed to two values at the
/// filter boundary.
Predicate to_negation_normal_form(const Predicate& predicate);

/// Splits a top-level AND into its conjuncts (a non-AND is one conjunct).
std::vector<Predicate> conjuncts(const Predicate& predicate);

std::size_t count_atoms(const Predicate& predicate);
std::set<std::size_t> referenced_relations(const Predicate& predicate);
std::set<ColumnId> referenced_columns(const Predicate& predicate);

/// Rewrites every ColumnId through `map`.
Predicate remap_columns(const Predicate& predicate, const std::function<ColumnId(ColumnId)>& map);

struct PredicateRenderer {
  std::function<std::string(ColumnId)> column_name;
  std::function<ColumnType(ColumnId)> column_type;
};

/// SQL text for the predicate (used by EXPLAIN and for sub-query text).
std::string render(const Predicate& predicate, const PredicateRenderer& renderer);

}  // namespace escdb
