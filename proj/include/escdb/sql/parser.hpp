#pragma once

#include <string>
#include <string_view>

#include "escdb/sql/ast.hpp"

namespace escdb {

/// Parses one SELECT statement of the supported subset:
///
///   SELECT {* | COUNT(*) | col [, col]...}
///   FROM table [[AS] alias] [, ...]
///   [WHERE cond] [;]
///
/// where cond combines comparisons (=, <>, !=, <, <=, >, >=), BETWEEN a AND b,
/// BETWEEN (a, b) and scalar function calls with AND, OR, NOT and parentheses.
/// Anything else (GROUP BY, joins, subqueries...) raises UnsupportedConstruct
/// naming the construct; malformed input raises SyntaxError with line/column.
ast::Query parse_sql(std::string_view sql);

/// Canonical SQL text. parse_sql(to_sql(q)) == q.
std::string to_sql(const ast::Query& query);
std::string to_sql(const ast::Expr& expr);

}  // namespace escdb
