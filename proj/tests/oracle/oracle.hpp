#pragma once

// Brute-force reference evaluation straight from the parsed SQL. It shares
// only the parser and storage with the engine: no binder, no predicate
// encoding, no filters, no hash tables. Rows are enumerated by nested loops
// and WHERE is evaluated under three-valued logic with exact arithmetic.

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "escdb/catalog/catalog.hpp"
#include "escdb/error.hpp"
#include "escdb/sql/parser.hpp"

namespace escdb::oracle {

using Truth = std::optional<bool>;  // nullopt = UNKNOWN

struct Bound {
  std::vector<const ColumnTable*> tables;
  std::vector<std::string> aliases;
  std::vector<std::size_t> cursor;
};

inline std::pair<std::size_t, std::size_t> locate(const Bound& b, const ast::ColumnRef& ref) {
  for (std::size_t t = 0; t < b.tables.size(); ++t) {
    if (!ref.qualifier.empty() && ref.qualifier != b.aliases[t]) continue;
    if (auto c = b.tables[t]->find_column(ref.name)) return {t, *c};
  }
  throw Error(ErrorCode::UnknownColumn, ref.to_string());
}

// Exact comparison of scaled integers a / 10^sa and b / 10^sb.
inline int cmp_scaled(__int128 a, int sa, __int128 b, int sb) {
  while (sa < sb) {
    a *= 10;
    ++sa;
  }
  while (sb < sa) {
    b *= 10;
    ++sb;
  }
  return a < b ? -1 : (a > b ? 1 : 0);
}

inline bool apply(CompareOp op, int c) {
  switch (op) {
    case CompareOp::Eq: return c == 0;
    case CompareOp::Ne: return c != 0;
    case CompareOp::Lt: return c < 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
  }
  return false;
}

inline std::pair<__int128, int> literal_number(const ast::Literal& lit) {
  const auto dot = lit.text.find('.');
  std::string digits = lit.text;
  int scale = 0;
  if (dot != std::string::npos) {
    scale = static_cast<int>(lit.text.size() - dot - 1);
    digits.erase(dot, 1);
  }
  return {static_cast<__int128>(std::stoll(digits)), scale};
}

// Three-way comparison of a cell against a literal; nullopt when the cell is NULL.
inline std::optional<int> compare_cell(const Column& col, std::size_t row, const ast::Literal& lit) {
  if (col.is_null(row)) return std::nullopt;
  const auto v = col.value(row);
  switch (col.type().id) {
    case TypeId::Text: {
      const auto& s = col.dictionary()->decode(v);
      return s < lit.text ? -1 : (s > lit.text ? 1 : 0);
    }
    case TypeId::Date: {
      const auto d = parse_date(lit.text);
      return v < d ? -1 : (v > d ? 1 : 0);
    }
    default: {
      const auto [n, s] = literal_number(lit);
      return cmp_scaled(v, col.type().scale, n, s);
    }
  }
}

inline double cell_double(const Column& col, std::size_t row) {
  const auto v = static_cast<double>(col.value(row));
  return col.type().id == TypeId::Decimal ? v / static_cast<double>(pow10(col.type().scale)) : v;
}

inline Truth call_compare(const Bound& b, const UdfRegistry& udfs, const ast::Operand& call, CompareOp op,
                          const ast::Literal& lit) {
  std::vector<double> args;
  for (const auto& a : call.args) {
    const auto [t, c] = locate(b, a);
    const auto& col = b.tables[t]->column(c);
    if (col.is_null(b.cursor[t])) return std::nullopt;
    args.push_back(cell_double(col, b.cursor[t]));
  }
  const double result = udfs.get(call.function).fn(args);
  const double threshold =
      lit.kind == ast::Literal::Kind::Date ? static_cast<double>(parse_date(lit.text)) : std::strtod(lit.text.c_str(), nullptr);
  return apply(op, result < threshold ? -1 : (result > threshold ? 1 : 0));
}

inline Truth eval(const Bound& b, const UdfRegistry& udfs, const ast::Expr& e) {
  using K = ast::Expr::Kind;
  using OK = ast::Operand::Kind;
  switch (e.kind) {
    case K::And: {
      Truth r = true;
      for (const auto& c : e.children) {
        const auto v = eval(b, udfs, c);
        if (v == false) return false;
        if (!v) r.reset();
      }
      return r;
    }
    case K::Or: {
      Truth r = false;
      for (const auto& c : e.children) {
        const auto v = eval(b, udfs, c);
        if (v == true) return true;
        if (!v) r.reset();
      }
      return r;
    }
    case K::Not: {
      const auto v = eval(b, udfs, e.children.front());
      if (!v) return std::nullopt;
      return !*v;
    }
    case K::Between: {
      if (e.lhs.kind == OK::Call) {
        const auto lo = call_compare(b, udfs, e.lhs, CompareOp::Ge, e.low);
        const auto hi = call_compare(b, udfs, e.lhs, CompareOp::Le, e.high);
        if (lo == false || hi == false) return false;
        if (!lo || !hi) return std::nullopt;
        return true;
      }
      const auto [t, c] = locate(b, e.lhs.column);
      const auto& col = b.tables[t]->column(c);
      const auto lo = compare_cell(col, b.cursor[t], e.low);
      const auto hi = compare_cell(col, b.cursor[t], e.high);
      if (!lo) return std::nullopt;
      return *lo >= 0 && *hi <= 0;
    }
    case K::Compare: {
      if (e.lhs.kind == OK::Column && e.rhs.kind == OK::Column) {
        const auto [lt, lc] = locate(b, e.lhs.column);
        const auto [rt, rc] = locate(b, e.rhs.column);
        const auto& l = b.tables[lt]->column(lc);
        const auto& r = b.tables[rt]->column(rc);
        if (l.is_null(b.cursor[lt]) || r.is_null(b.cursor[rt])) return std::nullopt;
        if (l.type().id == TypeId::Text) {
          const auto c = l.dictionary()->decode(l.value(b.cursor[lt])).compare(r.dictionary()->decode(r.value(b.cursor[rt])));
          return apply(e.op, c < 0 ? -1 : (c > 0 ? 1 : 0));
        }
        return apply(e.op, cmp_scaled(l.value(b.cursor[lt]), l.type().scale, r.value(b.cursor[rt]), r.type().scale));
      }
      if (e.lhs.kind == OK::Call) return call_compare(b, udfs, e.lhs, e.op, e.rhs.literal);
      if (e.rhs.kind == OK::Call) return call_compare(b, udfs, e.rhs, mirror(e.op), e.lhs.literal);
      const bool column_left = e.lhs.kind == OK::Column;
      const auto& ref = column_left ? e.lhs.column : e.rhs.column;
      const auto& lit = column_left ? e.rhs.literal : e.lhs.literal;
      const auto [t, c] = locate(b, ref);
      const auto cmp = compare_cell(b.tables[t]->column(c), b.cursor[t], lit);
      if (!cmp) return std::nullopt;
      return apply(column_left ? e.op : mirror(e.op), *cmp);
    }
  }
  return std::nullopt;
}

struct Answer {
  std::int64_t count = 0;
  std::vector<std::vector<std::string>> rows;  // sorted, formatted cells
};

/// COUNT(*) or the sorted projected rows of `sql`, by nested loops.
inline Answer evaluate(const Catalog& catalog, const std::string& sql) {
  const auto q = parse_sql(sql);
  Bound b;
  for (const auto& t : q.tables) {
    b.tables.push_back(&catalog.database().table(t.name));
    b.aliases.push_back(t.effective_name());
  }
  b.cursor.assign(b.tables.size(), 0);

  std::vector<std::pair<std::size_t, std::size_t>> projected;
  if (!q.count_star) {
    if (q.select_all) {
      for (std::size_t t = 0; t < b.tables.size(); ++t) {
        for (std::size_t c = 0; c < b.tables[t]->column_count(); ++c) projected.emplace_back(t, c);
      }
    } else {
      for (const auto& ref : q.projections) projected.push_back(locate(b, ref));
    }
  }

  Answer answer;
  for (const auto* t : b.tables) {
    if (t->row_count() == 0) return answer;
  }
  while (true) {
    if (!q.where || eval(b, catalog.udfs(), *q.where) == true) {
      ++answer.count;
      if (!q.count_star) {
        std::vector<std::string> row;
        for (const auto [t, c] : projected) row.push_back(b.tables[t]->column(c).format(b.cursor[t]));
        answer.rows.push_back(std::move(row));
      }
    }
    std::size_t k = b.tables.size();
    while (k > 0) {
      --k;
      if (++b.cursor[k] < b.tables[k]->row_count()) break;
      b.cursor[k] = 0;
      if (k == 0) {
        std::sort(answer.rows.begin(), answer.rows.end());
        return answer;
      }
    }
  }
}

}  // namespace escdb::oracle
