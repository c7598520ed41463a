#include "escdb/exec/filter.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "escdb/error.hpp"

namespace escdb {

namespace {

// Writes the rows for which `keep(row)` holds to the front of `rows`.
// Reads never fall behind writes, so the compaction is safe in place.
template <typename Keep>
std::size_t compact(std::uint32_t* rows, std::size_t n, const Column& column, Keep keep) {
  std::size_t out = 0;
  if (column.has_nulls()) {
    const auto* nulls = column.null_mask().data();
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = rows[i];
      rows[out] = r;
      out += static_cast<std::size_t>((nulls[r] == 0) & keep(r));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = rows[i];
      rows[out] = r;
      out += static_cast<std::size_t>(keep(r));
    }
  }
  return out;
}

template <typename Cmp>
std::size_t compare_kernel(std::uint32_t* rows, std::size_t n, const Column& column, std::int64_t constant, Cmp cmp) {
  const auto* v = column.values().data();
  return compact(rows, n, column, [&](std::uint32_t r) { return cmp(v[r], constant); });
}

}  // namespace

double numeric_as_double(const Column& column, std::size_t row) {
  const auto v = static_cast<double>(column.value(row));
  if (column.type().id == TypeId::Decimal) return v / static_cast<double>(pow10(column.type().scale));
  return v;
}

TableFilter::TableFilter(const ColumnTable& table, const Predicate& predicate, const UdfRegistry& udfs)
    : table_(table), udfs_(udfs), root_(to_negation_normal_form(predicate)) {
  std::vector<const Predicate*> stack{&root_};
  while (!stack.empty()) {
    const auto* p = stack.back();
    stack.pop_back();
    for (const auto& c : p->children) stack.push_back(&c);
    if (p->kind == Predicate::Kind::TextCompare) {
      const auto& column = table_.column(p->column.column);
      const auto& dict = *column.dictionary();
      std::vector<std::uint8_t> pass(dict.size());
      for (std::size_t code = 0; code < dict.size(); ++code) {
        pass[code] = compare(p->op, std::string_view(dict.decode(static_cast<std::int64_t>(code))), std::string_view(p->text));
      }
      text_tables_.emplace_back(p, std::move(pass));
    } else if (p->kind == Predicate::Kind::Function) {
      const auto& udf = udfs_.get(p->function);
      if (udf.arity != p->args.size()) {
        throw Error(ErrorCode::ArityMismatch, fmt::format("'{}' takes {} arguments", p->function, udf.arity));
      }
    } else if (p->kind == Predicate::Kind::ColumnCompare) {
      throw Error(ErrorCode::UnsupportedPredicate, "a table filter cannot compare columns of two relations");
    }
  }
}

void TableFilter::filter_range(std::uint32_t begin, std::uint32_t end, RowIds& out) const {
  const auto base = out.size();
  out.resize(base + (end - begin));
  std::iota(out.begin() + static_cast<std::ptrdiff_t>(base), out.end(), begin);
  const auto kept = run(root_, out.data() + base, end - begin);
  out.resize(base + kept);
}

void TableFilter::filter(RowIds& rows) const { rows.resize(run(root_, rows.data(), rows.size())); }

RowIds TableFilter::select_all() const {
  RowIds out;
  filter_range(0, static_cast<std::uint32_t>(table_.row_count()), out);
  return out;
}

std::size_t TableFilter::run(const Predicate& p, std::uint32_t* rows, std::size_t n) const {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::True: return n;
    case K::False: return 0;
    case K::And:
      for (const auto& c : p.children) {
        if (n == 0) break;
        n = run(c, rows, n);
      }
      return n;
    case K::Or: {
      // Each branch only sees the rows no earlier branch accepted; the
      // accepted sets are disjoint and merged back in row order.
      RowIds remaining(rows, rows + n);
      RowIds accepted;
      RowIds scratch;
      for (const auto& c : p.children) {
        if (remaining.empty()) break;
        scratch = remaining;
        scratch.resize(run(c, scratch.data(), scratch.size()));
        if (scratch.empty()) continue;
        RowIds merged;
        merged.reserve(accepted.size() + scratch.size());
        std::merge(accepted.begin(), accepted.end(), scratch.begin(), scratch.end(), std::back_inserter(merged));
        accepted.swap(merged);
        RowIds rest;
        rest.reserve(remaining.size() - scratch.size());
        std::set_difference(remaining.begin(), remaining.end(), scratch.begin(), scratch.end(), std::back_inserter(rest));
        remaining.swap(rest);
      }
      std::copy(accepted.begin(), accepted.end(), rows);
      return accepted.size();
    }
    case K::Not: {
      // Only reachable for shapes the normal form keeps (none today); fall back to row evaluation.
      std::size_t out = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto r = rows[i];
        const CellLocator at = [&](ColumnId id) { return std::pair{&table_.column(id.column), std::size_t{r}}; };
        rows[out] = r;
        out += evaluate_row(p, at, udfs_) ? 1 : 0;
      }
      return out;
    }
    case K::Function: return run_function(p, rows, n);
    default: return run_atom(p, rows, n);
  }
}

std::size_t TableFilter::run_atom(const Predicate& p, std::uint32_t* rows, std::size_t n) const {
  const auto& column = table_.column(p.column.column);
  switch (p.kind) {
    case Predicate::Kind::Compare:
      switch (p.op) {
        case CompareOp::Eq: return compare_kernel(rows, n, column, p.value, std::equal_to<>{});
        case CompareOp::Ne: return compare_kernel(rows, n, column, p.value, std::not_equal_to<>{});
        case CompareOp::Lt: return compare_kernel(rows, n, column, p.value, std::less<>{});
        case CompareOp::Le: return compare_kernel(rows, n, column, p.value, std::less_equal<>{});
        case CompareOp::Gt: return compare_kernel(rows, n, column, p.value, std::greater<>{});
        case CompareOp::Ge: return compare_kernel(rows, n, column, p.value, std::greater_equal<>{});
      }
      return 0;
    case Predicate::Kind::Between: {
      const auto* v = column.values().data();
      const auto low = static_cast<std::uint64_t>(p.value);
      const auto width = static_cast<std::uint64_t>(p.high) - low;
      return compact(rows, n, column,
                     [&](std::uint32_t r) { return static_cast<std::uint64_t>(v[r]) - low <= width; });
    }
    case Predicate::Kind::TextCompare: {
      const auto it = std::find_if(text_tables_.begin(), text_tables_.end(),
                                   [&](const auto& entry) { return entry.first == &p; });
      const auto* pass = it->second.data();
      const auto* v = column.values().data();
      return compact(rows, n, column, [&](std::uint32_t r) { return pass[v[r]] != 0; });
    }
    default: throw Error(ErrorCode::ExecutionError, "unexpected predicate node in table filter");
  }
}

std::size_t TableFilter::run_function(const Predicate& p, std::uint32_t* rows, std::size_t n) const {
  const auto& udf = udfs_.get(p.function);
  std::vector<const Column*> args;
  for (const auto& a : p.args) args.push_back(&table_.column(a.column));
  std::vector<double> values(args.size());
  std::size_t out = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = rows[i];
    bool null_arg = false;
    for (std::size_t a = 0; a < args.size(); ++a) {
      null_arg |= args[a]->is_null(r);
      values[a] = numeric_as_double(*args[a], r);
    }
    if (null_arg) continue;
    double result = 0;
    try {
      result = udf.fn(values);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ExecutionError,
                  fmt::format("function '{}' failed on row {} of '{}': {}", p.function, r, table_.name(), e.what()));
    }
    rows[out] = r;
    out += compare(p.op, result, p.threshold) ? 1 : 0;
  }
  return out;
}

namespace {

// Three-valued evaluation: nullopt is UNKNOWN.
std::optional<bool> eval3(const Predicate& p, const CellLocator& at, const UdfRegistry& udfs) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::True: return true;
    case K::False: return false;
    case K::And: {
      std::optional<bool> result = true;
      for (const auto& c : p.children) {
        const auto v = eval3(c, at, udfs);
        if (v == false) return false;
        if (!v) result.reset();
      }
      return result;
    }
    case K::Or: {
      std::optional<bool> result = false;
      for (const auto& c : p.children) {
        const auto v = eval3(c, at, udfs);
        if (v == true) return true;
        if (!v) result.reset();
      }
      return result;
    }
    case K::Not: {
      const auto v = eval3(p.children.front(), at, udfs);
      if (!v) return std::nullopt;
      return !*v;
    }
    case K::Compare: {
      const auto [col, row] = at(p.column);
      if (col->is_null(row)) return std::nullopt;
      return compare(p.op, col->value(row), p.value);
    }
    case K::Between: {
      const auto [col, row] = at(p.column);
      if (col->is_null(row)) return std::nullopt;
      return col->value(row) >= p.value && col->value(row) <= p.high;
    }
    case K::TextCompare: {
      const auto [col, row] = at(p.column);
      if (col->is_null(row)) return std::nullopt;
      return compare(p.op, std::string_view(col->dictionary()->decode(col->value(row))), std::string_view(p.text));
    }
    case K::Function: {
      std::vector<double> values;
      for (const auto& a : p.args) {
        const auto [col, row] = at(a);
        if (col->is_null(row)) return std::nullopt;
        values.push_back(numeric_as_double(*col, row));
      }
      try {
        return compare(p.op, udfs.get(p.function).fn(values), p.threshold);
      } catch (const Error&) {
        throw;
      } catch (const std::exception& e) {
        throw Error(ErrorCode::ExecutionError, fmt::format("function '{}' failed: {}", p.function, e.what()));
      }
    }
    case K::ColumnCompare: {
      const auto [lc, lr] = at(p.column);
      const auto [rc, rr] = at(p.other);
      if (lc->is_null(lr) || rc->is_null(rr)) return std::nullopt;
      if (lc->type().id == TypeId::Text) {
        return compare(p.op, std::string_view(lc->dictionary()->decode(lc->value(lr))),
                       std::string_view(rc->dictionary()->decode(rc->value(rr))));
      }
      return compare(p.op, lc->value(lr), rc->value(rr));
    }
  }
  return std::nullopt;
}

}  // namespace

bool evaluate_row(const Predicate& predicate, const CellLocator& column_of, const UdfRegistry& udfs) {
  return eval3(predicate, column_of, udfs) == true;
}

}  // namespace escdb
