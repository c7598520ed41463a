#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "escdb/catalog/udf_registry.hpp"
#include "escdb/sql/predicate.hpp"
#include "escdb/storage/table.hpp"

namespace escdb {

using RowIds = std::vector<std::uint32_t>;

/// A single-table predicate compiled against one table. Column ids in the
/// predicate are read through their `column` member; `relation` is ignored.
///
/// Atoms run as branchless selection loops over a candidate list, so the cost
/// per candidate does not depend on how many rows qualify.
class TableFilter {
 public:
  TableFilter(const ColumnTable& table, const Predicate& predicate, const UdfRegistry& udfs);

  bool passes_everything() const { return root_.kind == Predicate::Kind::True; }

  /// Appends the qualifying rows of [begin, end) to `out` in ascending order.
  void filter_range(std::uint32_t begin, std::uint32_t end, RowIds& out) const;
  /// Keeps the qualifying rows of `rows` (sorted) in place.
  void filter(RowIds& rows) const;

  /// Every qualifying row of the table.
  RowIds select_all() const;

 private:
  std::size_t run(const Predicate& p, std::uint32_t* rows, std::size_t n) const;
  std::size_t run_atom(const Predicate& p, std::uint32_t* rows, std::size_t n) const;
  std::size_t run_function(const Predicate& p, std::uint32_t* rows, std::size_t n) const;

  const ColumnTable& table_;
  const UdfRegistry& udfs_;
  Predicate root_;
  // TextCompare atoms are answered by a per-dictionary-code lookup table,
  // keyed by the atom's address in `root_`.
  std::vector<std::pair<const Predicate*, std::vector<std::uint8_t>>> text_tables_;
};

/// Value of a numeric cell as a double (decimals unscaled, dates as day numbers).
double numeric_as_double(const Column& column, std::size_t row);

/// Row-at-a-time evaluation under SQL three-valued logic collapsed to
/// boolean at the end. `column_of` maps a ColumnId to its column and the
/// row to read; it serves both single-table and joined tuples.
using CellLocator = std::function<std::pair<const Column*, std::size_t>(ColumnId)>;
bool evaluate_row(const Predicate& predicate, const CellLocator& column_of, const UdfRegistry& udfs);

}  // namespace escdb
