#include "escdb/exec/operators.hpp"

#include <numeric>

namespace escdb {

RowIds RowSelection::indices() const {
  if (!all_rows) return rows;
  RowIds out(source->row_count());
  std::iota(out.begin(), out.end(), 0U);
  return out;
}

RowSelection eval_predicate(const ColumnTable& table, const Predicate& predicate, const RowSelection& selection,
                            const UdfRegistry& udfs) {
  const TableFilter filter(table, predicate, udfs);
  if (filter.passes_everything()) return selection;
  RowSelection out{&table, false, {}};
  if (selection.all_rows) {
    out.rows = filter.select_all();
  } else {
    out.rows = selection.rows;
    filter.filter(out.rows);
  }
  return out;
}

std::int64_t count_star(const ColumnTable& table, const Predicate& predicate, const UdfRegistry& udfs) {
  return static_cast<std::int64_t>(eval_predicate(table, predicate, RowSelection::all(table), udfs).size());
}

HashTableIndex build_hash(const ColumnTable& table, std::size_t key_column, const Predicate& residual,
                          const UdfRegistry& udfs) {
  auto rows = TableFilter(table, residual, udfs).select_all();
  const auto& column = table.column(key_column);
  std::erase_if(rows, [&](std::uint32_t r) { return column.is_null(r); });
  std::vector<std::int64_t> keys(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) keys[i] = column.value(rows[i]);
  return {key_column, table.row_count(), JoinHashTable(rows, keys)};
}

}  // namespace escdb
