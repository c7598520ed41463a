#pragma once

#include <cstdint>
#include <optional>

#include "escdb/exec/filter.hpp"
#include "escdb/exec/hash_table.hpp"

namespace escdb {

/// Selected rows of one table: every row, or a strictly increasing index list.
struct RowSelection {
  const ColumnTable* source = nullptr;
  bool all_rows = true;
  RowIds rows;

  static RowSelection all(const ColumnTable& table) { return {&table, true, {}}; }
  std::size_t size() const { return all_rows ? source->row_count() : rows.size(); }
  /// The selected indices, expanding the all-rows marker.
  RowIds indices() const;
};

RowSelection eval_predicate(const ColumnTable& table, const Predicate& predicate, const RowSelection& selection,
                            const UdfRegistry& udfs);

std::int64_t count_star(const ColumnTable& table, const Predicate& predicate, const UdfRegistry& udfs);

/// Hash index over the rows of `table` that pass `residual`, keyed on `key_column`.
struct HashTableIndex {
  std::size_t key_column = 0;
  std::size_t input_rows = 0;
  JoinHashTable table;
};

HashTableIndex build_hash(const ColumnTable& table, std::size_t key_column, const Predicate& residual,
                          const UdfRegistry& udfs);

}  // namespace escdb
