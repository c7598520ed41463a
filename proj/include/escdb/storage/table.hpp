#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "escdb/storage/column.hpp"
#include "escdb/storage/types.hpp"

namespace escdb {

/// Columnar relation. All columns always hold exactly row_count() values.
class ColumnTable {
 public:
  ColumnTable(std::string name, const Schema& schema, bool temporary = false);
  ColumnTable(std::string name, std::vector<Column> columns, bool temporary = false);

  const std::string& name() const { return name_; }
  std::size_t row_count() const { return row_count_; }
  bool is_temporary() const { return temporary_; }

  std::size_t column_count() const { return columns_.size(); }
  const Column& column(std::size_t index) const { return columns_.at(index); }
  const std::vector<Column>& columns() const { return columns_; }
  std::optional<std::size_t> find_column(std::string_view name) const;
  std::size_t column_index(std::string_view name) const;
  Schema schema() const;

  /// Appends a batch atomically: either every row is appended or none.
  void append_rows(std::span<const Row> rows);

  /// Appends one row of textual fields (CSV). std::nullopt means NULL.
  void append_text_row(std::span<const std::optional<std::string>> fields);

  void reserve(std::size_t rows);

  /// Appends raw encoded values to a column; used by generators that fill
  /// column by column. Callers must keep all columns the same length before
  /// calling seal().
  Column& mutable_column(std::size_t index) { return columns_.at(index); }
  void seal();

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::size_t row_count_ = 0;
  bool temporary_ = false;
};

}  // namespace escdb
