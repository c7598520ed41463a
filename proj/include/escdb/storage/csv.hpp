#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "escdb/storage/table.hpp"

namespace escdb {

struct CsvOptions {
  bool header = false;
  char delimiter = ',';
};

/// Reads RFC-4180 CSV. An unquoted `\N` is NULL, dates are YYYY-MM-DD.
/// Errors name the 1-based data row that failed.
std::shared_ptr<ColumnTable> read_csv(std::istream& in, const std::string& table_name, const Schema& schema,
                                      const CsvOptions& options = {});
std::shared_ptr<ColumnTable> read_csv_file(const std::string& path, const std::string& table_name,
                                           const Schema& schema, const CsvOptions& options = {});

/// Deterministic dump; identical tables produce identical bytes.
void write_csv(std::ostream& out, const ColumnTable& table, const CsvOptions& options = {});

/// "a:INT64,b:DECIMAL(15,2),c:TEXT" -> Schema.
Schema parse_schema_spec(std::string_view spec);

}  // namespace escdb
