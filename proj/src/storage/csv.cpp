#include "escdb/storage/csv.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "escdb/error.hpp"

namespace escdb {

namespace {

// Reads one record; returns false at end of input.
bool read_record(std::istream& in, char delimiter, std::vector<std::optional<std::string>>& fields) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;

  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  auto finish_field = [&] {
    if (!was_quoted && field == "\\N") {
      fields.emplace_back(std::nullopt);
    } else {
      fields.emplace_back(std::move(field));
    }
    field.clear();
    was_quoted = false;
  };

  for (; c != EOF; c = in.get()) {
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (ch == delimiter) {
      finish_field();
    } else if (ch == '\n') {
      break;
    } else if (ch == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else {
      field.push_back(ch);
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quoted field");
  finish_field();
  return true;
}

bool needs_quoting(const std::string& value, char delimiter) {
  if (value.empty() || value == "\\N") return true;
  for (char c : value) {
    if (c == delimiter || c == '"' || c == '\n' || c == '\r') return true;
  }
  return false;
}

void write_field(std::ostream& out, const std::string& value, char delimiter) {
  if (!needs_quoting(value, delimiter)) {
    out << value;
    return;
  }
  out << '"';
  for (char c : value) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

std::shared_ptr<ColumnTable> read_csv(std::istream& in, const std::string& table_name, const Schema& schema,
                                      const CsvOptions& options) {
  auto table = std::make_shared<ColumnTable>(table_name, schema);
  std::vector<std::optional<std::string>> fields;
  std::size_t row = 0;
  if (options.header) read_record(in, options.delimiter, fields);
  while (true) {
    try {
      if (!read_record(in, options.delimiter, fields)) break;
      ++row;
      // A trailing blank line is not a record.
      if (fields.size() == 1 && fields[0] && fields[0]->empty() && in.peek() == EOF) break;
      table->append_text_row(fields);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, fmt::format("row {}: {}", row == 0 ? 1 : row, e.what()));
    }
  }
  return table;
}

std::shared_ptr<ColumnTable> read_csv_file(const std::string& path, const std::string& table_name,
                                           const Schema& schema, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("cannot open '{}'", path));
  return read_csv(in, table_name, schema, options);
}

void write_csv(std::ostream& out, const ColumnTable& table, const CsvOptions& options) {
  const auto& columns = table.columns();
  if (options.header) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c > 0) out << options.delimiter;
      write_field(out, columns[c].name(), options.delimiter);
    }
    out << '\n';
  }
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c > 0) out << options.delimiter;
      const auto& column = columns[c];
      if (column.is_null(r)) {
        out << "\\N";
      } else if (column.type().id == TypeId::Text) {
        write_field(out, column.format(r), options.delimiter);
      } else {
        out << column.format(r);
      }
    }
    out << '\n';
  }
}

Schema parse_schema_spec(std::string_view spec) {
  Schema schema;
  std::size_t start = 0;
  int depth = 0;
  auto add = [&](std::string_view item) {
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    if (item.empty()) return;
    const auto colon = item.find(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw Error(ErrorCode::ParseError, fmt::format("schema entry '{}' is not name:TYPE", item));
    }
    schema.push_back({std::string(item.substr(0, colon)), parse_column_type(item.substr(colon + 1))});
  };
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (spec[i] == '(') ++depth;
    if (spec[i] == ')') --depth;
    if (spec[i] == ',' && depth == 0) {
      add(spec.substr(start, i - start));
      start = i + 1;
    }
  }
  add(spec.substr(start));
  if (schema.empty()) throw Error(ErrorCode::EmptySchema, "schema spec is empty");
  return schema;
}

}  // namespace escdb
