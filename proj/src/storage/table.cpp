#include "escdb/storage/table.hpp"

#include <charconv>
#include <unordered_set>

#include <fmt/format.h>

#include "escdb/error.hpp"

namespace escdb {

namespace {

void check_unique_names(const std::string& table, const std::vector<Column>& columns) {
  std::unordered_set<std::string_view> seen;
  for (const auto& c : columns) {
    if (!seen.insert(c.name()).second) {
      throw Error(ErrorCode::DuplicateColumn, fmt::format("column '{}' appears twice in '{}'", c.name(), table));
    }
  }
}

// Returns the encoded value, or std::nullopt for NULL.
std::optional<std::int64_t> encode_datum(const Datum& datum, const Column& column) {
  const auto& type = column.type();
  auto mismatch = [&](std::string_view what) {
    return Error(ErrorCode::TypeMismatch,
                 fmt::format("cannot store {} in column '{}' of type {}", what, column.name(), type.to_string()));
  };
  return std::visit(
      [&](const auto& v) -> std::optional<std::int64_t> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Null>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          if (type.id == TypeId::Int64) return v;
          if (type.id == TypeId::Decimal) return v * pow10(type.scale);
          throw mismatch("an integer");
        } else if constexpr (std::is_same_v<T, DecimalValue>) {
          if (type.id != TypeId::Decimal) throw mismatch("a decimal");
          if (v.scale <= type.scale) return v.unscaled * pow10(type.scale - v.scale);
          const auto divisor = pow10(v.scale - type.scale);
          if (v.unscaled % divisor != 0) throw mismatch("a decimal with excess fractional digits");
          return v.unscaled / divisor;
        } else if constexpr (std::is_same_v<T, DateValue>) {
          if (type.id != TypeId::Date) throw mismatch("a date");
          return v.days;
        } else {
          if (type.id != TypeId::Text) throw mismatch(fmt::format("text '{}'", v));
          return 0;  // encoded by the caller, after validation
        }
      },
      datum);
}

}  // namespace

ColumnTable::ColumnTable(std::string name, const Schema& schema, bool temporary)
    : name_(std::move(name)), temporary_(temporary) {
  if (schema.empty()) throw Error(ErrorCode::EmptySchema, fmt::format("table '{}' has no columns", name_));
  columns_.reserve(schema.size());
  for (const auto& def : schema) columns_.emplace_back(def.name, def.type);
  check_unique_names(name_, columns_);
}

ColumnTable::ColumnTable(std::string name, std::vector<Column> columns, bool temporary)
    : name_(std::move(name)), columns_(std::move(columns)), temporary_(temporary) {
  if (columns_.empty()) throw Error(ErrorCode::EmptySchema, fmt::format("table '{}' has no columns", name_));
  check_unique_names(name_, columns_);
  seal();
}

std::optional<std::size_t> ColumnTable::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name() == name) return i;
  }
  return std::nullopt;
}

std::size_t ColumnTable::column_index(std::string_view name) const {
  if (auto idx = find_column(name)) return *idx;
  throw Error(ErrorCode::UnknownColumn, fmt::format("table '{}' has no column '{}'", name_, name));
}

Schema ColumnTable::schema() const {
  Schema out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back({c.name(), c.type()});
  return out;
}

void ColumnTable::append_rows(std::span<const Row> rows) {
  std::vector<std::optional<std::int64_t>> encoded(rows.size() * columns_.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != columns_.size()) {
      throw Error(ErrorCode::ArityMismatch, fmt::format("row {} has {} values, table '{}' has {} columns", r,
                                                        rows[r].size(), name_, columns_.size()));
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) encoded[r * columns_.size() + c] = encode_datum(rows[r][c], columns_[c]);
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      auto& column = columns_[c];
      const auto& value = encoded[r * columns_.size() + c];
      if (!value) {
        column.push_null();
      } else if (column.type().id == TypeId::Text) {
        column.push_back(column.dictionary()->encode(std::get<std::string>(rows[r][c])));
      } else {
        column.push_back(*value);
      }
    }
  }
  row_count_ += rows.size();
}

void ColumnTable::append_text_row(std::span<const std::optional<std::string>> fields) {
  if (fields.size() != columns_.size()) {
    throw Error(ErrorCode::ArityMismatch,
                fmt::format("expected {} fields for table '{}', got {}", columns_.size(), name_, fields.size()));
  }
  std::vector<std::optional<std::int64_t>> encoded(fields.size());
  for (std::size_t c = 0; c < fields.size(); ++c) {
    if (!fields[c]) continue;
    const auto& text = *fields[c];
    const auto& type = columns_[c].type();
    switch (type.id) {
      case TypeId::Int64: {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
          throw Error(ErrorCode::ParseError, fmt::format("'{}' is not an integer (column '{}')", text, columns_[c].name()));
        }
        encoded[c] = v;
        break;
      }
      case TypeId::Decimal: encoded[c] = parse_decimal(text, type.scale); break;
      case TypeId::Date: encoded[c] = parse_date(text); break;
      case TypeId::Text: encoded[c] = 0; break;
    }
  }
  for (std::size_t c = 0; c < fields.size(); ++c) {
    auto& column = columns_[c];
    if (!fields[c]) {
      column.push_null();
    } else if (column.type().id == TypeId::Text) {
      column.push_back(column.dictionary()->encode(*fields[c]));
    } else {
      column.push_back(*encoded[c]);
    }
  }
  ++row_count_;
}

void ColumnTable::reserve(std::size_t rows) {
  for (auto& c : columns_) c.reserve(rows);
}

void ColumnTable::seal() {
  const auto rows = columns_.front().size();
  for (const auto& c : columns_) {
    if (c.size() != rows) {
      throw Error(ErrorCode::LengthMismatch, fmt::format("column '{}' has {} values but '{}' has {}", c.name(), c.size(),
                                                         columns_.front().name(), rows));
    }
  }
  row_count_ = rows;
}

}  // namespace escdb
