#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace escdb {

// Every column is physically a vector of int64_t. DECIMAL holds the value
// scaled by 10^scale, DATE holds days since 1970-01-01 and TEXT holds a
// dictionary code.
enum class TypeId : std::uint8_t { Int64, Decimal, Date, Text };

struct ColumnType {
  TypeId id = TypeId::Int64;
  int precision = 0;
  int scale = 0;

  static constexpr ColumnType int64() { return {TypeId::Int64, 0, 0}; }
  static constexpr ColumnType decimal(int precision, int scale) { return {TypeId::Decimal, precision, scale}; }
  static constexpr ColumnType date() { return {TypeId::Date, 0, 0}; }
  static constexpr ColumnType text() { return {TypeId::Text, 0, 0}; }

  bool is_numeric() const { return id != TypeId::Text; }
  std::string to_string() const;

  friend bool operator==(const ColumnType&, const ColumnType&) = default;
};

/// Parses "INT64", "INTEGER", "BIGINT", "DECIMAL(p,s)", "DATE" or "TEXT".
ColumnType parse_column_type(std::string_view text);

struct ColumnDef {
  std::string name;
  ColumnType type;

  friend bool operator==(const ColumnDef&, const ColumnDef&) = default;
};

using Schema = std::vector<ColumnDef>;

struct DecimalValue {
  std::int64_t unscaled = 0;
  int scale = 0;
};

struct DateValue {
  std::int32_t days = 0;
};

struct Null {};

/// One cell of a row batch handed to ColumnTable::append_rows.
using Datum = std::variant<Null, std::int64_t, DecimalValue, DateValue, std::string>;
using Row = std::vector<Datum>;

std::int64_t pow10(int exponent);

std::int32_t parse_date(std::string_view text);
std::string format_date(std::int32_t days);
std::int32_t date_from_ymd(int year, unsigned month, unsigned day);
int year_of(std::int32_t days);

/// Parses a decimal literal into an integer scaled to `scale`. Throws
/// ParseError on malformed text and TypeMismatch when digits would be lost.
std::int64_t parse_decimal(std::string_view text, int scale);
std::string format_decimal(std::int64_t unscaled, int scale);

}  // namespace escdb
