#include "escdb/storage/types.hpp"

#include <cctype>
#include <charconv>
#include <chrono>

#include <fmt/format.h>

#include "escdb/error.hpp"

namespace escdb {

namespace {

std::string upper(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

int parse_small_int(std::string_view text, std::string_view context) {
  int value = 0;
  text = trim(text);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, fmt::format("bad number '{}' in {}", text, context));
  }
  return value;
}

}  // namespace

std::string ColumnType::to_string() const {
  switch (id) {
    case TypeId::Int64: return "INT64";
    case TypeId::Decimal: return fmt::format("DECIMAL({},{})", precision, scale);
    case TypeId::Date: return "DATE";
    case TypeId::Text: return "TEXT";
  }
  return "?";
}

ColumnType parse_column_type(std::string_view text) {
  const auto name = upper(trim(text));
  if (name == "INT64" || name == "INTEGER" || name == "INT" || name == "BIGINT") return ColumnType::int64();
  if (name == "DATE") return ColumnType::date();
  if (name == "TEXT" || name == "VARCHAR" || name == "STRING") return ColumnType::text();
  if (name.rfind("DECIMAL", 0) == 0) {
    const auto open = name.find('(');
    const auto close = name.find(')');
    const auto comma = name.find(',');
    if (open == std::string::npos || close == std::string::npos || comma == std::string::npos || comma > close) {
      throw Error(ErrorCode::ParseError, fmt::format("malformed type '{}'", text));
    }
    const int precision = parse_small_int(std::string_view(name).substr(open + 1, comma - open - 1), name);
    const int scale = parse_small_int(std::string_view(name).substr(comma + 1, close - comma - 1), name);
    if (precision < 1 || precision > 18 || scale < 0 || scale > precision) {
      throw Error(ErrorCode::ParseError, fmt::format("unsupported decimal precision/scale in '{}'", text));
    }
    return ColumnType::decimal(precision, scale);
  }
  throw Error(ErrorCode::ParseError, fmt::format("unknown column type '{}'", text));
}

std::int64_t pow10(int exponent) {
  std::int64_t result = 1;
  for (int i = 0; i < exponent; ++i) result *= 10;
  return result;
}

std::int32_t date_from_ymd(int year, unsigned month, unsigned day) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
  if (!ymd.ok()) throw Error(ErrorCode::ParseError, fmt::format("invalid date {}-{}-{}", year, month, day));
  return static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count());
}

std::int32_t parse_date(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw Error(ErrorCode::ParseError, fmt::format("bad date '{}', expected YYYY-MM-DD", text));
  }
  const int y = parse_small_int(text.substr(0, 4), text);
  const int m = parse_small_int(text.substr(5, 2), text);
  const int d = parse_small_int(text.substr(8, 2), text);
  if (m < 1 || m > 12 || d < 1 || d > 31) throw Error(ErrorCode::ParseError, fmt::format("bad date '{}'", text));
  return date_from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string format_date(std::int32_t days) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()));
}

int year_of(std::int32_t days) {
  using namespace std::chrono;
  return static_cast<int>(year_month_day{sys_days{std::chrono::days{days}}}.year());
}

std::int64_t parse_decimal(std::string_view text, int scale) {
  text = trim(text);
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty decimal");
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const auto int_part = text.substr(0, dot);
  const auto frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) throw Error(ErrorCode::ParseError, fmt::format("bad decimal '{}'", text));
  std::int64_t value = 0;
  for (char c : int_part) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw Error(ErrorCode::ParseError, fmt::format("bad decimal '{}'", text));
    value = value * 10 + (c - '0');
  }
  int digits = 0;
  for (char c : frac_part) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw Error(ErrorCode::ParseError, fmt::format("bad decimal '{}'", text));
    if (digits < scale) {
      value = value * 10 + (c - '0');
      ++digits;
    } else if (c != '0') {
      throw Error(ErrorCode::TypeMismatch, fmt::format("'{}' has more than {} fractional digits", text, scale));
    }
  }
  value *= pow10(scale - digits);
  return negative ? -value : value;
}

std::string format_decimal(std::int64_t unscaled, int scale) {
  if (scale == 0) return std::to_string(unscaled);
  const bool negative = unscaled < 0;
  const std::uint64_t magnitude = negative ? static_cast<std::uint64_t>(-(unscaled + 1)) + 1 : static_cast<std::uint64_t>(unscaled);
  const auto divisor = static_cast<std::uint64_t>(pow10(scale));
  return fmt::format("{}{}.{:0{}d}", negative ? "-" : "", magnitude / divisor, magnitude % divisor, scale);
}

}  // namespace escdb
