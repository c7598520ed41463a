#pragma once

// Seeded test data and random predicate text shared by the unit, oracle and
// acceptance tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "escdb/catalog/catalog.hpp"

namespace escdb::testing {

inline const std::vector<std::string>& words() {
  static const std::vector<std::string> w{"AIR", "FOB", "MAIL", "RAIL", "SHIP", "TRUCK", "REG AIR", "a'b"};
  return w;
}

/// r(a INT64, b DECIMAL(10,2), c DATE, d TEXT, k INT64) with ~10% NULLs in a..d,
/// s(k INT64, x INT64, t TEXT) and t(x INT64, y DECIMAL(8,1)).
inline void add_fixture_tables(Catalog& catalog, std::uint64_t seed, std::size_t r_rows = 60, std::size_t s_rows = 25,
                               std::size_t t_rows = 12) {
  std::mt19937_64 rng(seed);
  auto& db = catalog.database();
  const auto maybe_null = [&](Datum d) -> Datum { return rng() % 10 == 0 ? Datum{Null{}} : d; };

  auto& r = db.create_table("r", {{"a", ColumnType::int64()},
                                  {"b", ColumnType::decimal(10, 2)},
                                  {"c", ColumnType::date()},
                                  {"d", ColumnType::text()},
                                  {"k", ColumnType::int64()}});
  std::vector<Row> rows;
  for (std::size_t i = 0; i < r_rows; ++i) {
    rows.push_back({maybe_null(static_cast<std::int64_t>(rng() % 41) - 20),
                    maybe_null(DecimalValue{static_cast<std::int64_t>(rng() % 4001) - 2000, 2}),
                    maybe_null(DateValue{date_from_ymd(1995, 1, 1) + static_cast<std::int32_t>(rng() % 60)}),
                    maybe_null(words()[rng() % (words().size() - 1)]),
                    static_cast<std::int64_t>(rng() % (s_rows + 3))});
  }
  r.append_rows(rows);

  auto& s = db.create_table("s", {{"k", ColumnType::int64()}, {"x", ColumnType::int64()}, {"t", ColumnType::text()}});
  rows.clear();
  for (std::size_t i = 0; i < s_rows; ++i) {
    rows.push_back({static_cast<std::int64_t>(i % (s_rows - 2)), maybe_null(static_cast<std::int64_t>(rng() % t_rows)),
                    words()[rng() % words().size()]});
  }
  s.append_rows(rows);

  auto& t = db.create_table("t", {{"x", ColumnType::int64()}, {"y", ColumnType::decimal(8, 1)}});
  rows.clear();
  for (std::size_t i = 0; i < t_rows; ++i) {
    rows.push_back({static_cast<std::int64_t>(i), maybe_null(DecimalValue{static_cast<std::int64_t>(rng() % 200), 1})});
  }
  t.append_rows(rows);
}

/// Registers f2(x, y) = x + 2y and inv(x) = 1 / x (throws on zero).
inline void add_fixture_functions(Catalog& catalog) {
  catalog.udfs().register_udf("f2", 2, [](std::span<const double> v) { return v[0] + 2 * v[1]; });
  catalog.udfs().register_udf("inv", 1, [](std::span<const double> v) {
    if (v[0] == 0) throw std::domain_error("division by zero");
    return 1 / v[0];
  });
}

/// Random WHERE clause over r's columns qualified by `alias`; covers every
/// literal kind, excess decimal digits, empty BETWEEN ranges, absent strings,
/// NOT, nested AND/OR and function calls.
class PredicateGenerator {
 public:
  PredicateGenerator(std::uint64_t seed, std::string alias = "r") : rng_(seed), alias_(std::move(alias)) {}

  std::string next(int depth = 3) {
    const auto roll = pick(10);
    if (depth > 0 && roll < 2) return fmt::format("({} AND {})", next(depth - 1), next(depth - 1));
    if (depth > 0 && roll < 4) return fmt::format("({} OR {})", next(depth - 1), next(depth - 1));
    if (depth > 0 && roll < 5) return fmt::format("NOT ({})", next(depth - 1));
    return atom();
  }

 private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  std::string op() {
    static const char* ops[] = {"=", "<>", "<", "<=", ">", ">="};
    return ops[pick(6)];
  }
  std::string col(const char* name) { return alias_ + "." + name; }
  std::string int_literal() { return std::to_string(pick(45) - 22); }
  std::string decimal_literal() {
    const int scale = pick(4);
    const auto unscaled = static_cast<long>(pick(4400)) - 2200;
    if (scale == 0) return std::to_string(unscaled / 100);
    const auto whole = std::llabs(unscaled) / static_cast<long>(std::pow(10, scale));
    const auto frac = std::llabs(unscaled) % static_cast<long>(std::pow(10, scale));
    return fmt::format("{}{}.{:0{}}", unscaled < 0 ? "-" : "", whole, frac, scale);
  }
  std::string date_literal() { return fmt::format("DATE '{}'", format_date(date_from_ymd(1995, 1, 1) + pick(64) - 2)); }
  std::string text_literal() {
    const auto& w = words();
    const auto i = static_cast<std::size_t>(pick(static_cast<int>(w.size()) + 1));
    std::string s = i < w.size() ? w[i] : "ZZZ absent";
    std::string quoted;
    for (char ch : s) quoted += ch == '\'' ? std::string("''") : std::string(1, ch);
    return "'" + quoted + "'";
  }

  std::string atom() {
    switch (pick(11)) {
      case 0: return fmt::format("{} {} {}", col("a"), op(), int_literal());
      case 1: return fmt::format("{} {} {}", col("b"), op(), decimal_literal());
      case 2: return fmt::format("{} {} {}", col("c"), op(), date_literal());
      case 3: return fmt::format("{} {} {}", col("d"), op(), text_literal());
      case 4: return fmt::format("{} BETWEEN {} AND {}", col("a"), int_literal(), int_literal());
      case 5: return fmt::format("{} BETWEEN {} AND {}", col("b"), decimal_literal(), decimal_literal());
      case 6: return fmt::format("{} BETWEEN {} AND {}", col("c"), date_literal(), date_literal());
      case 7: return fmt::format("{} BETWEEN {} AND {}", col("d"), text_literal(), text_literal());
      case 8: return fmt::format("f2({}, {}) {} {}", col("a"), col("b"), op(), decimal_literal());
      case 9: return fmt::format("{} {} {}", int_literal(), op(), col("a"));
      default: return fmt::format("{} {} {}", col("b"), op(), int_literal());
    }
  }

  std::mt19937_64 rng_;
  std::string alias_;
};

}  // namespace escdb::testing
