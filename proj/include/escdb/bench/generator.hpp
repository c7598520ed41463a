#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "escdb/catalog/catalog.hpp"

namespace escdb::bench {

enum class Benchmark { TpchSubset, SsbSubset, Custom };

std::string_view benchmark_name(Benchmark b);
Benchmark parse_benchmark(std::string_view text);

/// Scale is a fraction of the standard scale factor 1 sizes (orders
/// 1.5M rows, lineorder 6M rows, ...).
struct GenSpec {
  Benchmark benchmark = Benchmark::TpchSubset;
  double scale = 0.01;
  std::uint64_t seed = 1;
  /// Zipf exponent for foreign keys into part and supplier; 0 is uniform.
  double fk_zipf = 0;
  /// Cross-column correlations: prices follow dates and sizes, order status
  /// follows dates, account balances follow nations.
  bool correlated = true;
};

/// Tables in a fixed order. Identical specs give identical tables.
/// Throws ScaleTooSmall when a table would have no rows.
std::vector<std::shared_ptr<ColumnTable>> generate(const GenSpec& spec);

/// Generates the tables into the catalog and registers the benchmark functions.
void load_benchmark(Catalog& catalog, const GenSpec& spec);

/// price_per_day(price, date): price divided by the days since 1991-12-31.
void register_bench_functions(UdfRegistry& udfs);

/// Writes one <table>.csv per generated table (with header) into `dir`.
std::vector<std::string> write_benchmark_csv(const GenSpec& spec, const std::string& dir);

/// Table row count for a standard size at `scale`; throws ScaleTooSmall at 0.
std::size_t scaled_rows(double base_rows, double scale, std::string_view table);

}  // namespace escdb::bench
