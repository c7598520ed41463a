#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "escdb/sql/predicate.hpp"
#include "escdb/storage/table.hpp"

namespace escdb {

struct ColumnStats {
  std::optional<std::int64_t> min;  // numeric and date columns with at least one non-NULL
  std::optional<std::int64_t> max;
  std::size_t distinct = 0;
  std::size_t nulls = 0;
};

struct TableStats {
  std::size_t row_count = 0;
  std::vector<ColumnStats> columns;
};

/// Exact statistics; desk-scale tables fit in memory.
TableStats collect_stats(const ColumnTable& table);

struct HistogramBucket {
  std::int64_t lower = 0;  // inclusive
  std::int64_t upper = 0;  // inclusive
  std::size_t count = 0;
  std::size_t distinct = 0;
};

/// Equi-depth histogram over the non-NULL values of one column. Equal values
/// never straddle a bucket boundary, so a bucket can exceed the target depth.
struct EquiDepthHistogram {
  std::size_t column = 0;
  std::size_t row_count = 0;  // including NULLs
  std::size_t null_count = 0;
  std::vector<HistogramBucket> buckets;

  /// Estimated rows with lo <= value <= hi, uniform within each bucket.
  double estimate_range(std::int64_t lo, std::int64_t hi) const;
  double estimate_equal(std::int64_t value) const;
};

constexpr std::size_t kDefaultHistogramBuckets = 64;
constexpr double kDefaultSelectivityGuess = 0.1;

EquiDepthHistogram build_histogram(const ColumnTable& table, std::size_t column, std::size_t buckets);

/// Histograms of one table keyed by column index.
using HistogramSet = std::map<std::size_t, EquiDepthHistogram>;

/// Textbook estimate: uniformity inside buckets, independence across atoms.
/// Predicate column ids index the table the histograms were built on. Throws
/// Inestimable for function calls, TEXT atoms or columns without histogram.
double estimate_selectivity(const HistogramSet& histograms, const Predicate& predicate);

}  // namespace escdb
