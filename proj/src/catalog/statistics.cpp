#include "escdb/catalog/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include <fmt/format.h>

#include "escdb/error.hpp"

namespace escdb {

TableStats collect_stats(const ColumnTable& table) {
  TableStats stats;
  stats.row_count = table.row_count();
  for (const auto& column : table.columns()) {
    ColumnStats cs;
    std::unordered_set<std::int64_t> seen;
    for (std::size_t r = 0; r < column.size(); ++r) {
      if (column.is_null(r)) {
        ++cs.nulls;
        continue;
      }
      const auto v = column.value(r);
      seen.insert(v);
      if (column.type().is_numeric()) {
        cs.min = cs.min ? std::min(*cs.min, v) : v;
        cs.max = cs.max ? std::max(*cs.max, v) : v;
      }
    }
    cs.distinct = seen.size();
    stats.columns.push_back(cs);
  }
  return stats;
}

EquiDepthHistogram build_histogram(const ColumnTable& table, std::size_t column_index, std::size_t bucket_count) {
  const auto& column = table.column(column_index);
  if (!column.type().is_numeric()) {
    throw Error(ErrorCode::UnsupportedColumnKind,
                fmt::format("cannot build a histogram on {} column '{}'", column.type().to_string(), column.name()));
  }
  if (bucket_count < 1) throw Error(ErrorCode::InvalidConfig, "histogram needs at least one bucket");

  EquiDepthHistogram h;
  h.column = column_index;
  h.row_count = table.row_count();
  std::vector<std::int64_t> values;
  values.reserve(column.size());
  for (std::size_t r = 0; r < column.size(); ++r) {
    if (column.is_null(r)) {
      ++h.null_count;
    } else {
      values.push_back(column.value(r));
    }
  }
  std::sort(values.begin(), values.end());

  const std::size_t n = values.size();
  std::size_t begin = 0;
  std::size_t built = 0;
  while (begin < n) {
    const std::size_t remaining_buckets = std::max<std::size_t>(1, bucket_count - std::min(built, bucket_count - 1));
    const std::size_t depth = (n - begin + remaining_buckets - 1) / remaining_buckets;
    std::size_t end = std::min(n, begin + depth);
    while (end < n && values[end] == values[end - 1]) ++end;

    HistogramBucket b;
    b.lower = values[begin];
    b.upper = values[end - 1];
    b.count = end - begin;
    b.distinct = 1;
    for (std::size_t i = begin + 1; i < end; ++i) b.distinct += values[i] != values[i - 1] ? 1 : 0;
    h.buckets.push_back(b);
    begin = end;
    ++built;
  }
  return h;
}

double EquiDepthHistogram::estimate_range(std::int64_t lo, std::int64_t hi) const {
  if (lo > hi) return 0;
  double rows = 0;
  for (const auto& b : buckets) {
    const auto from = std::max(lo, b.lower);
    const auto to = std::min(hi, b.upper);
    if (from > to) continue;
    const double width = static_cast<double>(b.upper) - static_cast<double>(b.lower) + 1.0;
    const double covered = static_cast<double>(to) - static_cast<double>(from) + 1.0;
    rows += static_cast<double>(b.count) * covered / width;
  }
  return rows;
}

double EquiDepthHistogram::estimate_equal(std::int64_t value) const {
  for (const auto& b : buckets) {
    if (value >= b.lower && value <= b.upper) return static_cast<double>(b.count) / static_cast<double>(b.distinct);
  }
  return 0;
}

namespace {

constexpr auto kMin = std::numeric_limits<std::int64_t>::min();
constexpr auto kMax = std::numeric_limits<std::int64_t>::max();

[[noreturn]] void inestimable(std::string_view why) { throw Error(ErrorCode::Inestimable, std::string(why)); }

const EquiDepthHistogram& histogram_for(const HistogramSet& hists, ColumnId column) {
  auto it = hists.find(column.column);
  if (it == hists.end()) inestimable(fmt::format("no histogram for column {}", column.column));
  return it->second;
}

double estimate(const HistogramSet& hists, const Predicate& p) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::True: return 1;
    case K::False: return 0;
    case K::And: {
      double s = 1;
      for (const auto& c : p.children) s *= estimate(hists, c);
      return s;
    }
    case K::Or: {
      double miss = 1;
      for (const auto& c : p.children) miss *= 1 - estimate(hists, c);
      return 1 - miss;
    }
    case K::Not: return 1 - estimate(hists, p.children.front());
    case K::Compare: {
      if (!p.text.empty()) inestimable("TEXT comparison has no histogram");
      const auto& h = histogram_for(hists, p.column);
      if (h.row_count == 0) return 0;
      const double rows = static_cast<double>(h.row_count);
      const double non_null = static_cast<double>(h.row_count - h.null_count);
      const auto v = p.value;
      switch (p.op) {
        case CompareOp::Eq: return h.estimate_equal(v) / rows;
        case CompareOp::Ne: return (non_null - h.estimate_equal(v)) / rows;
        case CompareOp::Lt: return v == kMin ? 0 : h.estimate_range(kMin, v - 1) / rows;
        case CompareOp::Le: return h.estimate_range(kMin, v) / rows;
        case CompareOp::Gt: return v == kMax ? 0 : h.estimate_range(v + 1, kMax) / rows;
        case CompareOp::Ge: return h.estimate_range(v, kMax) / rows;
      }
      return 0;
    }
    case K::Between: {
      const auto& h = histogram_for(hists, p.column);
      if (h.row_count == 0) return 0;
      return h.estimate_range(p.value, p.high) / static_cast<double>(h.row_count);
    }
    case K::TextCompare: inestimable("TEXT range comparison has no histogram");
    case K::Function: inestimable(fmt::format("function '{}' cannot be estimated", p.function));
    case K::ColumnCompare: inestimable("column comparison cannot be estimated");
  }
  return 1;
}

}  // namespace

double estimate_selectivity(const HistogramSet& histograms, const Predicate& predicate) {
  return std::clamp(estimate(histograms, predicate), 0.0, 1.0);
}

}  // namespace escdb
