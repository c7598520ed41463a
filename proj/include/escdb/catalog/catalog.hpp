#pragma once

#include <map>
#include <string>
#include <string_view>
#include <tuple>

#include "escdb/catalog/statistics.hpp"
#include "escdb/catalog/udf_registry.hpp"
#include "escdb/storage/database.hpp"

namespace escdb {

/// Table metadata and function registry consulted by the frontend and the
/// planner. Statistics and histograms are computed lazily and cached per
/// table row count.
class Catalog {
 public:
  Database& database() { return database_; }
  const Database& database() const { return database_; }
  UdfRegistry& udfs() { return udfs_; }
  const UdfRegistry& udfs() const { return udfs_; }

  const TableStats& stats(std::string_view table);
  const EquiDepthHistogram& histogram(std::string_view table, std::size_t column,
                                      std::size_t buckets = kDefaultHistogramBuckets);

 private:
  Database database_;
  UdfRegistry udfs_;
  std::map<std::string, std::pair<std::size_t, TableStats>, std::less<>> stats_;
  std::map<std::tuple<std::string, std::size_t, std::size_t>, std::pair<std::size_t, EquiDepthHistogram>> histograms_;
};

}  // namespace escdb
