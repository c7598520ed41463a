#include "escdb/catalog/catalog.hpp"

namespace escdb {

const TableStats& Catalog::stats(std::string_view name) {
  const auto& table = database_.table(name);
  auto it = stats_.find(name);
  if (it == stats_.end() || it->second.first != table.row_count()) {
    it = stats_.insert_or_assign(std::string(name), std::pair{table.row_count(), collect_stats(table)}).first;
  }
  return it->second.second;
}

const EquiDepthHistogram& Catalog::histogram(std::string_view name, std::size_t column, std::size_t buckets) {
  const auto& table = database_.table(name);
  auto key = std::tuple{std::string(name), column, buckets};
  auto it = histograms_.find(key);
  if (it == histograms_.end() || it->second.first != table.row_count()) {
    it = histograms_.insert_or_assign(key, std::pair{table.row_count(), build_histogram(table, column, buckets)}).first;
  }
  return it->second.second;
}

}  // namespace escdb
