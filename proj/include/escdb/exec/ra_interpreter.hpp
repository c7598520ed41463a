#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "escdb/catalog/udf_registry.hpp"
#include "escdb/exec/filter.hpp"
#include "escdb/sql/relational.hpp"

namespace escdb {

/// Tuples produced by an RA subtree: one row id per contributing relation.
struct RaRows {
  std::vector<std::size_t> relations;  // relation index of each slot
  std::vector<RowIds> rows;            // rows[slot][tuple]
  std::vector<OutputColumn> schema;
  std::optional<std::int64_t> count;   // set by COUNT(*)

  std::size_t size() const { return rows.empty() ? 0 : rows.front().size(); }
};

/// Straightforward tuple-at-a-time interpreter for RA trees. It runs the
/// optimizer's single-table sub-queries and doubles as a reference executor.
RaRows run_ra(const RaNode& node, const std::vector<Relation>& relations, const UdfRegistry& udfs);

/// Value of a tree rooted at COUNT(*).
std::int64_t count_ra(const RaNode& node, const std::vector<Relation>& relations, const UdfRegistry& udfs);

/// Columns of a tree rooted at Project, named after their base columns.
std::vector<Column> materialize_ra(const RaNode& node, const std::vector<Relation>& relations, const UdfRegistry& udfs);

}  // namespace escdb
