#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "escdb/catalog/udf_registry.hpp"
#include "escdb/sql/predicate.hpp"
#include "escdb/storage/table.hpp"

namespace escdb {

/// A table scanned by the pipeline together with its pushed filter. Column
/// ids in `filter` use `relation` = pipeline slot and `column` = table column.
struct ScanInput {
  std::string alias;
  std::shared_ptr<const ColumnTable> table;
  Predicate filter;
};

/// One equality between a column of an earlier slot and a build column.
struct KeyPair {
  ColumnId probe_side;       // (slot, column) of an already joined relation
  std::size_t build_column;  // column of this step's table
};

struct BuildStep {
  ScanInput input;
  std::vector<KeyPair> keys;  // the first pair is hashed, the rest are verified
};

/// Left-deep hash-join pipeline: the probe relation is slot 0 and build
/// step i is slot i + 1. Probe rows stream through every hash table in order.
struct JoinPipeline {
  ScanInput probe;
  std::vector<BuildStep> builds;
  bool count_star = true;
  std::vector<ColumnId> output;  // (slot, column) when !count_star
  std::vector<std::string> output_names;
};

struct ExecOptions {
  std::size_t workers = 1;
  std::size_t chunk_rows = 2048;
};

struct JoinStepStats {
  std::string alias;
  std::size_t build_input_rows = 0;  // rows scanned to build the hash table
  std::size_t build_rows = 0;        // rows inserted after the filter
  std::size_t lookups = 0;           // intermediate tuples probed into this table
  std::size_t matches = 0;           // tuples produced by this join
};

struct ExecStats {
  std::size_t probe_rows = 0;
  std::size_t probe_qualifying = 0;
  std::vector<JoinStepStats> joins;
  double build_ms = 0;
  double probe_ms = 0;
};

struct QueryResult {
  bool count_star = true;
  std::int64_t count = 0;  // COUNT(*) value, or the number of result rows
  std::vector<std::string> names;
  std::vector<Column> columns;
  ExecStats stats;

  /// The result as a table: one "count" column for COUNT(*) queries.
  ColumnTable to_table(const std::string& name = "result") const;
};

QueryResult execute(const JoinPipeline& pipeline, const UdfRegistry& udfs, const ExecOptions& options = {});

}  // namespace escdb
