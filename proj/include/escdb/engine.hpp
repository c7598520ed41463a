#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "escdb/catalog/catalog.hpp"
#include "escdb/exec/pipeline.hpp"
#include "escdb/optimizer/esc.hpp"

namespace escdb {

struct RunOptions {
  EscConfig esc;
  std::size_t workers = 1;
  bool redact_timings = false;
};

/// Everything one query execution produced. Temp tables are already dropped.
struct QueryRun {
  QueryResult result;
  std::vector<EscDecision> decisions;
  std::vector<std::string> build_order;
  std::size_t build_card_sum = 0;
  std::string explain;
  std::string explain_json;
  double plan_ms = 0;  // analysis + optimization, sub-queries included
  double exec_ms = 0;
  double total_ms = 0;
};

/// Parse, analyze, plan and execute one statement.
QueryRun run_query(Catalog& catalog, std::string_view sql, const RunOptions& options = {});
QueryRun run_query(Catalog& catalog, const BoundQuery& query, const RunOptions& options = {});

}  // namespace escdb
