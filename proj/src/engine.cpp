#include "escdb/engine.hpp"

#include <chrono>

namespace escdb {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

QueryRun run_bound(Catalog& catalog, const BoundQuery& query, const RunOptions& options, Clock::time_point start) {
  QueryRun run;
  auto plan = plan_query(query, options.esc, catalog);
  run.plan_ms = elapsed_ms(start);
  const ExplainOptions explain{options.redact_timings};
  run.explain = explain_text(plan, explain);
  run.explain_json = explain_json(plan, explain);
  run.build_order = plan.build_order();
  run.build_card_sum = plan.build_cardinality_sum();

  const auto exec_start = Clock::now();
  run.result = execute(plan.to_pipeline(), catalog.udfs(), ExecOptions{options.workers});
  run.exec_ms = elapsed_ms(exec_start);
  plan.release_temps();
  run.decisions = std::move(plan.decisions);
  run.total_ms = elapsed_ms(start);
  return run;
}

}  // namespace

QueryRun run_query(Catalog& catalog, std::string_view sql, const RunOptions& options) {
  const auto start = Clock::now();
  return run_bound(catalog, analyze_sql(sql, catalog), options, start);
}

QueryRun run_query(Catalog& catalog, const BoundQuery& query, const RunOptions& options) {
  return run_bound(catalog, query, options, Clock::now());
}

}  // namespace escdb
