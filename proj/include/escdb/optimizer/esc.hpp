#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "escdb/catalog/catalog.hpp"
#include "escdb/exec/pipeline.hpp"
#include "escdb/sql/relational.hpp"
#include "escdb/storage/database.hpp"

namespace escdb {

enum class EstimatorMode { None, Histogram };

std::string_view estimator_mode_name(EstimatorMode mode);
EstimatorMode parse_estimator_mode(std::string_view text);

struct EscConfig {
  bool enabled = true;
  std::size_t min_table_size = 1000;
  double max_selectivity = 0.2;
  /// Ordering used by the arm without exact counts (enabled = false).
  EstimatorMode estimator = EstimatorMode::None;
  /// When false the counting sub-queries still run but nothing is pushed down.
  bool materialize = true;
  std::size_t histogram_buckets = kDefaultHistogramBuckets;
  double default_guess = kDefaultSelectivityGuess;

  /// Throws InvalidConfig when a field is out of range.
  void validate() const;
};

struct EscDecision {
  std::string table;  // alias
  std::string base_table;
  Predicate predicate;
  std::string predicate_sql;
  std::size_t row_count = 0;
  std::int64_t exact_count = 0;
  double selectivity = 0;
  bool pushed_down = false;
  std::optional<TempTableHandle> temp;
  double subquery_ms = 0;
  double materialize_ms = 0;
};

/// Relation read by the plan: the base table, or the temp table holding its
/// pushed-down selection.
struct PlanInput {
  std::size_t relation = 0;
  std::string alias;
  std::string base_table;
  std::shared_ptr<const ColumnTable> source;
  std::optional<TempTableHandle> temp;
  /// Base column index -> column of `source` (identity for base tables).
  std::vector<std::optional<std::size_t>> column_map;
  Predicate filter;                     // fused into the scan; True for temps
  double effective_cardinality = 0;     // value used to order the builds

  std::size_t rows() const { return source->row_count(); }
};

struct PlanBuild {
  PlanInput input;
  std::vector<JoinEdge> keys;  // left = earlier relation, right = this relation
};

/// Left-deep plan: one probe relation streamed through the builds in order.
struct PhysicalPlan {
  std::vector<Relation> relations;
  PlanInput probe;
  std::vector<PlanBuild> builds;
  bool count_star = true;
  std::vector<OutputColumn> output;
  std::vector<EscDecision> decisions;
  EscConfig config;
  /// Keeps the pushed-down temp tables alive until the plan is executed.
  std::vector<TempTableLease> leases;

  /// Sum over build steps of the rows scanned to build each hash table.
  std::size_t build_cardinality_sum() const;
  std::vector<std::string> build_order() const;
  JoinPipeline to_pipeline() const;
  /// Drops every temp table created for this plan.
  void release_temps();
};

/// COUNT(*) over the selection of one relation, reading only `needed`
/// columns plus the predicate's columns. Throws NoPredicate for TRUE.
RaNode build_count_subquery(const std::vector<Relation>& relations, std::size_t relation, const Predicate& predicate,
                            const std::vector<std::size_t>& needed_columns);

struct SelectivityResult {
  std::int64_t exact_count = 0;
  double duration_ms = 0;
};

SelectivityResult compute_exact_selectivity(const std::vector<Relation>& relations, std::size_t relation,
                                            const Predicate& predicate, const std::vector<std::size_t>& needed_columns,
                                            const UdfRegistry& udfs);

/// row_count >= min_table_size and exact_count / row_count <= max_selectivity.
bool decide_pushdown(std::size_t row_count, std::int64_t exact_count, const EscConfig& config);

/// Filtered copy of `needed_columns` registered as a temp table.
TempTableHandle materialize_pushdown(Database& db, const std::vector<Relation>& relations, std::size_t relation,
                                     const Predicate& predicate, const std::vector<std::size_t>& needed_columns,
                                     const UdfRegistry& udfs);

/// Largest base table; ties go to the lexicographically smaller alias.
std::size_t choose_probe(const JoinGraph& graph);

/// Greedy smallest-adjacent-first order of every relation except the probe.
std::vector<std::size_t> order_builds(const JoinGraph& graph, std::size_t probe,
                                      const std::vector<double>& effective_cardinalities);

/// Columns of relation `r` the rest of the query reads: join keys and output columns.
std::vector<std::size_t> needed_columns(const JoinGraph& graph, std::size_t r);

PhysicalPlan plan_query(const BoundQuery& query, const EscConfig& config, Catalog& catalog);

struct ExplainOptions {
  bool redact_timings = false;
};

std::string explain_text(const PhysicalPlan& plan, const ExplainOptions& options = {});
std::string explain_json(const PhysicalPlan& plan, const ExplainOptions& options = {});

}  // namespace escdb
