#include "escdb/optimizer/esc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "escdb/error.hpp"
#include "escdb/exec/ra_interpreter.hpp"

namespace escdb {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::vector<ColumnId> column_ids(std::size_t relation, const std::set<std::size_t>& columns) {
  std::vector<ColumnId> out;
  for (auto c : columns) out.push_back({relation, c});
  return out;
}

PlanInput base_input(const JoinGraph& graph, std::size_t r) {
  PlanInput in;
  in.relation = r;
  in.alias = graph.relations[r].alias;
  in.base_table = graph.relations[r].table;
  in.source = graph.relations[r].source;
  for (std::size_t c = 0; c < in.source->column_count(); ++c) in.column_map.emplace_back(c);
  in.filter = graph.residuals[r];
  in.effective_cardinality = static_cast<double>(in.source->row_count());
  return in;
}

PlanInput temp_input(const JoinGraph& graph, std::size_t r, const Database& db, const TempTableHandle& handle,
                     const std::vector<std::size_t>& needed) {
  PlanInput in;
  in.relation = r;
  in.alias = graph.relations[r].alias;
  in.base_table = graph.relations[r].table;
  in.source = db.temp(handle);
  in.temp = handle;
  in.column_map.assign(graph.relations[r].source->column_count(), std::nullopt);
  for (std::size_t i = 0; i < needed.size(); ++i) in.column_map[needed[i]] = i;
  in.effective_cardinality = static_cast<double>(handle.row_count);
  return in;
}

// Estimated selectivity of a residual: histogram-based per conjunct, with
// the fixed guess for conjuncts the histograms cannot answer.
double estimate_residual(const Predicate& residual, const Relation& relation, const EscConfig& config,
                         Catalog& catalog) {
  double selectivity = 1;
  for (const auto& conjunct : conjuncts(residual)) {
    HistogramSet histograms;
    for (const auto& id : referenced_columns(conjunct)) {
      if (!relation.source->column(id.column).type().is_numeric()) continue;
      histograms.emplace(id.column, catalog.histogram(relation.table, id.column, config.histogram_buckets));
    }
    try {
      selectivity *= estimate_selectivity(histograms, conjunct);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Inestimable) throw;
      selectivity *= config.default_guess;
    }
  }
  return selectivity;
}

}  // namespace

std::string_view estimator_mode_name(EstimatorMode mode) {
  return mode == EstimatorMode::Histogram ? "histogram" : "none";
}

EstimatorMode parse_estimator_mode(std::string_view text) {
  if (text == "none") return EstimatorMode::None;
  if (text == "histogram") return EstimatorMode::Histogram;
  throw Error(ErrorCode::InvalidConfig, fmt::format("estimator must be 'none' or 'histogram', not '{}'", text));
}

void EscConfig::validate() const {
  if (!(max_selectivity >= 0 && max_selectivity <= 1)) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("max selectivity {} is outside [0, 1]", max_selectivity));
  }
  if (histogram_buckets < 1) throw Error(ErrorCode::InvalidConfig, "histogram needs at least one bucket");
  if (!(default_guess >= 0 && default_guess <= 1)) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("default selectivity guess {} is outside [0, 1]", default_guess));
  }
}

RaNode build_count_subquery(const std::vector<Relation>& relations, std::size_t relation, const Predicate& predicate,
                            const std::vector<std::size_t>& needed_columns) {
  if (predicate.is_true()) {
    throw Error(ErrorCode::NoPredicate, fmt::format("'{}' has no predicate to count", relations.at(relation).alias));
  }
  std::set<std::size_t> columns(needed_columns.begin(), needed_columns.end());
  for (const auto& id : referenced_columns(predicate)) {
    if (id.relation != relation) {
      throw Error(ErrorCode::UnsupportedPredicate,
                  fmt::format("sub-query predicate for '{}' reads another relation", relations.at(relation).alias));
    }
    columns.insert(id.column);
  }
  auto scan = RaNode::scan(relations, relation);
  auto project = RaNode::project(std::move(scan), column_ids(relation, columns));
  return RaNode::count_star(RaNode::select(std::move(project), predicate));
}

SelectivityResult compute_exact_selectivity(const std::vector<Relation>& relations, std::size_t relation,
                                            const Predicate& predicate, const std::vector<std::size_t>& needed_columns,
                                            const UdfRegistry& udfs) {
  const auto tree = build_count_subquery(relations, relation, predicate, needed_columns);
  const auto start = Clock::now();
  SelectivityResult result;
  try {
    result.exact_count = count_ra(tree, relations, udfs);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("in counting sub-query on '{}': {}", relations.at(relation).alias, e.what()));
  }
  result.duration_ms = elapsed_ms(start);
  return result;
}

bool decide_pushdown(std::size_t row_count, std::int64_t exact_count, const EscConfig& config) {
  if (row_count == 0 || row_count < config.min_table_size) return false;
  // IEEE division is correctly rounded, so a ratio that equals the threshold
  // exactly lands on the same double as the threshold literal.
  return static_cast<double>(exact_count) / static_cast<double>(row_count) <= config.max_selectivity;
}

TempTableHandle materialize_pushdown(Database& db, const std::vector<Relation>& relations, std::size_t relation,
                                     const Predicate& predicate, const std::vector<std::size_t>& needed_columns,
                                     const UdfRegistry& udfs) {
  std::vector<ColumnId> ids;
  for (auto c : needed_columns) ids.push_back({relation, c});
  auto tree = RaNode::project(RaNode::select(RaNode::scan(relations, relation), predicate), std::move(ids));
  auto columns = materialize_ra(tree, relations, udfs);
  Schema schema;
  for (const auto& c : columns) schema.push_back({c.name(), c.type()});
  return db.materialize_temp(schema, std::move(columns));
}

std::size_t choose_probe(const JoinGraph& graph) {
  if (graph.relations.empty()) throw Error(ErrorCode::ExecutionError, "query has no relations");
  std::size_t best = 0;
  for (std::size_t r = 1; r < graph.relations.size(); ++r) {
    const auto rows = graph.relations[r].source->row_count();
    const auto best_rows = graph.relations[best].source->row_count();
    if (rows > best_rows || (rows == best_rows && graph.relations[r].alias < graph.relations[best].alias)) best = r;
  }
  return best;
}

std::vector<std::size_t> order_builds(const JoinGraph& graph, std::size_t probe,
                                      const std::vector<double>& effective_cardinalities) {
  const auto n = graph.relations.size();
  std::vector<bool> joined(n, false);
  joined[probe] = true;
  std::vector<std::size_t> order;
  while (order.size() + 1 < n) {
    std::optional<std::size_t> best;
    for (std::size_t r = 0; r < n; ++r) {
      if (joined[r]) continue;
      const bool adjacent = std::any_of(graph.edges.begin(), graph.edges.end(), [&](const JoinEdge& e) {
        return (e.left.relation == r && joined[e.right.relation]) || (e.right.relation == r && joined[e.left.relation]);
      });
      if (!adjacent) continue;
      if (!best || effective_cardinalities[r] < effective_cardinalities[*best] ||
          (effective_cardinalities[r] == effective_cardinalities[*best] &&
           graph.relations[r].alias < graph.relations[*best].alias)) {
        best = r;
      }
    }
    if (!best) {
      std::vector<std::string> missing;
      for (std::size_t r = 0; r < n; ++r) {
        if (!joined[r]) missing.push_back(graph.relations[r].alias);
      }
      throw Error(ErrorCode::CartesianProductRequired,
                  fmt::format("no join predicate connects {} to the rest of the query", fmt::join(missing, ", ")));
    }
    joined[*best] = true;
    order.push_back(*best);
  }
  return order;
}

std::vector<std::size_t> needed_columns(const JoinGraph& graph, std::size_t r) {
  std::set<std::size_t> columns;
  for (const auto& e : graph.edges) {
    if (e.left.relation == r) columns.insert(e.left.column);
    if (e.right.relation == r) columns.insert(e.right.column);
  }
  for (const auto& out : graph.output) {
    if (out.id.relation == r) columns.insert(out.id.column);
  }
  return {columns.begin(), columns.end()};
}

PhysicalPlan plan_query(const BoundQuery& query, const EscConfig& config, Catalog& catalog) {
  config.validate();
  const auto graph = build_join_graph(query);
  PhysicalPlan plan;
  plan.relations = query.relations;
  plan.count_star = graph.count_star;
  plan.output = graph.output;
  plan.config = config;

  const auto n = graph.relations.size();
  if (n == 1) {
    plan.probe = base_input(graph, 0);
    return plan;
  }

  const auto probe = choose_probe(graph);
  std::vector<PlanInput> inputs;
  for (std::size_t r = 0; r < n; ++r) inputs.push_back(base_input(graph, r));

  if (config.enabled) {
    std::vector<std::size_t> candidates;
    for (std::size_t r = 0; r < n; ++r) {
      if (r != probe) candidates.push_back(r);
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](std::size_t a, std::size_t b) { return graph.relations[a].alias < graph.relations[b].alias; });
    const auto renderer = renderer_for(graph.relations);
    for (const auto r : candidates) {
      const auto& residual = graph.residuals[r];
      const auto rows = graph.relations[r].source->row_count();
      if (residual.is_true() || rows < config.min_table_size) continue;
      const auto needed = needed_columns(graph, r);
      const auto counted = compute_exact_selectivity(graph.relations, r, residual, needed, catalog.udfs());

      EscDecision d;
      d.table = graph.relations[r].alias;
      d.base_table = graph.relations[r].table;
      d.predicate = residual;
      d.predicate_sql = render(residual, renderer);
      d.row_count = rows;
      d.exact_count = counted.exact_count;
      d.selectivity = rows == 0 ? 0.0 : static_cast<double>(counted.exact_count) / static_cast<double>(rows);
      d.subquery_ms = counted.duration_ms;
      d.pushed_down = config.materialize && decide_pushdown(rows, counted.exact_count, config);
      if (d.pushed_down) {
        const auto start = Clock::now();
        auto handle = materialize_pushdown(catalog.database(), graph.relations, r, residual, needed, catalog.udfs());
        d.materialize_ms = elapsed_ms(start);
        d.temp = handle;
        plan.leases.emplace_back(catalog.database(), handle);
        inputs[r] = temp_input(graph, r, catalog.database(), handle, needed);
      }
      plan.decisions.push_back(std::move(d));
    }
  } else if (config.estimator == EstimatorMode::Histogram) {
    for (std::size_t r = 0; r < n; ++r) {
      if (r == probe) continue;
      inputs[r].effective_cardinality =
          estimate_residual(graph.residuals[r], graph.relations[r], config, catalog) *
          static_cast<double>(graph.relations[r].source->row_count());
    }
  }

  std::vector<double> cardinalities;
  for (const auto& in : inputs) cardinalities.push_back(in.effective_cardinality);
  const auto order = order_builds(graph, probe, cardinalities);

  plan.probe = std::move(inputs[probe]);
  std::vector<bool> joined(n, false);
  joined[probe] = true;
  for (const auto r : order) {
    PlanBuild build;
    build.input = std::move(inputs[r]);
    for (const auto& e : graph.edges) {
      if (e.left.relation == r && joined[e.right.relation]) build.keys.push_back({e.right, e.left});
      if (e.right.relation == r && joined[e.left.relation]) build.keys.push_back({e.left, e.right});
    }
    joined[r] = true;
    plan.builds.push_back(std::move(build));
  }
  return plan;
}

std::size_t PhysicalPlan::build_cardinality_sum() const {
  std::size_t sum = 0;
  for (const auto& b : builds) sum += b.input.rows();
  return sum;
}

std::vector<std::string> PhysicalPlan::build_order() const {
  std::vector<std::string> out;
  for (const auto& b : builds) out.push_back(b.input.alias);
  return out;
}

void PhysicalPlan::release_temps() { leases.clear(); }

JoinPipeline PhysicalPlan::to_pipeline() const {
  std::vector<std::size_t> slot(relations.size(), 0);
  std::vector<const PlanInput*> by_relation(relations.size(), nullptr);
  by_relation[probe.relation] = &probe;
  for (std::size_t i = 0; i < builds.size(); ++i) {
    slot[builds[i].input.relation] = i + 1;
    by_relation[builds[i].input.relation] = &builds[i].input;
  }
  const auto map_column = [&](ColumnId id) -> ColumnId {
    const auto* in = by_relation.at(id.relation);
    const auto mapped = in->column_map.at(id.column);
    if (!mapped) {
      throw Error(ErrorCode::ExecutionError,
                  fmt::format("column {} of '{}' was not kept in its temp table", id.column, in->alias));
    }
    return {slot[id.relation], *mapped};
  };
  const auto scan = [&](const PlanInput& in) {
    return ScanInput{in.alias, in.source, remap_columns(in.filter, map_column)};
  };

  JoinPipeline p;
  p.probe = scan(probe);
  for (const auto& b : builds) {
    BuildStep step{scan(b.input), {}};
    for (const auto& k : b.keys) step.keys.push_back({map_column(k.left), map_column(k.right).column});
    p.builds.push_back(std::move(step));
  }
  p.count_star = count_star;
  for (const auto& out : output) {
    p.output.push_back(map_column(out.id));
    p.output_names.push_back(out.name);
  }
  return p;
}

}  // namespace escdb
