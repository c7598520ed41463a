#include <fmt/format.h>
#include <json.hpp>

#include "escdb/optimizer/esc.hpp"

namespace escdb {

namespace {

std::string timing(double ms, const ExplainOptions& options) {
  return options.redact_timings ? "-" : fmt::format("{:.3f}", ms);
}

std::string scan_line(const PlanInput& in, const PredicateRenderer& renderer) {
  if (in.temp) return fmt::format("ScanTemp {} rows={}", in.alias, in.rows());
  auto line = fmt::format("Scan {} rows={}", in.alias, in.rows());
  if (!in.filter.is_true()) line += " filter=" + render(in.filter, renderer);
  return line;
}

std::string keys_text(const std::vector<JoinEdge>& keys, const PredicateRenderer& renderer) {
  std::vector<std::string> parts;
  for (const auto& k : keys) parts.push_back(renderer.column_name(k.left) + " = " + renderer.column_name(k.right));
  return fmt::format("{}", fmt::join(parts, " AND "));
}

void render_join(const PhysicalPlan& plan, std::size_t joins, int depth, const PredicateRenderer& renderer,
                 std::string& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  if (joins == 0) {
    out += indent + scan_line(plan.probe, renderer) + "\n";
    return;
  }
  const auto& build = plan.builds[joins - 1];
  out += indent + "HashJoin " + keys_text(build.keys, renderer) + "\n";
  render_join(plan, joins - 1, depth + 1, renderer, out);
  out += indent + "  " + scan_line(build.input, renderer) + "\n";
}

}  // namespace

std::string explain_text(const PhysicalPlan& plan, const ExplainOptions& options) {
  std::string out;
  for (const auto& d : plan.decisions) {
    out += fmt::format("ESC table={} count={} sel={:.6f} pushdown={} time_ms={}\n", d.table, d.exact_count,
                       d.selectivity, d.pushed_down, timing(d.subquery_ms, options));
  }
  const auto renderer = renderer_for(plan.relations);
  if (plan.count_star) {
    out += "Aggregate COUNT(*)\n";
  } else {
    std::vector<std::string> names;
    for (const auto& o : plan.output) names.push_back(o.name);
    out += fmt::format("Project {}\n", fmt::join(names, ", "));
  }
  render_join(plan, plan.builds.size(), 1, renderer, out);
  return out;
}

std::string explain_json(const PhysicalPlan& plan, const ExplainOptions& options) {
  using nlohmann::json;
  const auto renderer = renderer_for(plan.relations);
  const auto ms = [&](double v) -> json { return options.redact_timings ? json(nullptr) : json(v); };
  const auto scan = [&](const PlanInput& in) {
    return json{{"table", in.alias},
                {"base_table", in.base_table},
                {"temp", in.temp.has_value()},
                {"rows", in.rows()},
                {"filter", in.filter.is_true() ? json(nullptr) : json(render(in.filter, renderer))}};
  };

  json decisions = json::array();
  for (const auto& d : plan.decisions) {
    decisions.push_back({{"table", d.table},
                         {"predicate", d.predicate_sql},
                         {"row_count", d.row_count},
                         {"count", d.exact_count},
                         {"selectivity", d.selectivity},
                         {"pushdown", d.pushed_down},
                         {"time_ms", ms(d.subquery_ms)},
                         {"materialize_ms", ms(d.materialize_ms)}});
  }
  json builds = json::array();
  for (const auto& b : plan.builds) {
    auto entry = scan(b.input);
    entry["keys"] = keys_text(b.keys, renderer);
    builds.push_back(std::move(entry));
  }
  json output = json::array();
  for (const auto& o : plan.output) output.push_back(o.name);
  return json{{"decisions", std::move(decisions)},
              {"probe", scan(plan.probe)},
              {"builds", std::move(builds)},
              {"count_star", plan.count_star},
              {"output", std::move(output)},
              {"build_card_sum", plan.build_cardinality_sum()}}
      .dump(2);
}

}  // namespace escdb
