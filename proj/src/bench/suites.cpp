#include "escdb/bench/suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "escdb/engine.hpp"
#include "escdb/error.hpp"

namespace escdb::bench {

namespace {

using nlohmann::json;

double median(std::vector<double> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const auto mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2;
}

double overhead_of(const QueryRun& run) {
  double total = 0;
  for (const auto& d : run.decisions) total += d.subquery_ms + d.materialize_ms;
  return total;
}

json decisions_json(const std::vector<EscDecision>& decisions) {
  auto out = json::array();
  for (const auto& d : decisions) {
    out.push_back({{"table", d.table},
                   {"predicate", d.predicate_sql},
                   {"row_count", d.row_count},
                   {"count", d.exact_count},
                   {"selectivity", d.selectivity},
                   {"pushdown", d.pushed_down},
                   {"subquery_ms", d.subquery_ms},
                   {"materialize_ms", d.materialize_ms}});
  }
  return out;
}

struct Arm {
  std::string name;
  EscConfig config;
};

/// One warm-up run per arm, then `reps` rounds with the arms interleaved so
/// drift in machine load hits every arm alike.
std::vector<BenchRow> time_query(Catalog& catalog, const NamedQuery& query, const std::vector<Arm>& arms,
                                 const BenchOptions& options, double scale) {
  const auto bound = analyze_sql(query.sql, catalog);
  std::vector<BenchRow> rows(arms.size());
  std::vector<std::vector<double>> times(arms.size()), overheads(arms.size());
  const auto run_arm = [&](std::size_t a) {
    return run_query(catalog, bound, {.esc = arms[a].config, .workers = options.workers});
  };
  for (std::size_t a = 0; a < arms.size(); ++a) {
    const auto run = run_arm(a);
    auto& row = rows[a];
    row.query = query.name;
    row.arm = arms[a].name;
    row.sql = query.sql;
    row.scale = scale;
    row.build_card_sum = run.build_card_sum;
    row.result_count = run.result.count;
    row.build_order = run.build_order;
    row.decisions = decisions_json(run.decisions);
  }
  for (std::size_t rep = 0; rep < std::max<std::size_t>(options.reps, 1); ++rep) {
    for (std::size_t a = 0; a < arms.size(); ++a) {
      const auto run = run_arm(a);
      times[a].push_back(run.total_ms);
      overheads[a].push_back(overhead_of(run));
    }
  }
  for (std::size_t a = 0; a < arms.size(); ++a) {
    rows[a].time_ms = median(times[a]);
    rows[a].overhead_ms = median(overheads[a]);
  }
  return rows;
}

std::vector<Arm> plan_quality_arms(const BenchOptions& options, bool with_histogram) {
  auto esc = options.esc;
  esc.enabled = true;
  auto baseline = options.esc;
  baseline.enabled = false;
  baseline.estimator = EstimatorMode::None;
  std::vector<Arm> arms{{"baseline", baseline}, {"esc", esc}};
  if (with_histogram) {
    auto histogram = baseline;
    histogram.estimator = EstimatorMode::Histogram;
    arms.push_back({"histogram", histogram});
  }
  return arms;
}

/// Overhead suites keep the baseline plan: sub-queries run on every table
/// but nothing is materialized.
std::vector<Arm> overhead_arms(const BenchOptions& options) {
  auto esc = options.esc;
  esc.enabled = true;
  esc.materialize = false;
  esc.min_table_size = 0;
  auto baseline = esc;
  baseline.enabled = false;
  baseline.estimator = EstimatorMode::None;
  return {{"baseline", baseline}, {"esc", esc}};
}

GenSpec spec_of(Benchmark benchmark, double scale, const BenchOptions& options) {
  return {.benchmark = benchmark,
          .scale = scale,
          .seed = options.seed,
          .fk_zipf = options.fk_zipf,
          .correlated = options.correlated};
}

void append(BenchReport& report, std::vector<BenchRow> rows) {
  for (auto& r : rows) report.rows.push_back(std::move(r));
}

BenchReport plan_quality(std::string_view suite, Benchmark benchmark, const std::vector<NamedQuery>& queries,
                         const BenchOptions& options, bool with_histogram) {
  BenchReport report{std::string(suite), benchmark, options.scale, options.seed, {}};
  Catalog catalog;
  load_benchmark(catalog, spec_of(benchmark, options.scale, options));
  const auto arms = plan_quality_arms(options, with_histogram);
  for (const auto& q : queries) append(report, time_query(catalog, q, arms, options, options.scale));
  return report;
}

BenchReport overhead_scale(const BenchOptions& options) {
  const auto scales = options.scales.empty() ? std::vector<double>{0.001, 0.01, 0.05} : options.scales;
  BenchReport report{"overhead-scale", Benchmark::TpchSubset, scales.back(), options.seed, {}};
  const auto arms = overhead_arms(options);
  const std::vector<std::pair<std::string, std::string>> joins{
      {"orders", "l_orderkey = o_orderkey AND o_orderkey = {}"},
      {"part", "l_partkey = p_partkey AND p_partkey = {}"},
      {"supplier", "l_suppkey = s_suppkey AND s_suppkey = {}"}};
  for (const double scale : scales) {
    Catalog catalog;
    load_benchmark(catalog, spec_of(Benchmark::TpchSubset, scale, options));
    for (const auto& [table, condition] : joins) {
      // Keys are dense from 1, so the middle key always exists.
      const auto key = catalog.database().table(table).row_count() / 2 + 1;
      const NamedQuery q{fmt::format("{}@{}", table, scale),
                         fmt::format("SELECT COUNT(*) FROM lineitem, {} WHERE {}", table,
                                     fmt::format(fmt::runtime(condition), key))};
      append(report, time_query(catalog, q, arms, options, scale));
    }
  }
  return report;
}

BenchReport overhead_selectivity(const BenchOptions& options) {
  BenchReport report{"overhead-selectivity", Benchmark::TpchSubset, options.scale, options.seed, {}};
  Catalog catalog;
  load_benchmark(catalog, spec_of(Benchmark::TpchSubset, options.scale, options));
  const auto orders = catalog.database().table("orders").row_count();
  const auto arms = overhead_arms(options);
  // Timings this short need more samples for a stable median.
  auto timed = options;
  timed.reps = std::max<std::size_t>(options.reps * 3, 15);
  const std::vector<std::pair<std::string, double>> fractions{
      {"0.001%", 1e-5}, {"0.01%", 1e-4}, {"0.1%", 1e-3}, {"1%", 1e-2}, {"10%", 0.1}, {"100%", 1.0}};
  for (const auto& [label, fraction] : fractions) {
    const auto qualifying =
        std::max<std::int64_t>(1, std::llround(fraction * static_cast<double>(orders)));
    const auto bound = std::min<std::int64_t>(qualifying, static_cast<std::int64_t>(orders)) + 1;
    const NamedQuery q{
        label, fmt::format("SELECT COUNT(*) FROM lineitem, orders WHERE l_orderkey = o_orderkey AND o_orderkey < {}",
                           bound)};
    append(report, time_query(catalog, q, arms, timed, options.scale));
  }
  return report;
}

BenchReport overhead_attributes(const BenchOptions& options) {
  BenchReport report{"overhead-attrs", Benchmark::TpchSubset, options.scale, options.seed, {}};
  Catalog catalog;
  load_benchmark(catalog, spec_of(Benchmark::TpchSubset, options.scale, options));
  const auto& orders = catalog.database().table("orders");
  const auto row = orders.row_count() / 2;
  const auto cell = [&](std::string_view column) { return orders.column(orders.column_index(column)).format(row); };
  // All constants come from one existing order, so every variant matches it.
  const std::vector<std::string> conjuncts{fmt::format("o_orderdate = DATE '{}'", cell("o_orderdate")),
                                           fmt::format("o_custkey = {}", cell("o_custkey")),
                                           fmt::format("o_orderpriority = '{}'", cell("o_orderpriority")),
                                           fmt::format("o_totalprice = {}", cell("o_totalprice"))};
  const auto arms = overhead_arms(options);
  auto timed = options;
  timed.reps = std::max<std::size_t>(options.reps * 3, 15);
  std::string where = "l_orderkey = o_orderkey";
  for (std::size_t n = 1; n <= conjuncts.size(); ++n) {
    where += " AND " + conjuncts[n - 1];
    const NamedQuery q{fmt::format("{} attr", n), "SELECT COUNT(*) FROM lineitem, orders WHERE " + where};
    append(report, time_query(catalog, q, arms, timed, options.scale));
  }
  return report;
}

std::string format_ms(double ms) { return fmt::format("{:.3f}", ms); }

std::string decision_summary(const json& decisions) {
  std::string out;
  for (const auto& d : decisions) {
    if (!out.empty()) out += "; ";
    out += fmt::format("{}:{}{}", d.at("table").get<std::string>(), d.at("count").get<std::int64_t>(),
                       d.at("pushdown").get<bool>() ? "*" : "");
  }
  return out.empty() ? "-" : out;
}

/// Overhead grid: one line per scale, one column per joined table.
std::string scale_grid(const BenchReport& report) {
  std::map<double, std::map<std::string, double>> grid;
  for (const auto& r : report.rows) {
    if (r.arm == "esc") grid[r.scale][r.query.substr(0, r.query.find('@'))] = r.overhead_ms;
  }
  std::string out = fmt::format("\n{:>10} {:>12} {:>12} {:>12}\n", "scale", "orders", "part", "supplier");
  for (const auto& [scale, cells] : grid) {
    out += fmt::format("{:>10} {:>12} {:>12} {:>12}\n", scale, format_ms(cells.at("orders")),
                       format_ms(cells.at("part")), format_ms(cells.at("supplier")));
  }
  return out;
}

/// One line of overhead cells, one column per query.
std::string overhead_line(const BenchReport& report) {
  std::string header = fmt::format("\n{:>12}", "");
  std::string line = fmt::format("{:>12}", "overhead_ms");
  for (const auto& q : report.queries()) {
    header += fmt::format(" {:>10}", q);
    line += fmt::format(" {:>10}", format_ms(report.find(q, "esc")->overhead_ms));
  }
  return header + "\n" + line + "\n";
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::UsageError, "report schema: " + what);
}

}  // namespace

std::vector<NamedQuery> tpch4_queries() {
  return {
      {"T1",
       "SELECT COUNT(*) FROM lineitem, orders, part WHERE l_orderkey = o_orderkey AND l_partkey = p_partkey "
       "AND o_orderdate >= DATE '1997-01-01' AND o_totalprice < 290000 AND p_size <= 20 AND l_quantity < 45"},
      {"T2",
       "SELECT COUNT(*) FROM lineitem, orders, supplier WHERE l_orderkey = o_orderkey AND l_suppkey = s_suppkey "
       "AND price_per_day(o_totalprice, o_orderdate) > 2000 AND o_orderstatus = 'F' AND s_acctbal > -500 "
       "AND l_discount <= 0.08"},
      {"T3",
       "SELECT COUNT(*) FROM lineitem, part, supplier WHERE l_partkey = p_partkey AND l_suppkey = s_suppkey "
       "AND p_size BETWEEN 1 AND 10 AND p_retailprice > 1150 AND s_acctbal > -500 "
       "AND l_shipdate >= DATE '1992-03-01'"},
      {"T4",
       "SELECT COUNT(*) FROM lineitem, orders, part WHERE l_orderkey = o_orderkey AND l_partkey = p_partkey "
       "AND o_orderdate < DATE '1992-06-01' AND o_orderstatus = 'O' AND p_size > 5 AND l_quantity > 2"},
  };
}

std::vector<NamedQuery> ssb_queries() {
  const std::string flight2 =
      "SELECT COUNT(*) FROM lineorder, dwdate, part, supplier WHERE lo_orderdate = d_datekey "
      "AND lo_partkey = p_partkey AND lo_suppkey = s_suppkey AND ";
  const std::string flight3 =
      "SELECT COUNT(*) FROM lineorder, customer, supplier, dwdate WHERE lo_custkey = c_custkey "
      "AND lo_suppkey = s_suppkey AND lo_orderdate = d_datekey AND ";
  const std::string flight4 =
      "SELECT COUNT(*) FROM lineorder, dwdate, customer, supplier, part WHERE lo_custkey = c_custkey "
      "AND lo_suppkey = s_suppkey AND lo_partkey = p_partkey AND lo_orderdate = d_datekey AND ";
  const std::string uk_cities =
      "(c_city = 'UNITED KI1' OR c_city = 'UNITED KI5') AND (s_city = 'UNITED KI1' OR s_city = 'UNITED KI5')";
  return {
      {"q2.1", flight2 + "p_category = 'MFGR#12' AND s_region = 'AMERICA'"},
      {"q2.2", flight2 + "p_brand1 BETWEEN 'MFGR#2221' AND 'MFGR#2228' AND s_region = 'ASIA'"},
      {"q2.3", flight2 + "p_brand1 = 'MFGR#2239' AND s_region = 'EUROPE'"},
      {"q3.1", flight3 + "c_region = 'ASIA' AND s_region = 'ASIA' AND d_year >= 1992 AND d_year <= 1997"},
      {"q3.2", flight3 + "c_nation = 'UNITED STATES' AND s_nation = 'UNITED STATES' AND d_year >= 1992 "
                         "AND d_year <= 1997"},
      {"q3.3", flight3 + uk_cities + " AND d_year >= 1992 AND d_year <= 1997"},
      {"q3.4", flight3 + uk_cities + " AND d_yearmonth = 'Dec1997'"},
      {"q4.1", flight4 + "c_region = 'AMERICA' AND s_region = 'AMERICA' AND (p_mfgr = 'MFGR#1' OR p_mfgr = 'MFGR#2')"},
      {"q4.2", flight4 + "c_region = 'AMERICA' AND s_region = 'AMERICA' AND (d_year = 1997 OR d_year = 1998) "
                         "AND (p_mfgr = 'MFGR#1' OR p_mfgr = 'MFGR#2')"},
      {"q4.3", flight4 + "c_region = 'AMERICA' AND s_nation = 'UNITED STATES' AND (d_year = 1997 OR d_year = 1998) "
                         "AND p_category = 'MFGR#14'"},
  };
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"overhead-scale", "overhead-selectivity", "overhead-attrs", "tpch4",
                                              "ssb"};
  return names;
}

BenchReport run_suite(std::string_view name, const BenchOptions& options) {
  options.esc.validate();
  if (name == "tpch4") return plan_quality(name, Benchmark::TpchSubset, tpch4_queries(), options, options.histogram_arm);
  if (name == "ssb") return plan_quality(name, Benchmark::SsbSubset, ssb_queries(), options, false);
  if (name == "overhead-scale") return overhead_scale(options);
  if (name == "overhead-selectivity") return overhead_selectivity(options);
  if (name == "overhead-attrs") return overhead_attributes(options);
  throw Error(ErrorCode::UsageError,
              fmt::format("unknown suite '{}' (valid: {})", name, fmt::join(suite_names(), ", ")));
}

const BenchRow* BenchReport::find(std::string_view query, std::string_view arm) const {
  for (const auto& r : rows) {
    if (r.query == query && r.arm == arm) return &r;
  }
  return nullptr;
}

std::vector<std::string> BenchReport::queries() const {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.query) == out.end()) out.push_back(r.query);
  }
  return out;
}

double BenchReport::speedup(std::string_view query) const {
  const auto* baseline = find(query, "baseline");
  const auto* esc = find(query, "esc");
  if (baseline == nullptr || esc == nullptr || esc->time_ms <= 0) return 0;
  return baseline->time_ms / esc->time_ms;
}

json BenchReport::to_json() const {
  json out{{"suite", suite},
           {"spec", {{"benchmark", std::string(benchmark_name(benchmark))}, {"scale", scale}, {"seed", seed}}},
           {"rows", json::array()},
           {"summary", json::array()}};
  for (const auto& r : rows) {
    out["rows"].push_back({{"query", r.query},
                           {"arm", r.arm},
                           {"sql", r.sql},
                           {"scale", r.scale},
                           {"time_ms", r.time_ms},
                           {"overhead_ms", r.overhead_ms},
                           {"build_card_sum", r.build_card_sum},
                           {"result_count", r.result_count},
                           {"build_order", r.build_order},
                           {"decisions", r.decisions}});
  }
  for (const auto& q : queries()) {
    const auto* baseline = find(q, "baseline");
    const auto* esc = find(q, "esc");
    if (baseline == nullptr || esc == nullptr) continue;
    out["summary"].push_back({{"query", q},
                              {"baseline_ms", baseline->time_ms},
                              {"esc_ms", esc->time_ms},
                              {"overhead_ms", esc->overhead_ms},
                              {"speedup", speedup(q)},
                              {"baseline_build_card_sum", baseline->build_card_sum},
                              {"esc_build_card_sum", esc->build_card_sum}});
  }
  return out;
}

std::string BenchReport::to_text() const {
  std::string out = fmt::format("suite {} ({} scale {} seed {})\n", suite, benchmark_name(benchmark), scale, seed);
  out += fmt::format("{:<16} {:<10} {:>10} {:>11} {:>10} {:>10} {:>8}  {}\n", "query", "arm", "time_ms",
                     "overhead_ms", "build_card", "count", "speedup", "esc decisions (* = pushed down)");
  for (const auto& r : rows) {
    const auto ratio = r.arm == "esc" ? fmt::format("{:.2f}x", speedup(r.query)) : std::string("");
    out += fmt::format("{:<16} {:<10} {:>10} {:>11} {:>10} {:>10} {:>8}  {}\n", r.query, r.arm, format_ms(r.time_ms),
                       format_ms(r.overhead_ms), r.build_card_sum, r.result_count, ratio,
                       r.arm == "esc" ? decision_summary(r.decisions) : "");
  }
  if (suite == "overhead-scale") out += scale_grid(*this);
  if (suite == "overhead-selectivity" || suite == "overhead-attrs") out += overhead_line(*this);
  return out;
}

void validate_report_json(const json& report) {
  require(report.is_object(), "top level must be an object");
  require(report.contains("suite") && report["suite"].is_string(), "suite must be a string");
  require(report.contains("spec") && report["spec"].is_object(), "spec must be an object");
  const auto& spec = report["spec"];
  require(spec.contains("benchmark") && spec["benchmark"].is_string(), "spec.benchmark must be a string");
  require(spec.contains("scale") && spec["scale"].is_number(), "spec.scale must be a number");
  require(spec.contains("seed") && spec["seed"].is_number_integer(), "spec.seed must be an integer");
  require(report.contains("rows") && report["rows"].is_array(), "rows must be an array");
  for (const auto& row : report["rows"]) {
    require(row.is_object(), "row must be an object");
    require(row.contains("query") && row["query"].is_string(), "row.query must be a string");
    require(row.contains("arm") && row["arm"].is_string(), "row.arm must be a string");
    for (const char* key : {"time_ms", "overhead_ms"}) {
      require(row.contains(key) && row[key].is_number(), fmt::format("row.{} must be a number", key));
    }
    for (const char* key : {"build_card_sum", "result_count"}) {
      require(row.contains(key) && row[key].is_number_integer(), fmt::format("row.{} must be an integer", key));
    }
    require(row.contains("decisions") && row["decisions"].is_array(), "row.decisions must be an array");
  }
}

}  // namespace escdb::bench
