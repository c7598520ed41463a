#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "escdb/engine.hpp"
#include "escdb/error.hpp"
#include "oracle/fixtures.hpp"

namespace escdb {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ExecutionError;
}

void add_sized_table(Catalog& catalog, const std::string& name, std::size_t rows, std::size_t key_range) {
  auto& t = catalog.database().create_table(name, Schema{{"id", ColumnType::int64()},
                                                         {"fk", ColumnType::int64()},
                                                         {"v", ColumnType::int64()}});
  std::vector<Row> batch;
  for (std::size_t i = 0; i < rows; ++i) {
    batch.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(i % key_range), static_cast<std::int64_t>(i % 100)});
  }
  t.append_rows(batch);
}

class OptimizerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    // A fact table and three dimensions, sized like a tiny star schema.
    add_sized_table(catalog, "fact", 6000, 500);
    add_sized_table(catalog, "big", 1500, 1500);
    add_sized_table(catalog, "mid", 1000, 1000);
    add_sized_table(catalog, "small", 200, 200);
  }
  static constexpr const char* kStar =
      "SELECT COUNT(*) FROM fact, big, mid, small WHERE fact.fk = big.id AND fact.fk = mid.id AND fact.fk = small.id";
  Catalog catalog;
};

TEST_F(OptimizerTest, CountSubqueryShape) {
  const auto q = analyze_sql("SELECT COUNT(*) FROM big WHERE big.v = 3", catalog);
  const auto pred = Predicate::compare({0, 2}, CompareOp::Eq, 3);
  const auto tree = build_count_subquery(q.relations, 0, pred, {0});
  ASSERT_EQ(tree.kind, RaNode::Kind::Aggregate);
  const auto& select = tree.child();
  ASSERT_EQ(select.kind, RaNode::Kind::Select);
  const auto& project = select.child();
  ASSERT_EQ(project.kind, RaNode::Kind::Project);
  EXPECT_EQ(project.columns, (std::vector<ColumnId>{{0, 0}, {0, 2}}));
  EXPECT_EQ(project.child().kind, RaNode::Kind::Scan);
  EXPECT_EQ(build_count_subquery(q.relations, 0, pred, {}).child().child().columns, (std::vector<ColumnId>{{0, 2}}));
  EXPECT_EQ(code_of([&] { build_count_subquery(q.relations, 0, Predicate::always_true(), {0}); }), ErrorCode::NoPredicate);
}

TEST_F(OptimizerTest, ExactSelectivity) {
  const auto q = analyze_sql("SELECT COUNT(*) FROM big", catalog);
  const auto all = compute_exact_selectivity(q.relations, 0, Predicate::compare({0, 0}, CompareOp::Lt, 1500), {},
                                             catalog.udfs());
  EXPECT_EQ(all.exact_count, 1500);
  EXPECT_GE(all.duration_ms, 0);
  const auto one = compute_exact_selectivity(q.relations, 0, Predicate::compare({0, 0}, CompareOp::Eq, 42), {},
                                             catalog.udfs());
  EXPECT_EQ(one.exact_count, 1);
  catalog.database().create_table("empty", Schema{{"id", ColumnType::int64()}});
  const auto e = analyze_sql("SELECT COUNT(*) FROM empty", catalog);
  EXPECT_EQ(compute_exact_selectivity(e.relations, 0, Predicate::compare({0, 0}, CompareOp::Gt, 0), {}, catalog.udfs())
                .exact_count,
            0);
}

TEST(DecidePushdown, ThresholdsAreInclusive) {
  const EscConfig c{.min_table_size = 1000, .max_selectivity = 0.05};
  EXPECT_TRUE(decide_pushdown(10000, 100, c));
  EXPECT_FALSE(decide_pushdown(500, 1, c));
  EXPECT_TRUE(decide_pushdown(10000, 500, c));
  EXPECT_FALSE(decide_pushdown(10000, 501, c));
  EXPECT_TRUE(decide_pushdown(1000, 10, c));
  EXPECT_TRUE(decide_pushdown(500, 100, {.min_table_size = 0, .max_selectivity = 0.2}));
  EXPECT_FALSE(decide_pushdown(0, 0, {.min_table_size = 0}));
}

TEST(EscConfig, Validates) {
  EXPECT_EQ(code_of([] { EscConfig{.max_selectivity = 1.5}.validate(); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { EscConfig{.max_selectivity = -0.1}.validate(); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { EscConfig{.histogram_buckets = 0}.validate(); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(parse_estimator_mode("histogram"), EstimatorMode::Histogram);
  EXPECT_EQ(code_of([] { parse_estimator_mode("magic"); }), ErrorCode::InvalidConfig);
}

TEST_F(OptimizerTest, ProbeIsLargestWithLexicographicTies) {
  const auto g = build_join_graph(analyze_sql(kStar, catalog));
  EXPECT_EQ(g.relations[choose_probe(g)].alias, "fact");
  add_sized_table(catalog, "twin_b", 50, 50);
  add_sized_table(catalog, "twin_a", 50, 50);
  const auto t = build_join_graph(analyze_sql("SELECT COUNT(*) FROM twin_b, twin_a WHERE twin_b.id = twin_a.id", catalog));
  EXPECT_EQ(t.relations[choose_probe(t)].alias, "twin_a");
}

TEST_F(OptimizerTest, GreedyBuildOrder) {
  const auto g = build_join_graph(analyze_sql(kStar, catalog));
  const auto probe = g.index_of("fact");
  std::vector<double> card{6000, 1500, 1000, 200};
  const auto names = [&](const std::vector<std::size_t>& order) {
    std::vector<std::string> out;
    for (auto r : order) out.push_back(g.relations[r].alias);
    return out;
  };
  EXPECT_EQ(names(order_builds(g, probe, card)), (std::vector<std::string>{"small", "mid", "big"}));
  card[1] = 150;  // big pushed down to 150 rows
  EXPECT_EQ(names(order_builds(g, probe, card)), (std::vector<std::string>{"big", "small", "mid"}));
  card = {6000, 7, 7, 7};
  EXPECT_EQ(names(order_builds(g, probe, card)), (std::vector<std::string>{"big", "mid", "small"}));
}

TEST_F(OptimizerTest, BuildsFollowAdjacency) {
  // chain fact - big - small: small is only reachable through big.
  const auto g = build_join_graph(
      analyze_sql("SELECT COUNT(*) FROM fact, big, small WHERE fact.fk = big.id AND big.v = small.id", catalog));
  const auto order = order_builds(g, g.index_of("fact"), {6000, 1500, 1});
  EXPECT_EQ(g.relations[order[0]].alias, "big");
  EXPECT_EQ(g.relations[order[1]].alias, "small");
  const auto disconnected = build_join_graph(analyze_sql("SELECT COUNT(*) FROM fact, big WHERE fact.v = 1", catalog));
  EXPECT_EQ(code_of([&] { order_builds(disconnected, 0, {6000, 1500}); }), ErrorCode::CartesianProductRequired);
  EXPECT_EQ(code_of([&] { run_query(catalog, "SELECT COUNT(*) FROM fact, big"); }), ErrorCode::CartesianProductRequired);
}

TEST_F(OptimizerTest, PushdownReplacesTheScanAndReorders) {
  const auto sql = std::string(kStar) + " AND big.v = 3 AND mid.v < 50 AND small.v < 10 AND fact.v = 1";
  const auto q = analyze_sql(sql, catalog);
  auto plan = plan_query(q, EscConfig{}, catalog);
  // small is below the size threshold, so it gets no sub-query at all.
  ASSERT_EQ(plan.decisions.size(), 2u);
  EXPECT_EQ(plan.decisions[0].table, "big");
  EXPECT_EQ(plan.decisions[0].exact_count, 15);
  EXPECT_TRUE(plan.decisions[0].pushed_down);
  ASSERT_TRUE(plan.decisions[0].temp.has_value());
  EXPECT_EQ(plan.decisions[0].temp->row_count, 15u);
  EXPECT_EQ(plan.decisions[1].table, "mid");
  EXPECT_DOUBLE_EQ(plan.decisions[1].selectivity, 0.5);
  EXPECT_FALSE(plan.decisions[1].pushed_down);
  EXPECT_FALSE(plan.decisions[1].temp.has_value());
  EXPECT_EQ(catalog.database().live_temp_count(), 1u);

  EXPECT_EQ(plan.probe.alias, "fact");
  EXPECT_FALSE(plan.probe.temp.has_value());
  EXPECT_FALSE(plan.probe.filter.is_true());
  EXPECT_EQ(plan.build_order(), (std::vector<std::string>{"big", "small", "mid"}));
  EXPECT_EQ(plan.build_cardinality_sum(), 15u + 200u + 1000u);
  EXPECT_TRUE(plan.builds[0].input.temp.has_value());
  EXPECT_TRUE(plan.builds[0].input.filter.is_true());

  const auto baseline = plan_query(q, EscConfig{.enabled = false}, catalog);
  EXPECT_TRUE(baseline.decisions.empty());
  EXPECT_EQ(baseline.build_order(), (std::vector<std::string>{"small", "mid", "big"}));
  EXPECT_LE(plan.build_cardinality_sum(), baseline.build_cardinality_sum());

  const auto esc_count = execute(plan.to_pipeline(), catalog.udfs()).count;
  EXPECT_EQ(esc_count, execute(baseline.to_pipeline(), catalog.udfs()).count);
  plan.release_temps();
  EXPECT_EQ(catalog.database().live_temp_count(), 0u);
}

TEST_F(OptimizerTest, EveryEdgeAppearsOnceAndKeysPointBackwards) {
  const auto sql = std::string(kStar) + " AND big.fk = mid.fk AND big.v < 5";
  auto plan = plan_query(analyze_sql(sql, catalog), EscConfig{}, catalog);
  std::set<std::size_t> joined{plan.probe.relation};
  std::size_t keys = 0;
  for (const auto& b : plan.builds) {
    ASSERT_FALSE(b.keys.empty());
    for (const auto& k : b.keys) {
      EXPECT_TRUE(joined.contains(k.left.relation));
      EXPECT_EQ(k.right.relation, b.input.relation);
    }
    keys += b.keys.size();
    joined.insert(b.input.relation);
  }
  EXPECT_EQ(keys, 4u);
}

TEST_F(OptimizerTest, ProbePredicatesNeverSpawnSubqueries) {
  const auto plan = plan_query(analyze_sql(std::string(kStar) + " AND fact.v = 1", catalog), EscConfig{}, catalog);
  EXPECT_TRUE(plan.decisions.empty());
  const auto single = plan_query(analyze_sql("SELECT COUNT(*) FROM big WHERE big.v = 1", catalog), EscConfig{}, catalog);
  EXPECT_TRUE(single.decisions.empty());
  EXPECT_TRUE(single.builds.empty());
}

TEST_F(OptimizerTest, UnselectivePredicatesLeaveTheBaselineShape) {
  const auto sql = std::string(kStar) + " AND big.v < 90 AND mid.v >= 10";
  const auto q = analyze_sql(sql, catalog);
  const auto plan = plan_query(q, EscConfig{}, catalog);
  const auto baseline = plan_query(q, EscConfig{.enabled = false}, catalog);
  ASSERT_EQ(plan.decisions.size(), 2u);
  for (const auto& d : plan.decisions) EXPECT_FALSE(d.pushed_down);
  EXPECT_EQ(plan.build_order(), baseline.build_order());
  EXPECT_EQ(catalog.database().live_temp_count(), 0u);
}

TEST_F(OptimizerTest, PolicyIsMonotoneInTheThreshold) {
  const auto sql = std::string(kStar) + " AND big.v < 3 AND mid.v < 30 AND small.v < 60";
  const auto q = analyze_sql(sql, catalog);
  std::set<std::string> previous{"big", "mid", "small"};
  for (double max : {1.0, 0.5, 0.25, 0.05, 0.0}) {
    auto plan = plan_query(q, EscConfig{.min_table_size = 0, .max_selectivity = max}, catalog);
    std::set<std::string> pushed;
    for (const auto& d : plan.decisions) {
      if (d.pushed_down) pushed.insert(d.table);
    }
    EXPECT_TRUE(std::includes(previous.begin(), previous.end(), pushed.begin(), pushed.end()));
    previous = pushed;
  }
  EXPECT_TRUE(previous.empty());
}

TEST_F(OptimizerTest, HistogramArmUsesEstimates) {
  const auto sql = std::string(kStar) + " AND big.v < 2 AND fact.v = 1";
  const auto q = analyze_sql(sql, catalog);
  const auto plan = plan_query(q, EscConfig{.enabled = false, .estimator = EstimatorMode::Histogram}, catalog);
  EXPECT_TRUE(plan.decisions.empty());
  EXPECT_EQ(plan.build_order().front(), "big");
  EXPECT_EQ(plan.build_cardinality_sum(), 1500u + 1000u + 200u);
}

TEST_F(OptimizerTest, ExplainFormat) {
  const auto run = run_query(catalog, std::string(kStar) + " AND big.v = 3 AND mid.v < 50", {.redact_timings = true});
  const std::regex line(R"(ESC table=\w+ count=\d+ sel=[0-9.]+ pushdown=(true|false) time_ms=-)");
  std::istringstream in(run.explain);
  std::string first;
  std::getline(in, first);
  EXPECT_TRUE(std::regex_match(first, line)) << first;
  EXPECT_NE(run.explain.find("ScanTemp big rows=15"), std::string::npos) << run.explain;
  EXPECT_EQ(run.explain.find("temp#"), std::string::npos);
  EXPECT_NE(run.explain_json.find("\"decisions\""), std::string::npos);
  EXPECT_EQ(run_query(catalog, std::string(kStar) + " AND big.v = 3 AND mid.v < 50", {.redact_timings = true}).explain,
            run.explain);
}

}  // namespace
}  // namespace escdb
