#include <gtest/gtest.h>

#include <algorithm>

#include "escdb/engine.hpp"
#include "oracle/fixtures.hpp"
#include "oracle/oracle.hpp"

namespace escdb {
namespace {

std::vector<std::vector<std::string>> sorted_rows(const QueryResult& result) {
  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(result.count));
  for (const auto& c : result.columns) {
    for (std::size_t row = 0; row < rows.size(); ++row) rows[row].push_back(c.format(row));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

class OracleTest : public ::testing::TestWithParam<std::uint64_t> {
 protected:
  void SetUp() override {
    testing::add_fixture_tables(catalog, GetParam(), 80, 20, 10);
    testing::add_fixture_functions(catalog);
  }
  Catalog catalog;
};

TEST_P(OracleTest, SingleTableCountsAreExact) {
  testing::PredicateGenerator gen(GetParam() * 31 + 1);
  for (int i = 0; i < 150; ++i) {
    const auto sql = "SELECT COUNT(*) FROM r WHERE " + gen.next();
    const auto expected = oracle::evaluate(catalog, sql).count;
    EXPECT_EQ(run_query(catalog, sql).result.count, expected) << sql;
  }
}

TEST_P(OracleTest, JoinsMatchNestedLoops) {
  testing::PredicateGenerator gen(GetParam() * 17 + 5, "x");
  const std::vector<EscConfig> arms{
      {.enabled = false},
      {.enabled = true, .min_table_size = 0, .max_selectivity = 1.0},
      {.enabled = true, .min_table_size = 0, .max_selectivity = 0.3},
      {.enabled = false, .estimator = EstimatorMode::Histogram},
  };
  for (int i = 0; i < 25; ++i) {
    const auto where = gen.next(2);
    const auto count_sql = "SELECT COUNT(*) FROM r x, s, t WHERE x.k = s.k AND s.x = t.x AND " + where +
                           " AND (s.t <> 'MAIL' OR t.y > 5)";
    const auto rows_sql = "SELECT x.a, x.d, s.t, t.y FROM s, r x, t WHERE t.x = s.x AND s.k = x.k AND " + where;
    const auto expected_count = oracle::evaluate(catalog, count_sql).count;
    const auto expected_rows = oracle::evaluate(catalog, rows_sql).rows;
    for (const auto& esc : arms) {
      // The cross-relation OR is not an equi-join, so only the projection query is plannable.
      EXPECT_THROW(run_query(catalog, count_sql, {.esc = esc}), Error);
      const auto run = run_query(catalog, rows_sql, {.esc = esc});
      EXPECT_EQ(sorted_rows(run.result), expected_rows) << rows_sql;
      EXPECT_EQ(catalog.database().live_temp_count(), 0u);
    }
    (void)expected_count;
  }
}

TEST_P(OracleTest, CountsWithResidualsOnEveryRelation) {
  testing::PredicateGenerator gen(GetParam() * 13 + 2, "x");
  for (int i = 0; i < 25; ++i) {
    const auto sql = "SELECT COUNT(*) FROM r x, s, t WHERE x.k = s.k AND s.x = t.x AND " + gen.next(2) +
                     " AND s.t <> 'MAIL' AND t.y > 5";
    const auto expected = oracle::evaluate(catalog, sql).count;
    for (const bool esc : {false, true}) {
      EscConfig config{.enabled = esc, .min_table_size = 0, .max_selectivity = 0.5};
      EXPECT_EQ(run_query(catalog, sql, {.esc = config}).result.count, expected) << sql;
    }
  }
}

TEST_P(OracleTest, SelectStarMatches) {
  const auto sql = "SELECT * FROM s, t WHERE s.x = t.x AND t.y >= 3.5";
  const auto run = run_query(catalog, sql, {.esc = {.min_table_size = 0, .max_selectivity = 1}});
  EXPECT_EQ(sorted_rows(run.result), oracle::evaluate(catalog, sql).rows);
}

INSTANTIATE_TEST_SUITE_P(Seeds, OracleTest, ::testing::Values(1, 2, 3, 42));

}  // namespace
}  // namespace escdb
