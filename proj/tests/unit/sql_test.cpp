#include <gtest/gtest.h>

#include <limits>

#include "escdb/catalog/catalog.hpp"
#include "escdb/error.hpp"
#include "escdb/sql/parser.hpp"
#include "escdb/sql/relational.hpp"
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

std::string message_of(const std::string& sql) {
  try {
    parse_sql(sql);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(Parser, ParsesTheSupportedSubset) {
  const auto q = parse_sql("SELECT COUNT(*) FROM R, S, T WHERE R.A = S.A AND S.C = T.C AND R.B = 5;");
  EXPECT_TRUE(q.count_star);
  ASSERT_EQ(q.tables.size(), 3u);
  ASSERT_TRUE(q.where.has_value());
  EXPECT_EQ(q.where->kind, ast::Expr::Kind::And);
  EXPECT_EQ(q.where->children.size(), 3u);

  const auto p = parse_sql("select l.a, o.b from lineitem l, orders as o where o.d between (1, 5)");
  EXPECT_EQ(p.projections.size(), 2u);
  EXPECT_EQ(p.tables[0].alias, "l");
  EXPECT_EQ(p.tables[1].alias, "o");
  EXPECT_EQ(p.where->kind, ast::Expr::Kind::Between);
}

TEST(Parser, RoundTripsThroughCanonicalText) {
  for (const char* sql : {
           "SELECT * FROM r WHERE NOT (r.a = 1 OR r.b < 2.5) AND r.c >= DATE '1995-01-03'",
           "SELECT COUNT(*) FROM r x, s WHERE x.k = s.k AND (s.t = 'it''s' OR f2(x.a, x.b) > -3)",
           "SELECT r.a FROM r WHERE r.a BETWEEN -1 AND 4 AND ((r.a <> 2 AND r.b > 1) OR r.d <= 'M')",
       }) {
    const auto q = parse_sql(sql);
    EXPECT_EQ(parse_sql(to_sql(q)), q) << sql << "\n" << to_sql(q);
  }
}

TEST(Parser, NamesUnsupportedConstructs) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"SELECT COUNT(*) FROM r GROUP BY a", "GROUP BY"},
      {"SELECT a FROM r ORDER BY a", "ORDER BY"},
      {"SELECT SUM(a) FROM r", "SUM"},
      {"SELECT COUNT(*) FROM r JOIN s ON r.k = s.k", "JOIN"},
      {"SELECT COUNT(*) FROM r WHERE a IN (1, 2)", "IN"},
      {"SELECT COUNT(*) FROM r WHERE a IS NULL", "IS NULL"},
      {"SELECT COUNT(*) FROM r WHERE a = (SELECT 1)", "subquery"},
      {"SELECT COUNT(*) FROM r WHERE a + 1 = 2", "arithmetic"},
  };
  for (const auto& [sql, construct] : cases) {
    EXPECT_EQ(code_of([&] { parse_sql(sql); }), ErrorCode::UnsupportedConstruct) << sql;
    EXPECT_NE(message_of(sql).find(construct), std::string::npos) << message_of(sql);
  }
}

TEST(Parser, SyntaxErrorsCarryPositions) {
  EXPECT_EQ(code_of([] { parse_sql("SELECT COUNT(*) FROM"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([] { parse_sql("SELECT COUNT(*) FROM r WHERE a = "); }), ErrorCode::SyntaxError);
  EXPECT_EQ(code_of([] { parse_sql("SELEC a FROM r"); }), ErrorCode::SyntaxError);
  const auto msg = message_of("SELECT COUNT(*)\nFROM r WHERE a = = 1");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

class AnalyzerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::add_fixture_tables(catalog, 7);
    testing::add_fixture_functions(catalog);
  }
  Predicate where(const std::string& sql) {
    const auto q = analyze_sql(sql, catalog);
    const RaNode* n = &q.root;
    while (n->kind != RaNode::Kind::Select) n = &n->child();
    return n->predicate;
  }
  Catalog catalog;
};

TEST_F(AnalyzerTest, BuildsTheCanonicalTree) {
  const auto q = analyze_sql("SELECT COUNT(*) FROM r, s, t WHERE r.k = s.k AND s.x = t.x AND r.a > 3", catalog);
  ASSERT_EQ(q.relations.size(), 3u);
  EXPECT_EQ(q.root.kind, RaNode::Kind::Aggregate);
  const auto& select = q.root.child();
  EXPECT_EQ(select.kind, RaNode::Kind::Select);
  const auto& top_join = select.child();
  EXPECT_EQ(top_join.kind, RaNode::Kind::HashJoin);
  EXPECT_EQ(top_join.children[1].kind, RaNode::Kind::Scan);
  EXPECT_EQ(top_join.children[1].relation, 2u);
  EXPECT_EQ(top_join.children[0].kind, RaNode::Kind::HashJoin);
  EXPECT_EQ(top_join.schema.size(), 5u + 3u + 2u);
  EXPECT_NO_THROW(check_schema(q.root));
}

TEST_F(AnalyzerTest, ResolvesColumns) {
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r, s WHERE k = 1", catalog); }), ErrorCode::AmbiguousColumn);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r WHERE r.zz = 1", catalog); }), ErrorCode::UnknownColumn);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM nope", catalog); }), ErrorCode::UnknownTable);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r WHERE q.a = 1", catalog); }), ErrorCode::UnknownTable);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r, r", catalog); }), ErrorCode::DuplicateTable);
  EXPECT_NO_THROW(analyze_sql("SELECT COUNT(*) FROM r a1, r a2 WHERE a1.k = a2.a", catalog));
  EXPECT_NO_THROW(analyze_sql("SELECT t FROM s WHERE x = 1", catalog));
}

TEST_F(AnalyzerTest, ChecksTypes) {
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r WHERE r.d = 5", catalog); }), ErrorCode::TypeMismatch);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r WHERE r.a = 'x'", catalog); }), ErrorCode::TypeMismatch);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r WHERE r.c = 'soon'", catalog); }), ErrorCode::TypeMismatch);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r, t WHERE r.b = t.y", catalog); }), ErrorCode::TypeMismatch);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r WHERE nofn(r.a) > 1", catalog); }),
            ErrorCode::UnknownFunction);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r WHERE f2(r.a) > 1", catalog); }), ErrorCode::ArityMismatch);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r WHERE inv(r.d) > 1", catalog); }), ErrorCode::TypeMismatch);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r WHERE r.a = r.k", catalog); }),
            ErrorCode::UnsupportedPredicate);
  EXPECT_EQ(code_of([&] { analyze_sql("SELECT COUNT(*) FROM r WHERE 1 = 1", catalog); }),
            ErrorCode::UnsupportedPredicate);
}

TEST_F(AnalyzerTest, EncodesConstantsPhysically) {
  auto p = where("SELECT COUNT(*) FROM r WHERE r.b < 12.5");
  EXPECT_EQ(p, Predicate::compare({0, 1}, CompareOp::Lt, 1250));
  p = where("SELECT COUNT(*) FROM r WHERE r.c >= DATE '1995-01-10'");
  EXPECT_EQ(p, Predicate::compare({0, 2}, CompareOp::Ge, date_from_ymd(1995, 1, 10)));
  p = where("SELECT COUNT(*) FROM r WHERE r.c >= '1995-01-10'");
  EXPECT_EQ(p.value, date_from_ymd(1995, 1, 10));
  p = where("SELECT COUNT(*) FROM r WHERE 3 < r.a");
  EXPECT_EQ(p, Predicate::compare({0, 0}, CompareOp::Gt, 3));
  p = where("SELECT COUNT(*) FROM r WHERE r.d = 'ZZZ absent'");
  EXPECT_EQ(p.kind, Predicate::Kind::Compare);
  EXPECT_EQ(p.value, -1);
  p = where("SELECT COUNT(*) FROM r WHERE r.d < 'M'");
  EXPECT_EQ(p.kind, Predicate::Kind::TextCompare);
}

TEST_F(AnalyzerTest, AdjustsOperatorsForExcessDecimalDigits) {
  // b is DECIMAL(10,2); 1.005 lies strictly between 1.00 and 1.01.
  EXPECT_EQ(where("SELECT COUNT(*) FROM r WHERE r.b < 1.005"), Predicate::compare({0, 1}, CompareOp::Le, 100));
  EXPECT_EQ(where("SELECT COUNT(*) FROM r WHERE r.b >= 1.005"), Predicate::compare({0, 1}, CompareOp::Gt, 100));
  EXPECT_EQ(where("SELECT COUNT(*) FROM r WHERE r.b > -1.005"), Predicate::compare({0, 1}, CompareOp::Gt, -101));
  const auto eq = where("SELECT COUNT(*) FROM r WHERE r.b = 1.005");
  EXPECT_EQ(eq.op, CompareOp::Lt);
  EXPECT_EQ(eq.value, std::numeric_limits<std::int64_t>::min());
  EXPECT_EQ(where("SELECT COUNT(*) FROM r WHERE r.b BETWEEN 0.001 AND 0.019"), Predicate::between({0, 1}, 1, 1));
  EXPECT_EQ(where("SELECT COUNT(*) FROM r WHERE r.a > 2.5"), Predicate::compare({0, 0}, CompareOp::Gt, 2));
}

TEST_F(AnalyzerTest, FoldsEmptyBetween) {
  EXPECT_TRUE(where("SELECT COUNT(*) FROM r WHERE r.a BETWEEN 5 AND 1").is_false());
  // Under NOT the empty range must not turn NULL rows into matches.
  const auto p = where("SELECT COUNT(*) FROM r WHERE NOT (r.a BETWEEN 5 AND 1)");
  EXPECT_FALSE(p.is_true());
}

TEST_F(AnalyzerTest, FunctionBetweenBecomesTwoComparisons) {
  const auto p = where("SELECT COUNT(*) FROM r WHERE f2(r.a, r.b) BETWEEN 1 AND 2");
  ASSERT_EQ(p.kind, Predicate::Kind::And);
  ASSERT_EQ(p.children.size(), 2u);
  EXPECT_EQ(p.children[0].op, CompareOp::Ge);
  EXPECT_EQ(p.children[1].op, CompareOp::Le);
}

TEST_F(AnalyzerTest, JoinGraphClassifiesEveryConjunct) {
  const auto q = analyze_sql(
      "SELECT COUNT(*) FROM r, s, t WHERE r.k = s.k AND s.x = t.x AND r.a > 3 AND (r.b < 1 OR r.a = 2) "
      "AND s.t = 'AIR' AND t.x BETWEEN 9 AND 2",
      catalog);
  const auto g = build_join_graph(q);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0], (JoinEdge{{0, 4}, {1, 0}}));
  EXPECT_EQ(count_atoms(g.residuals[0]), 3u);
  EXPECT_EQ(count_atoms(g.residuals[1]), 1u);
  EXPECT_TRUE(g.residuals[2].is_false());
  EXPECT_EQ(g.edges_of(1).size(), 2u);
  EXPECT_EQ(g.index_of("t"), 2u);

  const auto bad = analyze_sql("SELECT COUNT(*) FROM r, s WHERE r.k < s.k", catalog);
  EXPECT_EQ(code_of([&] { build_join_graph(bad); }), ErrorCode::UnsupportedPredicate);
  const auto mixed = analyze_sql("SELECT COUNT(*) FROM r, s WHERE r.k = s.k OR r.a = 1", catalog);
  EXPECT_EQ(code_of([&] { build_join_graph(mixed); }), ErrorCode::UnsupportedPredicate);
}

TEST_F(AnalyzerTest, JoinGraphKeepsEveryAtom) {
  testing::PredicateGenerator gen(99);
  for (int i = 0; i < 100; ++i) {
    const auto sql = "SELECT COUNT(*) FROM r, s WHERE r.k = s.k AND " + gen.next() + " AND s.x > 1";
    const auto q = analyze_sql(sql, catalog);
    const auto g = build_join_graph(q);
    const RaNode* n = &q.root;
    while (n->kind != RaNode::Kind::Select) n = &n->child();
    std::size_t classified = g.edges.size();
    for (const auto& r : g.residuals) classified += count_atoms(r);
    EXPECT_EQ(classified, count_atoms(n->predicate)) << sql;
  }
}

}  // namespace
}  // namespace escdb
