#include <gtest/gtest.h>

#include <sstream>
#include <unordered_set>

#include "escdb/bench/suites.hpp"
#include "escdb/error.hpp"
#include "escdb/storage/csv.hpp"

namespace escdb::bench {
namespace {

const ColumnTable& by_name(const std::vector<std::shared_ptr<ColumnTable>>& tables, std::string_view name) {
  for (const auto& t : tables) {
    if (t->name() == name) return *t;
  }
  throw std::runtime_error("missing table " + std::string(name));
}

const Column& column(const ColumnTable& t, std::string_view name) { return t.column(t.column_index(name)); }

/// Every value of `fk` appears in `pk`.
std::size_t dangling(const ColumnTable& fact, std::string_view fk, const ColumnTable& dim, std::string_view pk) {
  const auto& keys = column(dim, pk);
  std::unordered_set<std::int64_t> present;
  for (std::size_t row = 0; row < keys.size(); ++row) present.insert(keys.value(row));
  const auto& refs = column(fact, fk);
  std::size_t missing = 0;
  for (std::size_t row = 0; row < refs.size(); ++row) missing += present.count(refs.value(row)) == 0 ? 1 : 0;
  return missing;
}

std::string dump(const std::vector<std::shared_ptr<ColumnTable>>& tables) {
  std::ostringstream out;
  for (const auto& t : tables) write_csv(out, *t, {.header = true});
  return out.str();
}

TEST(Generator, TpchRowCountsFollowScale) {
  const auto tables = generate({.benchmark = Benchmark::TpchSubset, .scale = 0.001});
  EXPECT_EQ(by_name(tables, "orders").row_count(), 1500u);
  EXPECT_EQ(by_name(tables, "part").row_count(), 200u);
  EXPECT_EQ(by_name(tables, "supplier").row_count(), 10u);
  const auto lines = by_name(tables, "lineitem").row_count();
  EXPECT_GT(lines, 5000u);
  EXPECT_LT(lines, 7000u);
  EXPECT_EQ(column(by_name(tables, "orders"), "o_orderstatus").type(), ColumnType::text());
  EXPECT_EQ(column(by_name(tables, "orders"), "o_totalprice").type(), ColumnType::decimal(15, 2));
}

TEST(Generator, IdenticalSpecsGiveIdenticalBytes) {
  for (const auto benchmark : {Benchmark::TpchSubset, Benchmark::SsbSubset}) {
    const GenSpec spec{.benchmark = benchmark, .scale = 0.002, .seed = 99, .fk_zipf = 0.8};
    EXPECT_EQ(dump(generate(spec)), dump(generate(spec)));
    auto other = spec;
    other.seed = 100;
    EXPECT_NE(dump(generate(spec)), dump(generate(other)));
  }
}

TEST(Generator, ForeignKeysNeverDangle) {
  for (const double zipf : {0.0, 1.1}) {
    const auto tpch = generate({.benchmark = Benchmark::TpchSubset, .scale = 0.005, .fk_zipf = zipf});
    const auto& lineitem = by_name(tpch, "lineitem");
    EXPECT_EQ(dangling(lineitem, "l_orderkey", by_name(tpch, "orders"), "o_orderkey"), 0u);
    EXPECT_EQ(dangling(lineitem, "l_partkey", by_name(tpch, "part"), "p_partkey"), 0u);
    EXPECT_EQ(dangling(lineitem, "l_suppkey", by_name(tpch, "supplier"), "s_suppkey"), 0u);

    const auto ssb = generate({.benchmark = Benchmark::SsbSubset, .scale = 0.005, .fk_zipf = zipf});
    const auto& lineorder = by_name(ssb, "lineorder");
    EXPECT_EQ(dangling(lineorder, "lo_custkey", by_name(ssb, "customer"), "c_custkey"), 0u);
    EXPECT_EQ(dangling(lineorder, "lo_partkey", by_name(ssb, "part"), "p_partkey"), 0u);
    EXPECT_EQ(dangling(lineorder, "lo_suppkey", by_name(ssb, "supplier"), "s_suppkey"), 0u);
    EXPECT_EQ(dangling(lineorder, "lo_orderdate", by_name(ssb, "dwdate"), "d_datekey"), 0u);
  }
}

TEST(Generator, OrderStatusAgreesWithLineStatus) {
  const auto tpch = generate({.benchmark = Benchmark::TpchSubset, .scale = 0.002});
  const auto& orders = by_name(tpch, "orders");
  const auto& lineitem = by_name(tpch, "lineitem");
  std::vector<std::string> statuses(orders.row_count() + 1);
  const auto& keys = column(lineitem, "l_orderkey");
  const auto& line_status = column(lineitem, "l_linestatus");
  for (std::size_t row = 0; row < lineitem.row_count(); ++row) {
    auto& s = statuses[static_cast<std::size_t>(keys.value(row))];
    if (s.find(line_status.format(row)) == std::string::npos) s += line_status.format(row);
  }
  const auto& status = column(orders, "o_orderstatus");
  for (std::size_t row = 0; row < orders.row_count(); ++row) {
    const auto& lines = statuses[row + 1];
    const auto expected = lines.size() == 2 ? "P" : lines;
    ASSERT_EQ(status.format(row), expected) << "order " << row + 1;
  }
}

TEST(Generator, FactTableDominatesSsb) {
  const auto ssb = generate({.benchmark = Benchmark::SsbSubset, .scale = 0.01});
  std::size_t total = 0;
  for (const auto& t : ssb) total += t->row_count();
  EXPECT_GE(static_cast<double>(by_name(ssb, "lineorder").row_count()) / static_cast<double>(total), 0.95);
}

TEST(Generator, RejectsScalesWithoutRows) {
  for (const double scale : {0.0, -1.0, 1e-7}) {
    try {
      generate({.scale = scale});
      FAIL() << scale;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ScaleTooSmall);
    }
  }
}

TEST(Generator, PricePerDayFunction) {
  UdfRegistry udfs;
  register_bench_functions(udfs);
  register_bench_functions(udfs);
  const std::vector<double> args{3000, static_cast<double>(date_from_ymd(1992, 1, 3))};
  EXPECT_DOUBLE_EQ(udfs.find("price_per_day")->fn(args), 1000.0);
}

TEST(Suites, UnknownSuiteListsValidNames) {
  try {
    run_suite("tpch5", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UsageError);
    for (const auto& name : suite_names()) EXPECT_NE(std::string(e.what()).find(name), std::string::npos);
  }
}

TEST(Suites, Tpch4ShapeAndSchema) {
  const auto report = run_suite("tpch4", {.scale = 0.003, .seed = 7, .reps = 1});
  EXPECT_EQ(report.rows.size(), 8u);
  EXPECT_EQ(report.queries(), (std::vector<std::string>{"T1", "T2", "T3", "T4"}));
  const auto payload = report.to_json();
  EXPECT_NO_THROW(validate_report_json(payload));
  EXPECT_NO_THROW(validate_report_json(nlohmann::json::parse(payload.dump())));
  EXPECT_EQ(payload["spec"]["seed"], 7);
  EXPECT_EQ(payload["spec"]["benchmark"], "tpch");
  for (const auto& q : report.queries()) {
    EXPECT_EQ(report.find(q, "baseline")->result_count, report.find(q, "esc")->result_count) << q;
    EXPECT_TRUE(report.find(q, "baseline")->decisions.empty());
  }
  EXPECT_NE(report.to_text().find("speedup"), std::string::npos);
  auto broken = payload;
  broken["rows"][0].erase("build_card_sum");
  EXPECT_THROW(validate_report_json(broken), Error);
}

TEST(Suites, OverheadSuitesHaveTheirCells) {
  const BenchOptions options{.scale = 0.002, .reps = 1, .scales = {0.001, 0.002, 0.003}};
  const auto by_scale = run_suite("overhead-scale", options);
  EXPECT_EQ(by_scale.queries().size(), 9u);
  for (const auto& q : by_scale.queries()) {
    const auto* esc = by_scale.find(q, "esc");
    EXPECT_EQ(esc->build_order, by_scale.find(q, "baseline")->build_order) << q;
    ASSERT_EQ(esc->decisions.size(), 1u);
    EXPECT_FALSE(esc->decisions[0]["pushdown"].get<bool>());
  }
  const auto by_selectivity = run_suite("overhead-selectivity", options);
  EXPECT_EQ(by_selectivity.queries().size(), 6u);
  const auto* full = by_selectivity.find("100%", "esc");
  EXPECT_EQ(full->decisions[0]["count"].get<std::int64_t>(), 3000);
  EXPECT_GE(by_selectivity.find("0.001%", "esc")->decisions[0]["count"].get<std::int64_t>(), 1);
  const auto by_attrs = run_suite("overhead-attrs", options);
  EXPECT_EQ(by_attrs.queries().size(), 4u);
}

}  // namespace
}  // namespace escdb::bench
