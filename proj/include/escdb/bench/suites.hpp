#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "escdb/bench/generator.hpp"
#include "escdb/optimizer/esc.hpp"

namespace escdb::bench {

struct BenchOptions {
  double scale = 0.01;
  std::uint64_t seed = 1;
  /// Timed repetitions per arm after one discarded warm-up run.
  std::size_t reps = 7;
  std::size_t workers = 1;
  /// Configuration of the ESC arm. The baseline arm is the same with `enabled` off.
  EscConfig esc;
  /// tpch4 only: also run the histogram-estimator arm.
  bool histogram_arm = false;
  double fk_zipf = 0;
  bool correlated = true;
  /// overhead-scale only; defaults to 0.001, 0.01 and 0.05.
  std::vector<double> scales;
};

struct NamedQuery {
  std::string name;
  std::string sql;
};

std::vector<NamedQuery> tpch4_queries();
std::vector<NamedQuery> ssb_queries();

struct BenchRow {
  std::string query;
  std::string arm;  // baseline | esc | histogram
  std::string sql;
  double scale = 0;
  double time_ms = 0;      // median total time, sub-queries included
  double overhead_ms = 0;  // median sub-query plus materialization time
  std::size_t build_card_sum = 0;
  std::int64_t result_count = 0;
  std::vector<std::string> build_order;
  nlohmann::json decisions = nlohmann::json::array();
};

struct BenchReport {
  std::string suite;
  Benchmark benchmark = Benchmark::TpchSubset;
  double scale = 0;
  std::uint64_t seed = 0;
  std::vector<BenchRow> rows;

  const BenchRow* find(std::string_view query, std::string_view arm) const;
  /// Distinct query names in report order.
  std::vector<std::string> queries() const;
  /// baseline time / esc time for one query.
  double speedup(std::string_view query) const;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

const std::vector<std::string>& suite_names();

/// Runs one named suite. Unknown names throw UsageError listing the valid ones.
BenchReport run_suite(std::string_view name, const BenchOptions& options);

/// Throws Error(UsageError) naming the first schema violation.
void validate_report_json(const nlohmann::json& report);

}  // namespace escdb::bench
