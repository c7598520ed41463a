// Command-line front end: load CSV data or generate benchmark data, run SQL
// with ESC on or off, print EXPLAIN output and run the benchmark suites.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "escdb/bench/suites.hpp"
#include "escdb/engine.hpp"
#include "escdb/error.hpp"
#include "escdb/sql/parser.hpp"
#include "escdb/storage/csv.hpp"

namespace {

using namespace escdb;
using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Error tagged with the processing phase that raised it.
struct PhaseError {
  std::string phase;
  std::string message;
  bool usage = false;
};

struct Settings {
  std::string esc = "on";
  std::size_t min_table_size = 1000;
  double max_selectivity = 0.2;
  std::string estimator = "none";
  std::size_t workers = 1;
  std::string output = "text";
  bool explain = false;
  std::uint64_t seed = 1;
  double scale = 0.01;

  EscConfig esc_config() const {
    EscConfig config;
    config.enabled = esc == "on";
    config.min_table_size = min_table_size;
    config.max_selectivity = max_selectivity;
    config.estimator = parse_estimator_mode(estimator);
    config.validate();
    return config;
  }
  bool json_output() const { return output == "json"; }
};

struct DataSources {
  std::vector<std::string> loads;  // NAME=PATH:SCHEMA
  std::string generate;            // tpch | ssb
  bool header = false;
};

void add_data_options(CLI::App& cmd, DataSources& data) {
  cmd.add_option("--load", data.loads, "Load a CSV table, NAME=PATH:SCHEMA (schema like a:INT64,b:TEXT)");
  cmd.add_option("--gen", data.generate, "Generate a benchmark data set in memory")
      ->check(CLI::IsMember({"tpch", "ssb"}));
  cmd.add_flag("--header", data.header, "CSV files start with a header line");
}

template <typename Fn>
auto in_phase(std::string_view phase, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    const bool usage = e.code() == ErrorCode::UsageError || e.code() == ErrorCode::InvalidConfig;
    throw PhaseError{std::string(phase), e.what(), usage};
  } catch (const std::exception& e) {
    throw PhaseError{std::string(phase), e.what()};
  }
}

std::size_t load_table(Catalog& catalog, const std::string& name, const std::string& path, const std::string& schema,
                       bool header) {
  return in_phase("load", [&] {
    auto table = read_csv_file(path, name, parse_schema_spec(schema), {.header = header});
    const auto rows = table->row_count();
    catalog.database().add_table(std::move(table));
    return rows;
  });
}

void load_sources(Catalog& catalog, const DataSources& data, const Settings& settings) {
  if (!data.generate.empty()) {
    in_phase("load", [&] {
      bench::load_benchmark(catalog, {.benchmark = bench::parse_benchmark(data.generate),
                                      .scale = settings.scale,
                                      .seed = settings.seed});
    });
  }
  for (const auto& spec : data.loads) {
    const auto eq = spec.find('=');
    const auto colon = spec.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos) {
      throw PhaseError{"usage", fmt::format("--load expects NAME=PATH:SCHEMA, got '{}'", spec), true};
    }
    load_table(catalog, spec.substr(0, eq), spec.substr(eq + 1, colon - eq - 1), spec.substr(colon + 1), data.header);
  }
}

std::string classify_plan_error(const Error& e) {
  return e.code() == ErrorCode::ExecutionError ? "execute" : "plan";
}

QueryRun execute_sql(Catalog& catalog, const std::string& sql, const Settings& settings) {
  const auto query = in_phase("parse", [&] { return parse_sql(sql); });
  const auto bound = in_phase("analyze", [&] { return analyze(query, catalog); });
  const auto esc = in_phase("usage", [&] { return settings.esc_config(); });
  try {
    return run_query(catalog, bound, {.esc = esc, .workers = settings.workers});
  } catch (const Error& e) {
    throw PhaseError{classify_plan_error(e), e.what()};
  }
}

void print_run(std::ostream& out, const QueryRun& run, const Settings& settings) {
  const auto& result = run.result;
  if (settings.json_output()) {
    json payload{{"count", result.count},
                 {"plan_ms", run.plan_ms},
                 {"exec_ms", run.exec_ms},
                 {"total_ms", run.total_ms},
                 {"build_order", run.build_order},
                 {"build_card_sum", run.build_card_sum}};
    if (settings.explain) payload["explain"] = json::parse(run.explain_json);
    if (!result.count_star) {
      payload["columns"] = result.names;
      auto rows = json::array();
      for (std::int64_t row = 0; row < result.count; ++row) {
        auto cells = json::array();
        for (const auto& c : result.columns) cells.push_back(c.format(static_cast<std::size_t>(row)));
        rows.push_back(std::move(cells));
      }
      payload["rows"] = std::move(rows);
    }
    out << payload.dump() << '\n';
    return;
  }
  if (settings.explain) out << run.explain << '\n';
  if (result.count_star) {
    out << "count\n" << result.count << '\n';
  } else {
    out << fmt::format("{}\n", fmt::join(result.names, "|"));
    std::vector<std::string> cells(result.columns.size());
    for (std::int64_t row = 0; row < result.count; ++row) {
      for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = result.columns[c].format(static_cast<std::size_t>(row));
      out << fmt::format("{}\n", fmt::join(cells, "|"));
    }
    out << fmt::format("({} rows)\n", result.count);
  }
  out << fmt::format("time: plan {:.3f} ms, execute {:.3f} ms, total {:.3f} ms\n", run.plan_ms, run.exec_ms,
                     run.total_ms);
}

/// Splits a script on semicolons outside string literals and `--` comments.
std::vector<std::string> split_statements(const std::string& script) {
  std::vector<std::string> out;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const char c = script[i];
    if (!quoted && c == '-' && i + 1 < script.size() && script[i + 1] == '-') {
      while (i < script.size() && script[i] != '\n') ++i;
      current += '\n';
      continue;
    }
    if (c == '\'') quoted = !quoted;
    if (c == ';' && !quoted) {
      out.push_back(current);
      current.clear();
      continue;
    }
    current += c;
  }
  out.push_back(current);
  std::erase_if(out, [](const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; });
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PhaseError{"load", fmt::format("IoError: cannot read '{}'", path)};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int report(const PhaseError& e) {
  fmt::print(std::cerr, "error[{}]: {}\n", e.phase, e.message);
  return e.usage ? kExitUsage : kExitRuntime;
}

/// Line-based loop. Lines starting with '.' are commands; anything else is
/// one SQL statement (a trailing ';' is optional).
int repl(Catalog& catalog, Settings settings, bool header) {
  const bool prompt = !settings.json_output();
  int status = 0;
  std::string line;
  if (prompt) std::cout << "escdb> " << std::flush;
  while (std::getline(std::cin, line)) {
    std::istringstream words(line);
    std::string word;
    words >> word;
    try {
      if (word.empty()) {
      } else if (word == ".quit" || word == ".exit") {
        break;
      } else if (word == ".help") {
        std::cout << ".tables | .esc on|off | .explain on|off | .load NAME PATH SCHEMA | .quit | SQL statement\n";
      } else if (word == ".tables") {
        for (const auto& name : catalog.database().table_names()) {
          std::cout << fmt::format("{}: {} rows\n", name, catalog.database().table(name).row_count());
        }
      } else if (word == ".esc" || word == ".explain") {
        std::string value;
        words >> value;
        if (value != "on" && value != "off") throw PhaseError{"usage", word + " expects on or off", true};
        if (word == ".esc") {
          settings.esc = value;
        } else {
          settings.explain = value == "on";
        }
      } else if (word == ".load") {
        std::string name, path, schema;
        words >> name >> path >> schema;
        std::cout << fmt::format("{}: {} rows\n", name, load_table(catalog, name, path, schema, header));
      } else if (word.front() == '.') {
        throw PhaseError{"usage", "unknown command " + word + " (try .help)", true};
      } else {
        for (const auto& sql : split_statements(line)) print_run(std::cout, execute_sql(catalog, sql, settings), settings);
      }
    } catch (const PhaseError& e) {
      status = report(e);
    }
    if (prompt) std::cout << "escdb> " << std::flush;
  }
  if (prompt) std::cout << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"escdb: in-memory columnar SQL engine with exact selectivity computation"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings settings;
  app.add_option("--esc", settings.esc, "Exact selectivity computation")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  app.add_option("--min-table-size", settings.min_table_size, "Smallest table that gets a counting sub-query")
      ->capture_default_str();
  app.add_option("--max-selectivity", settings.max_selectivity, "Largest selectivity that is pushed down")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--estimator", settings.estimator, "Build ordering when ESC is off")
      ->check(CLI::IsMember({"none", "histogram"}))
      ->capture_default_str();
  app.add_option("--workers", settings.workers, "Probe worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--output", settings.output, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_flag("--explain", settings.explain, "Print ESC decisions and the plan before results");
  app.add_option("--seed", settings.seed, "Generator seed")->capture_default_str();
  app.add_option("--scale", settings.scale, "Generator scale (fraction of scale factor 1)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // load
  auto* load = app.add_subcommand("load", "Load one CSV file and report its row count");
  std::string load_path, load_table_name, load_schema;
  bool load_header = false;
  load->add_option("path", load_path, "CSV file")->required();
  load->add_option("--table", load_table_name, "Table name")->required();
  load->add_option("--schema", load_schema, "Column spec, e.g. a:INT64,b:DECIMAL(15,2),c:DATE,d:TEXT")->required();
  load->add_flag("--header", load_header, "First line is a header");

  // sql
  auto* sql = app.add_subcommand("sql", "Run SQL statements");
  DataSources sql_data;
  std::string sql_text, sql_file;
  sql->add_option("query", sql_text, "SQL text (several statements may be separated by ';')");
  sql->add_option("--file", sql_file, "Read statements from a .sql file");
  add_data_options(*sql, sql_data);

  // run
  auto* run = app.add_subcommand("run", "Run every statement of a .sql file");
  DataSources run_data;
  std::string run_file;
  run->add_option("file", run_file, ".sql script")->required();
  add_data_options(*run, run_data);

  // repl
  auto* interactive = app.add_subcommand("repl", "Line-based interactive shell");
  DataSources repl_data;
  add_data_options(*interactive, repl_data);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
  std::string suite, bench_out;
  bench::BenchOptions bench_options;
  bool uncorrelated = false;
  bench_cmd->add_option("suite", suite, fmt::format("One of: {}", fmt::join(bench::suite_names(), ", ")))
      ->required();
  bench_cmd->add_option("--out", bench_out, "Write the JSON report to this file");
  bench_cmd->add_option("--reps", bench_options.reps, "Timed repetitions per arm")->capture_default_str();
  bench_cmd->add_flag("--histogram", bench_options.histogram_arm, "tpch4: add the histogram-estimator arm");
  bench_cmd->add_option("--zipf", bench_options.fk_zipf, "Zipf exponent for part and supplier foreign keys");
  bench_cmd->add_flag("--uncorrelated", uncorrelated, "Generate without cross-column correlation");
  bench_cmd->add_option("--scales", bench_options.scales, "overhead-scale: scales to sweep")->delimiter(',');

  // gen
  auto* gen = app.add_subcommand("gen", "Write a generated data set as CSV files");
  std::string gen_benchmark, gen_dir;
  gen->add_option("benchmark", gen_benchmark, "tpch or ssb")->required()->check(CLI::IsMember({"tpch", "ssb"}));
  gen->add_option("--dir", gen_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    Catalog catalog;
    if (*load) {
      const auto rows = load_table(catalog, load_table_name, load_path, load_schema, load_header);
      if (settings.json_output()) {
        std::cout << json{{"table", load_table_name}, {"rows", rows}}.dump() << '\n';
      } else {
        std::cout << fmt::format("{}: {} rows\n", load_table_name, rows);
      }
      return 0;
    }
    if (*sql || *run) {
      in_phase("usage", [&] { return settings.esc_config(); });
      const auto& data = *sql ? sql_data : run_data;
      std::string script = *run ? read_file(run_file) : sql_text;
      if (*sql && !sql_file.empty()) script += ";" + read_file(sql_file);
      const auto statements = split_statements(script);
      if (statements.empty()) throw PhaseError{"usage", "no SQL given", true};
      load_sources(catalog, data, settings);
      for (const auto& statement : statements) print_run(std::cout, execute_sql(catalog, statement, settings), settings);
      return 0;
    }
    if (*interactive) {
      in_phase("usage", [&] { return settings.esc_config(); });
      load_sources(catalog, repl_data, settings);
      return repl(catalog, settings, repl_data.header);
    }
    if (*bench_cmd) {
      bench_options.scale = settings.scale;
      bench_options.seed = settings.seed;
      bench_options.workers = settings.workers;
      bench_options.correlated = !uncorrelated;
      bench_options.esc = in_phase("usage", [&] { return settings.esc_config(); });
      const auto report = in_phase("bench", [&] { return bench::run_suite(suite, bench_options); });
      const auto payload = report.to_json().dump(2);
      if (!bench_out.empty()) {
        std::ofstream out(bench_out, std::ios::binary);
        if (!out) throw PhaseError{"bench", fmt::format("IoError: cannot write '{}'", bench_out)};
        out << payload << '\n';
      }
      std::cout << (settings.json_output() ? payload + "\n" : report.to_text());
      return 0;
    }
    if (*gen) {
      const bench::GenSpec spec{
          .benchmark = bench::parse_benchmark(gen_benchmark), .scale = settings.scale, .seed = settings.seed};
      const auto paths = in_phase("gen", [&] { return bench::write_benchmark_csv(spec, gen_dir); });
      const auto tables = in_phase("gen", [&] { return bench::generate(spec); });
      for (std::size_t i = 0; i < tables.size(); ++i) {
        std::vector<std::string> columns;
        for (const auto& def : tables[i]->schema()) columns.push_back(def.name + ":" + def.type.to_string());
        std::cout << fmt::format("{}: {} rows\n  --load {}={}:{}\n", tables[i]->name(), tables[i]->row_count(),
                                 tables[i]->name(), paths[i], fmt::join(columns, ","));
      }
      return 0;
    }
  } catch (const PhaseError& e) {
    return report(e);
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error[internal]: {}\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
