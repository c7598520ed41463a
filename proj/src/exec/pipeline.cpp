#include "escdb/exec/pipeline.hpp"

#include <chrono>
#include <exception>
#include <thread>

#include <fmt/format.h>

#include "escdb/error.hpp"
#include "escdb/exec/filter.hpp"
#include "escdb/exec/hash_table.hpp"

namespace escdb {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

const ColumnTable& slot_table(const JoinPipeline& p, std::size_t slot) {
  return slot == 0 ? *p.probe.table : *p.builds.at(slot - 1).input.table;
}

// Reads a probe-side key in the build column's encoding. TEXT columns of
// different tables have different dictionaries, so their codes are translated.
struct KeyReader {
  std::size_t slot = 0;
  const Column* column = nullptr;
  std::vector<std::int64_t> translation;  // empty when no translation is needed

  bool read(std::uint32_t row, std::int64_t& key) const {
    if (column->is_null(row)) return false;
    key = column->value(row);
    if (!translation.empty()) {
      key = translation[static_cast<std::size_t>(key)];
      if (key < 0) return false;
    }
    return true;
  }
};

KeyReader make_reader(const JoinPipeline& p, const KeyPair& pair, const Column& build_column) {
  KeyReader reader;
  reader.slot = pair.probe_side.relation;
  reader.column = &slot_table(p, reader.slot).column(pair.probe_side.column);
  if (reader.column->type() != build_column.type()) {
    throw Error(ErrorCode::TypeMismatch, fmt::format("join key '{}' is {} but '{}' is {}", reader.column->name(),
                                                     reader.column->type().to_string(), build_column.name(),
                                                     build_column.type().to_string()));
  }
  if (reader.column->type().id == TypeId::Text && reader.column->dictionary() != build_column.dictionary()) {
    const auto& from = *reader.column->dictionary();
    const auto& to = *build_column.dictionary();
    reader.translation.resize(from.size());
    for (std::size_t code = 0; code < from.size(); ++code) {
      reader.translation[code] = to.find(from.decode(static_cast<std::int64_t>(code))).value_or(-1);
    }
  }
  return reader;
}

struct PreparedStep {
  JoinHashTable table;
  std::vector<KeyReader> readers;
  std::vector<const Column*> build_columns;
};

struct Fragment {
  std::int64_t count = 0;
  std::size_t qualifying = 0;
  std::vector<RowIds> slots;
  std::vector<std::size_t> lookups;
  std::vector<std::size_t> matches;
};

void probe_partition(const JoinPipeline& p, const TableFilter& probe_filter, const std::vector<PreparedStep>& steps,
                     std::uint32_t begin, std::uint32_t end, std::size_t chunk_rows, Fragment& out) {
  const std::size_t slot_count = steps.size() + 1;
  out.slots.assign(slot_count, {});
  out.lookups.assign(steps.size(), 0);
  out.matches.assign(steps.size(), 0);
  std::vector<RowIds> current(slot_count);
  std::vector<RowIds> next(slot_count);

  for (std::uint32_t start = begin; start < end;) {
    const auto stop = static_cast<std::uint32_t>(std::min<std::size_t>(end, std::size_t{start} + chunk_rows));
    current[0].clear();
    probe_filter.filter_range(start, stop, current[0]);
    start = stop;
    out.qualifying += current[0].size();
    std::size_t tuples = current[0].size();

    for (std::size_t s = 0; s < steps.size() && tuples > 0; ++s) {
      const auto& step = steps[s];
      const auto& hashed = step.readers.front();
      for (std::size_t k = 0; k <= s + 1; ++k) next[k].clear();
      out.lookups[s] += tuples;
      for (std::size_t t = 0; t < tuples; ++t) {
        std::int64_t key = 0;
        if (!hashed.read(current[hashed.slot][t], key)) continue;
        for (auto e = step.table.find(key); e != JoinHashTable::kEnd; e = step.table.next(e)) {
          const auto build_row = step.table.row(e);
          bool all_equal = true;
          for (std::size_t k = 1; k < step.readers.size() && all_equal; ++k) {
            std::int64_t v = 0;
            const auto* bc = step.build_columns[k];
            all_equal = step.readers[k].read(current[step.readers[k].slot][t], v) && !bc->is_null(build_row) &&
                        bc->value(build_row) == v;
          }
          if (!all_equal) continue;
          for (std::size_t k = 0; k <= s; ++k) next[k].push_back(current[k][t]);
          next[s + 1].push_back(build_row);
        }
      }
      for (std::size_t k = 0; k <= s + 1; ++k) current[k].swap(next[k]);
      tuples = current[0].size();
      out.matches[s] += tuples;
    }
    if (steps.empty() || tuples > 0) {
      out.count += static_cast<std::int64_t>(tuples);
      if (!p.count_star) {
        for (std::size_t k = 0; k < slot_count; ++k) {
          out.slots[k].insert(out.slots[k].end(), current[k].begin(), current[k].begin() + static_cast<std::ptrdiff_t>(tuples));
        }
      }
    }
  }
}

}  // namespace

QueryResult execute(const JoinPipeline& p, const UdfRegistry& udfs, const ExecOptions& options) {
  if (options.workers == 0) throw Error(ErrorCode::InvalidConfig, "workers must be at least 1");
  if (options.chunk_rows == 0) throw Error(ErrorCode::InvalidConfig, "chunk size must be at least 1");
  QueryResult result;
  result.count_star = p.count_star;
  auto& stats = result.stats;

  const auto build_start = Clock::now();
  std::vector<PreparedStep> steps;
  steps.reserve(p.builds.size());
  for (std::size_t s = 0; s < p.builds.size(); ++s) {
    const auto& build = p.builds[s];
    if (build.keys.empty()) {
      throw Error(ErrorCode::CartesianProductRequired, fmt::format("no join key for '{}'", build.input.alias));
    }
    for (const auto& key : build.keys) {
      if (key.probe_side.relation > s) {
        throw Error(ErrorCode::ExecutionError,
                    fmt::format("join key of '{}' refers to a relation joined later", build.input.alias));
      }
    }
    const auto& table = *build.input.table;
    auto rows = TableFilter(table, build.input.filter, udfs).select_all();
    const auto& key_column = table.column(build.keys.front().build_column);
    std::erase_if(rows, [&](std::uint32_t r) { return key_column.is_null(r); });
    std::vector<std::int64_t> keys(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) keys[i] = key_column.value(rows[i]);

    PreparedStep step{JoinHashTable(rows, keys), {}, {}};
    for (const auto& key : build.keys) {
      const auto& bc = table.column(key.build_column);
      step.readers.push_back(make_reader(p, key, bc));
      step.build_columns.push_back(&bc);
    }
    stats.joins.push_back({build.input.alias, table.row_count(), rows.size(), 0, 0});
    steps.push_back(std::move(step));
  }
  stats.build_ms = elapsed_ms(build_start);

  const auto probe_start = Clock::now();
  const TableFilter probe_filter(*p.probe.table, p.probe.filter, udfs);
  const auto rows = static_cast<std::uint32_t>(p.probe.table->row_count());
  stats.probe_rows = rows;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(options.workers, rows / options.chunk_rows + 1));
  std::vector<Fragment> fragments(workers);
  const auto bound = [&](std::size_t w) { return static_cast<std::uint32_t>(std::size_t{rows} * w / workers); };
  if (workers == 1) {
    probe_partition(p, probe_filter, steps, 0, rows, options.chunk_rows, fragments[0]);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          probe_partition(p, probe_filter, steps, bound(w), bound(w + 1), options.chunk_rows, fragments[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (const auto& f : fragments) {
    result.count += f.count;
    stats.probe_qualifying += f.qualifying;
    for (std::size_t s = 0; s < steps.size(); ++s) {
      stats.joins[s].lookups += f.lookups[s];
      stats.joins[s].matches += f.matches[s];
    }
  }

  if (!p.count_star) {
    for (std::size_t i = 0; i < p.output.size(); ++i) {
      const auto [slot, column] = p.output[i];
      RowIds ids;
      ids.reserve(static_cast<std::size_t>(result.count));
      for (const auto& f : fragments) ids.insert(ids.end(), f.slots[slot].begin(), f.slots[slot].end());
      auto gathered = slot_table(p, slot).column(column).gather(ids);
      const auto& name = i < p.output_names.size() ? p.output_names[i] : gathered.name();
      gathered.rename(name);
      result.names.push_back(name);
      result.columns.push_back(std::move(gathered));
    }
  }
  stats.probe_ms = elapsed_ms(probe_start);
  return result;
}

ColumnTable QueryResult::to_table(const std::string& name) const {
  if (count_star) {
    Column c("count", ColumnType::int64());
    c.push_back(count);
    return ColumnTable(name, std::vector<Column>{std::move(c)});
  }
  return ColumnTable(name, columns);
}

}  // namespace escdb
