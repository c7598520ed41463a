#include "escdb/exec/ra_interpreter.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "escdb/error.hpp"
#include "escdb/exec/hash_table.hpp"

namespace escdb {

namespace {

std::size_t slot_of(const RaRows& rows, std::size_t relation) {
  const auto it = std::find(rows.relations.begin(), rows.relations.end(), relation);
  if (it == rows.relations.end()) {
    throw Error(ErrorCode::UnknownColumn, fmt::format("relation {} is not part of this subtree", relation));
  }
  return static_cast<std::size_t>(it - rows.relations.begin());
}

// Key of `column` at `row` re-encoded for `target` (dictionary codes differ between tables).
bool encoded_key(const Column& column, std::uint32_t row, const Column& target, std::int64_t& key) {
  if (column.is_null(row)) return false;
  key = column.value(row);
  if (column.type().id == TypeId::Text && column.dictionary() != target.dictionary()) {
    const auto code = target.dictionary()->find(column.dictionary()->decode(key));
    if (!code) return false;
    key = *code;
  }
  return true;
}

RaRows hash_join(const RaNode& node, RaRows left, RaRows right, const std::vector<Relation>& relations) {
  RaRows out;
  out.relations = left.relations;
  out.relations.insert(out.relations.end(), right.relations.begin(), right.relations.end());
  out.rows.resize(out.relations.size());
  out.schema = node.schema;
  const auto emit = [&](std::size_t l, std::size_t r) {
    for (std::size_t k = 0; k < left.rows.size(); ++k) out.rows[k].push_back(left.rows[k][l]);
    for (std::size_t k = 0; k < right.rows.size(); ++k) out.rows[left.rows.size() + k].push_back(right.rows[k][r]);
  };

  if (node.equi_pairs.empty()) {
    for (std::size_t l = 0; l < left.size(); ++l) {
      for (std::size_t r = 0; r < right.size(); ++r) emit(l, r);
    }
    return out;
  }

  const auto column = [&](ColumnId id) -> const Column& {
    return relations.at(id.relation).source->column(id.column);
  };
  const auto& first = node.equi_pairs.front();
  const auto& build_column = column(first.right);
  const auto build_slot = slot_of(right, first.right.relation);
  RowIds positions;
  std::vector<std::int64_t> keys;
  for (std::size_t r = 0; r < right.size(); ++r) {
    const auto row = right.rows[build_slot][r];
    if (build_column.is_null(row)) continue;
    positions.push_back(static_cast<std::uint32_t>(r));
    keys.push_back(build_column.value(row));
  }
  const JoinHashTable table(positions, keys);
  const auto probe_slot = slot_of(left, first.left.relation);
  const auto& probe_column = column(first.left);
  for (std::size_t l = 0; l < left.size(); ++l) {
    std::int64_t key = 0;
    if (!encoded_key(probe_column, left.rows[probe_slot][l], build_column, key)) continue;
    for (auto e = table.find(key); e != JoinHashTable::kEnd; e = table.next(e)) {
      const auto r = table.row(e);
      bool all_equal = true;
      for (std::size_t k = 1; k < node.equi_pairs.size() && all_equal; ++k) {
        const auto& pair = node.equi_pairs[k];
        const auto& rc = column(pair.right);
        const auto rrow = right.rows[slot_of(right, pair.right.relation)][r];
        std::int64_t v = 0;
        all_equal = encoded_key(column(pair.left), left.rows[slot_of(left, pair.left.relation)][l], rc, v) &&
                    !rc.is_null(rrow) && rc.value(rrow) == v;
      }
      if (all_equal) emit(l, r);
    }
  }
  return out;
}

}  // namespace

RaRows run_ra(const RaNode& node, const std::vector<Relation>& relations, const UdfRegistry& udfs) {
  switch (node.kind) {
    case RaNode::Kind::Scan: {
      RaRows out;
      out.relations = {node.relation};
      out.rows.resize(1);
      out.rows[0].resize(relations.at(node.relation).source->row_count());
      std::iota(out.rows[0].begin(), out.rows[0].end(), 0U);
      out.schema = node.schema;
      return out;
    }
    case RaNode::Kind::Select: {
      auto in = run_ra(node.child(), relations, udfs);
      if (in.relations.size() == 1) {
        const auto& table = *relations.at(in.relations.front()).source;
        TableFilter(table, node.predicate, udfs).filter(in.rows.front());
        return in;
      }
      RaRows out;
      out.relations = in.relations;
      out.schema = in.schema;
      out.rows.resize(in.rows.size());
      std::size_t tuple = 0;
      const CellLocator at = [&](ColumnId id) {
        return std::pair{&relations.at(id.relation).source->column(id.column),
                         std::size_t{in.rows[slot_of(in, id.relation)][tuple]}};
      };
      for (; tuple < in.size(); ++tuple) {
        if (!evaluate_row(node.predicate, at, udfs)) continue;
        for (std::size_t k = 0; k < in.rows.size(); ++k) out.rows[k].push_back(in.rows[k][tuple]);
      }
      return out;
    }
    case RaNode::Kind::Project: {
      auto in = run_ra(node.child(), relations, udfs);
      in.schema = node.schema;
      return in;
    }
    case RaNode::Kind::HashJoin:
      return hash_join(node, run_ra(node.children[0], relations, udfs), run_ra(node.children[1], relations, udfs),
                       relations);
    case RaNode::Kind::Aggregate: {
      auto in = run_ra(node.child(), relations, udfs);
      in.count = static_cast<std::int64_t>(in.size());
      in.schema = node.schema;
      return in;
    }
  }
  return {};
}

std::int64_t count_ra(const RaNode& node, const std::vector<Relation>& relations, const UdfRegistry& udfs) {
  if (node.kind != RaNode::Kind::Aggregate) throw Error(ErrorCode::ExecutionError, "count requested from a non-aggregate plan");
  return *run_ra(node, relations, udfs).count;
}

std::vector<Column> materialize_ra(const RaNode& node, const std::vector<Relation>& relations, const UdfRegistry& udfs) {
  if (node.kind != RaNode::Kind::Project) throw Error(ErrorCode::ExecutionError, "materialization needs a projection");
  const auto rows = run_ra(node, relations, udfs);
  std::vector<Column> out;
  for (const auto& id : node.columns) {
    out.push_back(relations.at(id.relation).source->column(id.column).gather(rows.rows[slot_of(rows, id.relation)]));
  }
  return out;
}

}  // namespace escdb
