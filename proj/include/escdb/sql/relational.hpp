#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "escdb/sql/ast.hpp"
#include "escdb/sql/predicate.hpp"
#include "escdb/storage/table.hpp"

namespace escdb {

class Catalog;

/// One FROM-list entry.
struct Relation {
  std::string alias;  // name used for column qualification and plan ties
  std::string table;  // base table name
  std::shared_ptr<const ColumnTable> source;
};

struct OutputColumn {
  ColumnId id;
  std::string name;  // alias.column
  ColumnType type;

  friend bool operator==(const OutputColumn&, const OutputColumn&) = default;
};

struct EquiPair {
  ColumnId left;
  ColumnId right;

  friend bool operator==(const EquiPair&, const EquiPair&) = default;
};

enum class AggregateKind { CountStar };

/// Relational algebra tree. Every node carries its output schema.
struct RaNode {
  enum class Kind { Scan, Select, Project, HashJoin, Aggregate };

  Kind kind = Kind::Scan;
  std::vector<RaNode> children;
  std::size_t relation = 0;          // Scan
  Predicate predicate;               // Select
  std::vector<ColumnId> columns;     // Project
  std::vector<EquiPair> equi_pairs;  // HashJoin (empty = cross product in the canonical tree)
  AggregateKind aggregate = AggregateKind::CountStar;
  std::vector<OutputColumn> schema;

  static RaNode scan(const std::vector<Relation>& relations, std::size_t relation);
  static RaNode select(RaNode child, Predicate predicate);
  static RaNode project(RaNode child, std::vector<ColumnId> columns);
  static RaNode hash_join(RaNode left, RaNode right, std::vector<EquiPair> pairs);
  static RaNode count_star(RaNode child);

  const RaNode& child() const { return children.front(); }
};

/// Analyzed query: relations in FROM order plus the canonical RA tree
/// (left-deep joins in FROM order, WHERE as one Select, Project/Aggregate on top).
struct BoundQuery {
  std::vector<Relation> relations;
  RaNode root;
};

/// Checks the tree bottom-up: every column referenced by a node exists in
/// its input schema. Throws UnknownColumn otherwise.
void check_schema(const RaNode& node);

BoundQuery analyze(const ast::Query& query, const Catalog& catalog);

/// Convenience: parse_sql + analyze.
BoundQuery analyze_sql(std::string_view sql, const Catalog& catalog);

struct JoinEdge {
  ColumnId left;
  ColumnId right;

  friend bool operator==(const JoinEdge&, const JoinEdge&) = default;
};

struct JoinGraph {
  std::vector<Relation> relations;
  std::vector<JoinEdge> edges;
  std::vector<Predicate> residuals;  // per relation; True when none
  bool count_star = false;
  std::vector<OutputColumn> output;  // projected columns when !count_star

  /// Edges touching relation `r`.
  std::vector<const JoinEdge*> edges_of(std::size_t r) const;
  std::size_t index_of(std::string_view alias) const;
};

/// Classifies every WHERE conjunct as a join edge or a single-relation
/// residual. Throws UnsupportedPredicate for anything else.
JoinGraph build_join_graph(const BoundQuery& query);

/// Renders predicates and columns with `alias.column` names.
PredicateRenderer renderer_for(const std::vector<Relation>& relations);

}  // namespace escdb
