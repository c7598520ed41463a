#include <algorithm>
#include <cstdlib>
#include <limits>

#include <fmt/format.h>

#include "escdb/catalog/catalog.hpp"
#include "escdb/error.hpp"
#include "escdb/sql/parser.hpp"
#include "escdb/sql/relational.hpp"

namespace escdb {

RaNode RaNode::scan(const std::vector<Relation>& relations, std::size_t relation) {
  RaNode n;
  n.kind = Kind::Scan;
  n.relation = relation;
  const auto& rel = relations.at(relation);
  for (std::size_t c = 0; c < rel.source->column_count(); ++c) {
    const auto& col = rel.source->column(c);
    n.schema.push_back({{relation, c}, rel.alias + "." + col.name(), col.type()});
  }
  return n;
}

RaNode RaNode::select(RaNode child, Predicate predicate) {
  RaNode n;
  n.kind = Kind::Select;
  n.schema = child.schema;
  n.predicate = std::move(predicate);
  n.children.push_back(std::move(child));
  return n;
}

RaNode RaNode::project(RaNode child, std::vector<ColumnId> columns) {
  RaNode n;
  n.kind = Kind::Project;
  for (const auto& id : columns) {
    auto it = std::find_if(child.schema.begin(), child.schema.end(), [&](const OutputColumn& c) { return c.id == id; });
    if (it == child.schema.end()) {
      throw Error(ErrorCode::UnknownColumn, fmt::format("projection column {}.{} not produced by input", id.relation, id.column));
    }
    n.schema.push_back(*it);
  }
  n.columns = std::move(columns);
  n.children.push_back(std::move(child));
  return n;
}

RaNode RaNode::hash_join(RaNode left, RaNode right, std::vector<EquiPair> pairs) {
  RaNode n;
  n.kind = Kind::HashJoin;
  n.schema = left.schema;
  n.schema.insert(n.schema.end(), right.schema.begin(), right.schema.end());
  n.equi_pairs = std::move(pairs);
  n.children.push_back(std::move(left));
  n.children.push_back(std::move(right));
  return n;
}

RaNode RaNode::count_star(RaNode child) {
  RaNode n;
  n.kind = Kind::Aggregate;
  n.aggregate = AggregateKind::CountStar;
  n.schema.push_back({{std::numeric_limits<std::size_t>::max(), 0}, "count", ColumnType::int64()});
  n.children.push_back(std::move(child));
  return n;
}

namespace {

bool schema_has(const std::vector<OutputColumn>& schema, ColumnId id) {
  return std::any_of(schema.begin(), schema.end(), [&](const OutputColumn& c) { return c.id == id; });
}

void require(const std::vector<OutputColumn>& schema, ColumnId id, std::string_view node) {
  if (!schema_has(schema, id)) {
    throw Error(ErrorCode::UnknownColumn,
                fmt::format("{} references column {}.{} missing from its input", node, id.relation, id.column));
  }
}

}  // namespace

void check_schema(const RaNode& node) {
  for (const auto& child : node.children) check_schema(child);
  switch (node.kind) {
    case RaNode::Kind::Scan: break;
    case RaNode::Kind::Select:
      for (const auto& id : referenced_columns(node.predicate)) require(node.child().schema, id, "Select");
      break;
    case RaNode::Kind::Project:
      for (const auto& id : node.columns) require(node.child().schema, id, "Project");
      break;
    case RaNode::Kind::HashJoin:
      for (const auto& p : node.equi_pairs) {
        require(node.children[0].schema, p.left, "HashJoin");
        require(node.children[1].schema, p.right, "HashJoin");
      }
      break;
    case RaNode::Kind::Aggregate: break;
  }
}

namespace {

constexpr auto kInt64Min = std::numeric_limits<std::int64_t>::min();

struct Rational {
  std::int64_t numerator = 0;
  int scale = 0;  // value = numerator / 10^scale
};

Rational parse_rational(const ast::Literal& lit) {
  const auto dot = lit.text.find('.');
  if (dot == std::string::npos) return {std::stoll(lit.text), 0};
  const int scale = static_cast<int>(lit.text.size() - dot - 1);
  if (scale > 18) throw Error(ErrorCode::TypeMismatch, fmt::format("literal '{}' has too many digits", lit.text));
  return {parse_decimal(lit.text, scale), scale};
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const auto q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

// Scaled integer value of the literal at `scale`, and whether it is exact.
std::pair<std::int64_t, bool> rescale(const Rational& r, int scale) {
  if (r.scale <= scale) return {r.numerator * pow10(scale - r.scale), true};
  const auto divisor = pow10(r.scale - scale);
  const auto q = floor_div(r.numerator, divisor);
  return {q, q * divisor == r.numerator};
}

class Binder {
 public:
  Binder(const Catalog& catalog, std::vector<Relation>& relations) : catalog_(catalog), relations_(relations) {}

  ColumnId resolve(const ast::ColumnRef& ref) const {
    if (!ref.qualifier.empty()) {
      for (std::size_t r = 0; r < relations_.size(); ++r) {
        if (relations_[r].alias != ref.qualifier) continue;
        if (auto c = relations_[r].source->find_column(ref.name)) return {r, *c};
        throw Error(ErrorCode::UnknownColumn, fmt::format("{} (line {}, column {})", ref.to_string(), ref.span.line,
                                                          ref.span.column));
      }
      throw Error(ErrorCode::UnknownTable, fmt::format("'{}' is not in the FROM list (line {}, column {})",
                                                       ref.qualifier, ref.span.line, ref.span.column));
    }
    std::optional<ColumnId> found;
    for (std::size_t r = 0; r < relations_.size(); ++r) {
      if (auto c = relations_[r].source->find_column(ref.name)) {
        if (found) {
          throw Error(ErrorCode::AmbiguousColumn, fmt::format("'{}' matches columns of '{}' and '{}'", ref.name,
                                                              relations_[found->relation].alias, relations_[r].alias));
        }
        found = ColumnId{r, *c};
      }
    }
    if (!found) {
      throw Error(ErrorCode::UnknownColumn,
                  fmt::format("{} (line {}, column {})", ref.name, ref.span.line, ref.span.column));
    }
    return *found;
  }

  const ColumnType& type_of(ColumnId id) const { return relations_[id.relation].source->column(id.column).type(); }
  const Column& column_of(ColumnId id) const { return relations_[id.relation].source->column(id.column); }

  Predicate bind(const ast::Expr& e) const {
    using K = ast::Expr::Kind;
    switch (e.kind) {
      case K::And:
      case K::Or: {
        std::vector<Predicate> children;
        for (const auto& c : e.children) children.push_back(bind(c));
        return e.kind == K::And ? Predicate::conjunction(std::move(children)) : Predicate::disjunction(std::move(children));
      }
      case K::Not: return Predicate::negation(bind(e.children.front()));
      case K::Compare: return bind_compare(e);
      case K::Between: return bind_between(e);
    }
    return {};
  }

 private:
  [[noreturn]] static void type_mismatch(const ast::Expr& e, std::string_view detail) {
    throw Error(ErrorCode::TypeMismatch,
                fmt::format("{} in '{}' (line {}, column {})", detail, to_sql(e), e.span.line, e.span.column));
  }

  Predicate bind_compare(const ast::Expr& e) const {
    using OK = ast::Operand::Kind;
    const auto& l = e.lhs;
    const auto& r = e.rhs;
    if (l.kind == OK::Column && r.kind == OK::Literal) return bind_column_literal(e, resolve(l.column), e.op, r.literal);
    if (l.kind == OK::Literal && r.kind == OK::Column) {
      return bind_column_literal(e, resolve(r.column), mirror(e.op), l.literal);
    }
    if (l.kind == OK::Call && r.kind == OK::Literal) return bind_call(e, l, e.op, r.literal);
    if (l.kind == OK::Literal && r.kind == OK::Call) return bind_call(e, r, mirror(e.op), l.literal);
    if (l.kind == OK::Column && r.kind == OK::Column) {
      const auto a = resolve(l.column);
      const auto b = resolve(r.column);
      if (type_of(a) != type_of(b)) {
        type_mismatch(e, fmt::format("cannot compare {} with {}", type_of(a).to_string(), type_of(b).to_string()));
      }
      if (a.relation == b.relation) {
        throw Error(ErrorCode::UnsupportedPredicate,
                    fmt::format("comparison of two columns of the same table: '{}'", to_sql(e)));
      }
      return Predicate::column_compare(a, e.op, b);
    }
    throw Error(ErrorCode::UnsupportedPredicate, fmt::format("unsupported comparison '{}'", to_sql(e)));
  }

  Predicate bind_column_literal(const ast::Expr& e, ColumnId column, CompareOp op, const ast::Literal& lit) const {
    const auto& type = type_of(column);
    using LK = ast::Literal::Kind;
    switch (type.id) {
      case TypeId::Text: {
        if (lit.kind != LK::String) type_mismatch(e, "TEXT column compared with a non-string literal");
        if (op == CompareOp::Eq || op == CompareOp::Ne) {
          const auto code = column_of(column).dictionary()->find(lit.text);
          return Predicate::text_equals(column, op, code.value_or(-1), lit.text);
        }
        return Predicate::text_compare(column, op, lit.text);
      }
      case TypeId::Date: return Predicate::compare(column, op, date_literal(e, lit));
      case TypeId::Int64:
      case TypeId::Decimal: {
        if (lit.kind != LK::Integer && lit.kind != LK::Decimal) type_mismatch(e, "numeric column compared with a non-numeric literal");
        const auto [scaled, exact] = rescale(parse_rational(lit), type.scale);
        if (exact) return Predicate::compare(column, op, scaled);
        // The constant lies strictly between `scaled` and `scaled + 1`. The
        // Eq/Ne forms stay column atoms so NULL rows keep failing under NOT.
        switch (op) {
          case CompareOp::Eq: return Predicate::compare(column, CompareOp::Lt, kInt64Min);
          case CompareOp::Ne: return Predicate::compare(column, CompareOp::Ge, kInt64Min);
          case CompareOp::Lt:
          case CompareOp::Le: return Predicate::compare(column, CompareOp::Le, scaled);
          case CompareOp::Gt:
          case CompareOp::Ge: return Predicate::compare(column, CompareOp::Gt, scaled);
        }
      }
    }
    return {};
  }

  std::int64_t date_literal(const ast::Expr& e, const ast::Literal& lit) const {
    if (lit.kind != ast::Literal::Kind::Date && lit.kind != ast::Literal::Kind::String) {
      type_mismatch(e, "DATE column compared with a non-date literal");
    }
    try {
      return parse_date(lit.text);
    } catch (const Error&) {
      type_mismatch(e, fmt::format("'{}' is not a date", lit.text));
    }
  }

  Predicate bind_between(const ast::Expr& e) const {
    using OK = ast::Operand::Kind;
    if (e.lhs.kind == OK::Call) {
      return Predicate::conjunction(
          {bind_call(e, e.lhs, CompareOp::Ge, e.low), bind_call(e, e.lhs, CompareOp::Le, e.high)});
    }
    if (e.lhs.kind != OK::Column) throw Error(ErrorCode::UnsupportedPredicate, fmt::format("unsupported BETWEEN '{}'", to_sql(e)));
    const auto column = resolve(e.lhs.column);
    const auto& type = type_of(column);
    switch (type.id) {
      case TypeId::Text:
        if (e.low.kind != ast::Literal::Kind::String || e.high.kind != ast::Literal::Kind::String) {
          type_mismatch(e, "TEXT column compared with a non-string literal");
        }
        return Predicate::conjunction({Predicate::text_compare(column, CompareOp::Ge, e.low.text),
                                       Predicate::text_compare(column, CompareOp::Le, e.high.text)});
      case TypeId::Date:
        return Predicate::between(column, date_literal(e, e.low), date_literal(e, e.high));
      case TypeId::Int64:
      case TypeId::Decimal: {
        for (const auto* lit : {&e.low, &e.high}) {
          if (lit->kind != ast::Literal::Kind::Integer && lit->kind != ast::Literal::Kind::Decimal) {
            type_mismatch(e, "numeric column compared with a non-numeric literal");
          }
        }
        auto [low, low_exact] = rescale(parse_rational(e.low), type.scale);
        const auto [high, high_exact] = rescale(parse_rational(e.high), type.scale);
        (void)high_exact;  // floor is already the right inclusive bound
        if (!low_exact) ++low;
        return Predicate::between(column, low, high);
      }
    }
    return {};
  }

  Predicate bind_call(const ast::Expr& e, const ast::Operand& call, CompareOp op, const ast::Literal& lit) const {
    const auto* udf = catalog_.udfs().find(call.function);
    if (udf == nullptr) throw Error(ErrorCode::UnknownFunction, fmt::format("'{}' is not registered", call.function));
    if (udf->arity != call.args.size()) {
      throw Error(ErrorCode::ArityMismatch,
                  fmt::format("'{}' takes {} arguments, {} given", call.function, udf->arity, call.args.size()));
    }
    std::vector<ColumnId> args;
    for (const auto& a : call.args) {
      const auto id = resolve(a);
      if (!type_of(id).is_numeric()) type_mismatch(e, fmt::format("argument '{}' of '{}' is TEXT", a.to_string(), call.function));
      args.push_back(id);
    }
    double threshold = 0;
    switch (lit.kind) {
      case ast::Literal::Kind::Integer:
      case ast::Literal::Kind::Decimal: threshold = std::strtod(lit.text.c_str(), nullptr); break;
      case ast::Literal::Kind::Date: threshold = parse_date(lit.text); break;
      case ast::Literal::Kind::String: type_mismatch(e, "function result compared with a string");
    }
    return Predicate::call(udf->name, std::move(args), op, threshold);
  }

  const Catalog& catalog_;
  std::vector<Relation>& relations_;
};

void flatten_and(const Predicate& p, std::vector<Predicate>& out) {
  if (p.kind == Predicate::Kind::And) {
    for (const auto& c : p.children) flatten_and(c, out);
  } else {
    out.push_back(p);
  }
}

}  // namespace

BoundQuery analyze(const ast::Query& query, const Catalog& catalog) {
  BoundQuery bound;
  for (const auto& t : query.tables) {
    const auto& alias = t.effective_name();
    for (const auto& r : bound.relations) {
      if (r.alias == alias) throw Error(ErrorCode::DuplicateTable, fmt::format("'{}' appears twice in FROM", alias));
    }
    bound.relations.push_back({alias, t.name, catalog.database().table_ptr(t.name)});
  }
  Binder binder(catalog, bound.relations);

  RaNode tree = RaNode::scan(bound.relations, 0);
  for (std::size_t r = 1; r < bound.relations.size(); ++r) {
    tree = RaNode::hash_join(std::move(tree), RaNode::scan(bound.relations, r), {});
  }

  if (query.where) {
    // Normalize and fold each top-level conjunct on its own so a FALSE
    // conjunct stays attributable to its relation and never swallows the join
    // conditions. NOT is pushed down first, so folding an empty BETWEEN to
    // FALSE cannot flip NULL rows.
    std::vector<Predicate> raw;
    flatten_and(binder.bind(*query.where), raw);
    std::vector<Predicate> folded;
    for (const auto& part : raw) {
      const auto columns = referenced_columns(part);
      std::vector<Predicate> pieces;
      flatten_and(to_negation_normal_form(part), pieces);
      for (auto& f : pieces) {
        if ((f.is_false() || f.is_true()) && !columns.empty()) f.column = *columns.begin();
        folded.push_back(std::move(f));
      }
    }
    tree = RaNode::select(std::move(tree),
                          folded.size() == 1 ? std::move(folded.front()) : Predicate::conjunction(std::move(folded)));
  }

  if (query.count_star) {
    tree = RaNode::count_star(std::move(tree));
  } else {
    std::vector<ColumnId> columns;
    if (query.select_all) {
      for (std::size_t r = 0; r < bound.relations.size(); ++r) {
        for (std::size_t c = 0; c < bound.relations[r].source->column_count(); ++c) columns.push_back({r, c});
      }
    } else {
      for (const auto& ref : query.projections) columns.push_back(binder.resolve(ref));
    }
    tree = RaNode::project(std::move(tree), std::move(columns));
  }
  check_schema(tree);
  bound.root = std::move(tree);
  return bound;
}

BoundQuery analyze_sql(std::string_view sql, const Catalog& catalog) { return analyze(parse_sql(sql), catalog); }

std::vector<const JoinEdge*> JoinGraph::edges_of(std::size_t r) const {
  std::vector<const JoinEdge*> out;
  for (const auto& e : edges) {
    if (e.left.relation == r || e.right.relation == r) out.push_back(&e);
  }
  return out;
}

std::size_t JoinGraph::index_of(std::string_view alias) const {
  for (std::size_t r = 0; r < relations.size(); ++r) {
    if (relations[r].alias == alias) return r;
  }
  throw Error(ErrorCode::UnknownTable, fmt::format("'{}' is not part of the join graph", alias));
}

JoinGraph build_join_graph(const BoundQuery& query) {
  JoinGraph graph;
  graph.relations = query.relations;
  graph.residuals.assign(query.relations.size(), Predicate::always_true());

  const RaNode* node = &query.root;
  if (node->kind == RaNode::Kind::Aggregate) {
    graph.count_star = true;
    node = &node->child();
  } else if (node->kind == RaNode::Kind::Project) {
    graph.output = node->schema;
    node = &node->child();
  }
  if (node->kind != RaNode::Kind::Select) return graph;

  const auto renderer = renderer_for(query.relations);
  std::vector<std::vector<Predicate>> per_relation(query.relations.size());
  for (const auto& conjunct : conjuncts(node->predicate)) {
    const auto relations = referenced_relations(conjunct);
    if (relations.empty()) {
      if (conjunct.is_true()) continue;
      // Folded constant; `column` remembers the relation it came from.
      per_relation[conjunct.column.relation].push_back(conjunct);
    } else if (relations.size() == 1) {
      per_relation[*relations.begin()].push_back(conjunct);
    } else if (conjunct.kind == Predicate::Kind::ColumnCompare && conjunct.op == CompareOp::Eq) {
      graph.edges.push_back({conjunct.column, conjunct.other});
    } else {
      throw Error(ErrorCode::UnsupportedPredicate,
                  fmt::format("'{}' spans several tables but is not an equi-join", render(conjunct, renderer)));
    }
  }
  for (std::size_t r = 0; r < per_relation.size(); ++r) {
    auto& parts = per_relation[r];
    if (parts.empty()) continue;
    graph.residuals[r] = parts.size() == 1 ? std::move(parts.front()) : Predicate::conjunction(std::move(parts));
  }
  return graph;
}

PredicateRenderer renderer_for(const std::vector<Relation>& relations) {
  return {
      [&relations](ColumnId id) {
        const auto& rel = relations.at(id.relation);
        return rel.alias + "." + rel.source->column(id.column).name();
      },
      [&relations](ColumnId id) { return relations.at(id.relation).source->column(id.column).type(); },
  };
}

}  // namespace escdb
