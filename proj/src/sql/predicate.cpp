#include "escdb/sql/predicate.hpp"

#include <fmt/format.h>

namespace escdb {

std::string_view compare_op_symbol(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "<>";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

CompareOp negate(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return CompareOp::Ne;
    case CompareOp::Ne: return CompareOp::Eq;
    case CompareOp::Lt: return CompareOp::Ge;
    case CompareOp::Le: return CompareOp::Gt;
    case CompareOp::Gt: return CompareOp::Le;
    case CompareOp::Ge: return CompareOp::Lt;
  }
  return op;
}

CompareOp mirror(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return CompareOp::Gt;
    case CompareOp::Le: return CompareOp::Ge;
    case CompareOp::Gt: return CompareOp::Lt;
    case CompareOp::Ge: return CompareOp::Le;
    default: return op;
  }
}

Predicate Predicate::always_false() {
  Predicate p;
  p.kind = Kind::False;
  return p;
}

Predicate Predicate::conjunction(std::vector<Predicate> children) {
  Predicate p;
  p.kind = Kind::And;
  p.children = std::move(children);
  return p;
}

Predicate Predicate::disjunction(std::vector<Predicate> children) {
  Predicate p;
  p.kind = Kind::Or;
  p.children = std::move(children);
  return p;
}

Predicate Predicate::negation(Predicate child) {
  Predicate p;
  p.kind = Kind::Not;
  p.children.push_back(std::move(child));
  return p;
}

Predicate Predicate::compare(ColumnId column, CompareOp op, std::int64_t value) {
  Predicate p;
  p.kind = Kind::Compare;
  p.column = column;
  p.op = op;
  p.value = value;
  return p;
}

Predicate Predicate::text_equals(ColumnId column, CompareOp op, std::int64_t code, std::string text) {
  Predicate p = compare(column, op, code);
  p.text = std::move(text);
  return p;
}

Predicate Predicate::between(ColumnId column, std::int64_t low, std::int64_t high) {
  Predicate p;
  p.kind = Kind::Between;
  p.column = column;
  p.value = low;
  p.high = high;
  return p;
}

Predicate Predicate::text_compare(ColumnId column, CompareOp op, std::string text) {
  Predicate p;
  p.kind = Kind::TextCompare;
  p.column = column;
  p.op = op;
  p.text = std::move(text);
  return p;
}

Predicate Predicate::call(std::string function, std::vector<ColumnId> args, CompareOp op, double threshold) {
  Predicate p;
  p.kind = Kind::Function;
  p.function = std::move(function);
  p.args = std::move(args);
  p.op = op;
  p.threshold = threshold;
  return p;
}

Predicate Predicate::column_compare(ColumnId lhs, CompareOp op, ColumnId rhs) {
  Predicate p;
  p.kind = Kind::ColumnCompare;
  p.column = lhs;
  p.op = op;
  p.other = rhs;
  return p;
}

bool Predicate::is_atom() const {
  switch (kind) {
    case Kind::Compare:
    case Kind::Between:
    case Kind::TextCompare:
    case Kind::Function:
    case Kind::ColumnCompare: return true;
    default: return false;
  }
}

Predicate fold_constants(Predicate p) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::And:
    case K::Or: {
      const bool is_and = p.kind == K::And;
      std::vector<Predicate> kept;
      for (auto& child : p.children) {
        auto folded = fold_constants(std::move(child));
        if (folded.kind == (is_and ? K::False : K::True)) return folded;
        if (folded.kind == (is_and ? K::True : K::False)) continue;
        if (folded.kind == p.kind) {
          for (auto& grandchild : folded.children) kept.push_back(std::move(grandchild));
        } else {
          kept.push_back(std::move(folded));
        }
      }
      if (kept.empty()) return is_and ? Predicate::always_true() : Predicate::always_false();
      if (kept.size() == 1) return std::move(kept.front());
      p.children = std::move(kept);
      return p;
    }
    case K::Not: {
      auto child = fold_constants(std::move(p.children.front()));
      if (child.kind == K::True) return Predicate::always_false();
      if (child.kind == K::False) return Predicate::always_true();
      if (child.kind == K::Not) return std::move(child.children.front());
      p.children.front() = std::move(child);
      return p;
    }
    case K::Between:
      if (p.value > p.high) return Predicate::always_false();
      return p;
    default: return p;
  }
}

namespace {

Predicate nnf(const Predicate& p, bool negated) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::True: return negated ? Predicate::always_false() : p;
    case K::False: return negated ? Predicate::always_true() : p;
    case K::Not: return nnf(p.children.front(), !negated);
    case K::And:
    case K::Or: {
      std::vector<Predicate> children;
      children.reserve(p.children.size());
      for (const auto& c : p.children) children.push_back(nnf(c, negated));
      const bool conj = (p.kind == K::And) != negated;
      return conj ? Predicate::conjunction(std::move(children)) : Predicate::disjunction(std::move(children));
    }
    case K::Between: {
      if (!negated) return p;
      return Predicate::disjunction({Predicate::compare(p.column, CompareOp::Lt, p.value),
                                     Predicate::compare(p.column, CompareOp::Gt, p.high)});
    }
    default: {
      Predicate out = p;
      if (negated) out.op = negate(out.op);
      return out;
    }
  }
}

void collect_atoms(const Predicate& p, const std::function<void(const Predicate&)>& visit) {
  if (p.is_atom()) {
    visit(p);
    return;
  }
  for (const auto& c : p.children) collect_atoms(c, visit);
}

std::string format_constant(std::int64_t value, const ColumnType& type) {
  switch (type.id) {
    case TypeId::Int64: return std::to_string(value);
    case TypeId::Decimal: return format_decimal(value, type.scale);
    case TypeId::Date: return fmt::format("DATE '{}'", format_date(static_cast<std::int32_t>(value)));
    case TypeId::Text: return std::to_string(value);
  }
  return {};
}

std::string quote(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

}  // namespace

Predicate to_negation_normal_form(const Predicate& predicate) { return fold_constants(nnf(predicate, false)); }

std::vector<Predicate> conjuncts(const Predicate& predicate) {
  if (predicate.kind == Predicate::Kind::And) return predicate.children;
  if (predicate.kind == Predicate::Kind::True) return {};
  return {predicate};
}

std::size_t count_atoms(const Predicate& predicate) {
  std::size_t n = 0;
  collect_atoms(predicate, [&](const Predicate&) { ++n; });
  return n;
}

std::set<std::size_t> referenced_relations(const Predicate& predicate) {
  std::set<std::size_t> out;
  for (const auto& c : referenced_columns(predicate)) out.insert(c.relation);
  return out;
}

std::set<ColumnId> referenced_columns(const Predicate& predicate) {
  std::set<ColumnId> out;
  collect_atoms(predicate, [&](const Predicate& atom) {
    if (atom.kind == Predicate::Kind::Function) {
      out.insert(atom.args.begin(), atom.args.end());
    } else {
      out.insert(atom.column);
      if (atom.kind == Predicate::Kind::ColumnCompare) out.insert(atom.other);
    }
  });
  return out;
}

Predicate remap_columns(const Predicate& predicate, const std::function<ColumnId(ColumnId)>& map) {
  Predicate out = predicate;
  if (out.is_atom()) {
    out.column = map(out.column);
    if (out.kind == Predicate::Kind::ColumnCompare) out.other = map(out.other);
    for (auto& a : out.args) a = map(a);
  }
  for (auto& c : out.children) c = remap_columns(c, map);
  return out;
}

std::string render(const Predicate& p, const PredicateRenderer& r) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::True: return "TRUE";
    case K::False: return "FALSE";
    case K::And:
    case K::Or: {
      const auto* sep = p.kind == K::And ? " AND " : " OR ";
      std::string out;
      for (std::size_t i = 0; i < p.children.size(); ++i) {
        if (i > 0) out += sep;
        const auto& c = p.children[i];
        const bool wrap = c.kind == K::And || c.kind == K::Or;
        out += wrap ? "(" + render(c, r) + ")" : render(c, r);
      }
      return out;
    }
    case K::Not: return "NOT (" + render(p.children.front(), r) + ")";
    case K::Compare: {
      const auto type = r.column_type(p.column);
      const auto constant = type.id == TypeId::Text ? quote(p.text) : format_constant(p.value, type);
      return fmt::format("{} {} {}", r.column_name(p.column), compare_op_symbol(p.op), constant);
    }
    case K::Between: {
      const auto type = r.column_type(p.column);
      return fmt::format("{} BETWEEN {} AND {}", r.column_name(p.column), format_constant(p.value, type),
                         format_constant(p.high, type));
    }
    case K::TextCompare:
      return fmt::format("{} {} {}", r.column_name(p.column), compare_op_symbol(p.op), quote(p.text));
    case K::Function: {
      std::string args;
      for (std::size_t i = 0; i < p.args.size(); ++i) {
        if (i > 0) args += ", ";
        args += r.column_name(p.args[i]);
      }
      return fmt::format("{}({}) {} {}", p.function, args, compare_op_symbol(p.op), p.threshold);
    }
    case K::ColumnCompare:
      return fmt::format("{} {} {}", r.column_name(p.column), compare_op_symbol(p.op), r.column_name(p.other));
  }
  return {};
}

}  // namespace escdb
