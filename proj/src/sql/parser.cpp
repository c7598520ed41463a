#include "escdb/sql/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <fmt/format.h>

#include "escdb/error.hpp"

namespace escdb {

namespace {

using ast::SourceSpan;

struct Token {
  enum class Kind { Identifier, Number, String, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  SourceSpan span;
};

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
  return out;
}

constexpr std::array kReserved = {
    "SELECT", "FROM", "WHERE",  "AND",   "OR",    "NOT",   "BETWEEN", "AS",       "GROUP", "ORDER", "BY",
    "HAVING", "LIMIT", "UNION", "JOIN",  "INNER", "LEFT",  "RIGHT",   "FULL",     "OUTER", "CROSS", "ON",
    "IN",     "LIKE",  "IS",    "NULL",  "DISTINCT", "DATE", "EXISTS", "OFFSET", "USING", "NATURAL", "CASE",
};

bool is_reserved(std::string_view word) {
  const auto u = upper(word);
  return std::find(kReserved.begin(), kReserved.end(), u) != kReserved.end();
}

class Lexer {
 public:
  explicit Lexer(std::string_view input) : input_(input) {}

  std::vector<Token> tokenize() {
    std::vector<Token> tokens;
    while (true) {
      skip_space();
      Token t;
      t.span = {line_, column_};
      if (pos_ >= input_.size()) {
        tokens.push_back(t);
        return tokens;
      }
      const char c = input_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Kind::Identifier;
        while (pos_ < input_.size() &&
               (std::isalnum(static_cast<unsigned char>(input_[pos_])) || input_[pos_] == '_')) {
          t.text.push_back(advance());
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < input_.size() && std::isdigit(static_cast<unsigned char>(input_[pos_ + 1])))) {
        t.kind = Token::Kind::Number;
        bool seen_dot = false;
        while (pos_ < input_.size()) {
          const char d = input_[pos_];
          if (std::isdigit(static_cast<unsigned char>(d))) {
            t.text.push_back(advance());
          } else if (d == '.' && !seen_dot) {
            seen_dot = true;
            t.text.push_back(advance());
          } else {
            break;
          }
        }
      } else if (c == '\'') {
        t.kind = Token::Kind::String;
        advance();
        while (true) {
          if (pos_ >= input_.size()) {
            throw Error(ErrorCode::SyntaxError,
                        fmt::format("line {}, column {}: unterminated string literal", t.span.line, t.span.column));
          }
          const char d = advance();
          if (d == '\'') {
            if (pos_ < input_.size() && input_[pos_] == '\'') {
              advance();
              t.text.push_back('\'');
            } else {
              break;
            }
          } else {
            t.text.push_back(d);
          }
        }
      } else {
        t.kind = Token::Kind::Symbol;
        const auto two = input_.substr(pos_, 2);
        if (two == "<=" || two == ">=" || two == "<>" || two == "!=") {
          t.text = std::string(two);
          advance();
          advance();
        } else if (std::string_view("(),.*=<>;+-/%").find(c) != std::string_view::npos) {
          t.text = std::string(1, advance());
        } else {
          throw Error(ErrorCode::SyntaxError,
                      fmt::format("line {}, column {}: unexpected character '{}'", line_, column_, c));
        }
      }
      tokens.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    const char c = input_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < input_.size()) {
      if (std::isspace(static_cast<unsigned char>(input_[pos_]))) {
        advance();
      } else if (input_.substr(pos_, 2) == "--") {
        while (pos_ < input_.size() && input_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view input_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ast::Query parse_query() {
    ast::Query q;
    expect_keyword("SELECT");
    if (is_keyword("DISTINCT")) unsupported("DISTINCT");
    parse_select_list(q);
    expect_keyword("FROM");
    parse_from(q);
    if (accept_keyword("WHERE")) q.where = parse_or();
    accept_symbol(";");
    if (peek().kind != Token::Kind::End) reject_trailing();
    return q;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool is_keyword(std::string_view kw, std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return t.kind == Token::Kind::Identifier && upper(t.text) == kw;
  }
  bool is_symbol(std::string_view s, std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return t.kind == Token::Kind::Symbol && t.text == s;
  }
  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(kw)) return false;
    next();
    return true;
  }
  bool accept_symbol(std::string_view s) {
    if (!is_symbol(s)) return false;
    next();
    return true;
  }

  [[noreturn]] void syntax_error(std::string_view expected) const {
    const auto& t = peek();
    const auto found = t.kind == Token::Kind::End ? std::string("end of input") : fmt::format("'{}'", t.text);
    throw Error(ErrorCode::SyntaxError,
                fmt::format("line {}, column {}: expected {}, found {}", t.span.line, t.span.column, expected, found));
  }

  [[noreturn]] void unsupported(std::string_view construct) const {
    const auto& t = peek();
    throw Error(ErrorCode::UnsupportedConstruct,
                fmt::format("{} (line {}, column {})", construct, t.span.line, t.span.column));
  }

  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) syntax_error(kw);
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) syntax_error(fmt::format("'{}'", s));
  }

  void check_unsupported_keywords() const {
    if (is_keyword("GROUP")) unsupported("GROUP BY");
    if (is_keyword("ORDER")) unsupported("ORDER BY");
    if (is_keyword("HAVING")) unsupported("HAVING");
    if (is_keyword("LIMIT") || is_keyword("OFFSET")) unsupported("LIMIT");
    if (is_keyword("UNION")) unsupported("UNION");
    for (auto kw : {"JOIN", "INNER", "LEFT", "RIGHT", "FULL", "OUTER", "CROSS", "NATURAL", "ON", "USING"}) {
      if (is_keyword(kw)) unsupported("JOIN");
    }
  }

  void reject_trailing() const {
    check_unsupported_keywords();
    syntax_error("end of statement");
  }

  std::string expect_identifier(std::string_view what) {
    const auto& t = peek();
    if (t.kind != Token::Kind::Identifier || is_reserved(t.text)) syntax_error(what);
    return next().text;
  }

  ast::ColumnRef parse_column_ref() {
    ast::ColumnRef ref;
    ref.span = peek().span;
    auto first = expect_identifier("column name");
    if (accept_symbol(".")) {
      ref.qualifier = std::move(first);
      ref.name = expect_identifier("column name");
    } else {
      ref.name = std::move(first);
    }
    return ref;
  }

  void parse_select_list(ast::Query& q) {
    if (accept_symbol("*")) {
      q.select_all = true;
      if (is_symbol(",")) unsupported("mixing * with other select items");
      return;
    }
    if (is_keyword("COUNT") && is_symbol("(", 1)) {
      next();
      next();
      if (!accept_symbol("*")) unsupported("COUNT over a column");
      expect_symbol(")");
      q.count_star = true;
      if (is_symbol(",")) unsupported("mixing COUNT(*) with other select items");
      return;
    }
    do {
      if (peek().kind == Token::Kind::Identifier && is_symbol("(", 1)) {
        const auto name = upper(peek().text);
        if (name == "SUM" || name == "AVG" || name == "MIN" || name == "MAX") unsupported(fmt::format("aggregate {}", name));
        unsupported("function call in select list");
      }
      q.projections.push_back(parse_column_ref());
      if (is_symbol("+") || is_symbol("-") || is_symbol("*") || is_symbol("/")) unsupported("arithmetic expression");
    } while (accept_symbol(","));
  }

  void parse_from(ast::Query& q) {
    do {
      if (is_symbol("(")) unsupported("subquery");
      ast::TableRef ref;
      ref.span = peek().span;
      ref.name = expect_identifier("table name");
      if (accept_keyword("AS")) {
        ref.alias = expect_identifier("alias");
      } else if (peek().kind == Token::Kind::Identifier && !is_reserved(peek().text)) {
        ref.alias = next().text;
      }
      q.tables.push_back(std::move(ref));
      check_unsupported_keywords();
    } while (accept_symbol(","));
  }

  ast::Expr parse_or() {
    const auto span = peek().span;
    std::vector<ast::Expr> items;
    items.push_back(parse_and());
    while (accept_keyword("OR")) items.push_back(parse_and());
    if (items.size() == 1) return std::move(items.front());
    ast::Expr e;
    e.kind = ast::Expr::Kind::Or;
    e.children = std::move(items);
    e.span = span;
    return e;
  }

  ast::Expr parse_and() {
    const auto span = peek().span;
    std::vector<ast::Expr> items;
    items.push_back(parse_not());
    while (accept_keyword("AND")) items.push_back(parse_not());
    if (items.size() == 1) return std::move(items.front());
    ast::Expr e;
    e.kind = ast::Expr::Kind::And;
    e.children = std::move(items);
    e.span = span;
    return e;
  }

  ast::Expr parse_not() {
    const auto span = peek().span;
    if (accept_keyword("NOT")) {
      ast::Expr e;
      e.kind = ast::Expr::Kind::Not;
      e.children.push_back(parse_not());
      e.span = span;
      return e;
    }
    if (is_keyword("EXISTS")) unsupported("subquery");
    if (is_symbol("(")) {
      if (is_keyword("SELECT", 1)) unsupported("subquery");
      next();
      auto inner = parse_or();
      expect_symbol(")");
      return inner;
    }
    return parse_comparison();
  }

  ast::Literal parse_literal() {
    ast::Literal lit;
    lit.span = peek().span;
    if (accept_keyword("DATE")) {
      if (peek().kind != Token::Kind::String) syntax_error("date string");
      lit.kind = ast::Literal::Kind::Date;
      lit.text = next().text;
      try {
        parse_date(lit.text);
      } catch (const Error&) {
        throw Error(ErrorCode::SyntaxError, fmt::format("line {}, column {}: invalid date literal '{}'", lit.span.line,
                                                        lit.span.column, lit.text));
      }
      return lit;
    }
    if (peek().kind == Token::Kind::String) {
      lit.kind = ast::Literal::Kind::String;
      lit.text = next().text;
      return lit;
    }
    const bool negative = accept_symbol("-");
    if (peek().kind != Token::Kind::Number) syntax_error("literal");
    auto digits = next().text;
    if (digits.front() == '.') digits.insert(digits.begin(), '0');
    if (digits.back() == '.') digits.pop_back();
    lit.kind = digits.find('.') == std::string::npos ? ast::Literal::Kind::Integer : ast::Literal::Kind::Decimal;
    lit.text = negative ? "-" + digits : digits;
    return lit;
  }

  bool at_literal() const {
    const auto& t = peek();
    return t.kind == Token::Kind::Number || t.kind == Token::Kind::String || is_symbol("-") || is_keyword("DATE");
  }

  ast::Operand parse_operand() {
    ast::Operand op;
    op.span = peek().span;
    if (is_symbol("(")) {
      if (is_keyword("SELECT", 1)) unsupported("subquery");
      syntax_error("operand");
    }
    if (is_keyword("NULL")) unsupported("NULL literal");
    if (is_keyword("CASE")) unsupported("CASE expression");
    if (at_literal()) {
      op.kind = ast::Operand::Kind::Literal;
      op.literal = parse_literal();
      return op;
    }
    if (peek().kind == Token::Kind::Identifier && is_symbol("(", 1)) {
      op.kind = ast::Operand::Kind::Call;
      op.function = next().text;
      next();
      if (!is_symbol(")")) {
        do {
          if (at_literal()) unsupported("non-column function argument");
          op.args.push_back(parse_column_ref());
        } while (accept_symbol(","));
      }
      expect_symbol(")");
      return op;
    }
    op.kind = ast::Operand::Kind::Column;
    op.column = parse_column_ref();
    return op;
  }

  std::optional<CompareOp> accept_compare_op() {
    static const std::pair<std::string_view, CompareOp> ops[] = {
        {"=", CompareOp::Eq}, {"<>", CompareOp::Ne}, {"!=", CompareOp::Ne}, {"<", CompareOp::Lt},
        {"<=", CompareOp::Le}, {">", CompareOp::Gt}, {">=", CompareOp::Ge},
    };
    for (const auto& [sym, op] : ops) {
      if (accept_symbol(sym)) return op;
    }
    return std::nullopt;
  }

  ast::Expr parse_comparison() {
    ast::Expr e;
    e.span = peek().span;
    e.lhs = parse_operand();
    if (accept_keyword("BETWEEN")) {
      e.kind = ast::Expr::Kind::Between;
      if (accept_symbol("(")) {
        e.low = parse_literal();
        expect_symbol(",");
        e.high = parse_literal();
        expect_symbol(")");
      } else {
        e.low = parse_literal();
        expect_keyword("AND");
        e.high = parse_literal();
      }
      return e;
    }
    if (is_keyword("IN")) unsupported("IN list");
    if (is_keyword("LIKE")) unsupported("LIKE");
    if (is_keyword("IS")) unsupported("IS NULL");
    if (is_keyword("NOT") && (is_keyword("IN", 1) || is_keyword("LIKE", 1) || is_keyword("BETWEEN", 1))) {
      unsupported(fmt::format("NOT {}", upper(peek(1).text)));
    }
    if (is_symbol("+") || is_symbol("-") || is_symbol("*") || is_symbol("/") || is_symbol("%")) {
      unsupported("arithmetic expression");
    }
    const auto op = accept_compare_op();
    if (!op) syntax_error("comparison operator");
    e.kind = ast::Expr::Kind::Compare;
    e.op = *op;
    e.rhs = parse_operand();
    if (is_symbol("+") || is_symbol("-") || is_symbol("*") || is_symbol("/") || is_symbol("%")) {
      unsupported("arithmetic expression");
    }
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string quote(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string to_sql(const ast::Literal& lit) {
  switch (lit.kind) {
    case ast::Literal::Kind::Integer:
    case ast::Literal::Kind::Decimal: return lit.text;
    case ast::Literal::Kind::String: return quote(lit.text);
    case ast::Literal::Kind::Date: return "DATE " + quote(lit.text);
  }
  return {};
}

std::string to_sql(const ast::Operand& op) {
  switch (op.kind) {
    case ast::Operand::Kind::Column: return op.column.to_string();
    case ast::Operand::Kind::Literal: return to_sql(op.literal);
    case ast::Operand::Kind::Call: {
      std::string out = op.function + "(";
      for (std::size_t i = 0; i < op.args.size(); ++i) {
        if (i > 0) out += ", ";
        out += op.args[i].to_string();
      }
      return out + ")";
    }
  }
  return {};
}

}  // namespace

ast::Query parse_sql(std::string_view sql) { return Parser(Lexer(sql).tokenize()).parse_query(); }

std::string to_sql(const ast::Expr& e) {
  using K = ast::Expr::Kind;
  switch (e.kind) {
    case K::And:
    case K::Or: {
      std::string out;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i > 0) out += e.kind == K::And ? " AND " : " OR ";
        const auto& c = e.children[i];
        const bool wrap = c.kind == K::And || c.kind == K::Or;
        out += wrap ? "(" + to_sql(c) + ")" : to_sql(c);
      }
      return out;
    }
    case K::Not: {
      const auto& c = e.children.front();
      const bool wrap = c.kind == K::And || c.kind == K::Or;
      return "NOT " + (wrap ? "(" + to_sql(c) + ")" : to_sql(c));
    }
    case K::Compare: return fmt::format("{} {} {}", to_sql(e.lhs), compare_op_symbol(e.op), to_sql(e.rhs));
    case K::Between: return fmt::format("{} BETWEEN {} AND {}", to_sql(e.lhs), to_sql(e.low), to_sql(e.high));
  }
  return {};
}

std::string to_sql(const ast::Query& q) {
  std::string out = "SELECT ";
  if (q.count_star) {
    out += "COUNT(*)";
  } else if (q.select_all) {
    out += "*";
  } else {
    for (std::size_t i = 0; i < q.projections.size(); ++i) {
      if (i > 0) out += ", ";
      out += q.projections[i].to_string();
    }
  }
  out += " FROM ";
  for (std::size_t i = 0; i < q.tables.size(); ++i) {
    if (i > 0) out += ", ";
    out += q.tables[i].name;
    if (!q.tables[i].alias.empty()) out += " AS " + q.tables[i].alias;
  }
  if (q.where) out += " WHERE " + to_sql(*q.where);
  return out;
}

}  // namespace escdb
