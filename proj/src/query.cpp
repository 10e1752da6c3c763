// Copyright 2026 The vqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vqe/query.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "vqe/errors.hpp"

namespace vqe {

namespace {

std::string format_parse_error(std::size_t line, std::size_t column, const std::string& message,
                               const std::vector<std::string>& expected) {
  std::string out = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
  if (!expected.empty()) {
    out += "; expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message,
                       std::vector<std::string> expected)
    : Error(format_parse_error(line, column, message, expected)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return "=";
    case CmpOp::kNe: return "!=";
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
    case CmpOp::kGt: return ">";
    case CmpOp::kGe: return ">=";
  }
  return "?";
}

std::string_view to_string(AggKind kind) {
  switch (kind) {
    case AggKind::kCount: return "COUNT";
    case AggKind::kCountDistinct: return "COUNT DISTINCT";
    case AggKind::kMin: return "MIN";
    case AggKind::kMax: return "MAX";
    case AggKind::kSum: return "SUM";
    case AggKind::kAvg: return "AVG";
  }
  return "?";
}

Expr Expr::variable(std::string name) {
  Expr e;
  e.kind = Kind::kVar;
  e.var = std::move(name);
  return e;
}

Expr Expr::constant_term(Term t) {
  Expr e;
  e.kind = Kind::kConst;
  e.constant = std::move(t);
  return e;
}

Expr Expr::compare(CmpOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::kCompare;
  e.op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::bound(std::string name) {
  Expr e;
  e.kind = Kind::kBound;
  e.var = std::move(name);
  return e;
}

Expr Expr::logical_and(Expr a, Expr b) {
  Expr e;
  e.kind = Kind::kAnd;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

Expr Expr::logical_or(Expr a, Expr b) {
  Expr e;
  e.kind = Kind::kOr;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

Expr Expr::logical_not(Expr a) {
  Expr e;
  e.kind = Kind::kNot;
  e.args.push_back(std::move(a));
  return e;
}

std::vector<std::string> Expr::vars() const {
  std::vector<std::string> out;
  auto add = [&out](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  if (kind == Kind::kVar || kind == Kind::kBound) add(var);
  for (const auto& a : args) {
    for (const auto& v : a.vars()) add(v);
  }
  return out;
}

bool UnionPattern::operator==(const UnionPattern& o) const { return branches == o.branches; }

bool Query::has_aggregates() const {
  return std::any_of(select.begin(), select.end(), [](const SelectItem& s) { return s.is_aggregate; });
}

namespace {

void collect_vars(const GroupPattern& g, std::vector<std::string>& out) {
  auto add = [&out](const QueryTerm& t) {
    if (t.is_var && t.var.rfind("_:", 0) != 0 && std::find(out.begin(), out.end(), t.var) == out.end()) {
      out.push_back(t.var);
    }
  };
  for (const auto& t : g.triples) {
    add(t.s);
    add(t.p);
    add(t.o);
  }
  for (const auto& u : g.unions) {
    for (const auto& b : u.branches) collect_vars(b, out);
  }
}

}  // namespace

std::vector<std::string> Query::result_vars() const {
  std::vector<std::string> out;
  if (select_all) {
    collect_vars(where, out);
    return out;
  }
  for (const auto& s : select) out.push_back(s.is_aggregate ? s.aggregate.alias : s.var);
  return out;
}

std::string abbreviate_iri(const std::string& iri) {
  static const std::pair<std::string_view, std::string_view> kKnown[] = {
      {"http://www.w3.org/1999/02/22-rdf-syntax-ns#", "rdf:"},
      {"http://www.w3.org/2000/01/rdf-schema#", "rdfs:"},
      {"http://www.w3.org/2001/XMLSchema#", "xsd:"},
      {kDefaultPrefix, ":"},
  };
  for (const auto& [ns, pfx] : kKnown) {
    if (iri.size() > ns.size() && iri.compare(0, ns.size(), ns) == 0) {
      std::string local = iri.substr(ns.size());
      bool simple = std::all_of(local.begin(), local.end(),
                                [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
      if (simple) return std::string(pfx) + local;
    }
  }
  return "<" + iri + ">";
}

std::string display_term(const Term& t) {
  if (t.kind == TermKind::kIri) return abbreviate_iri(t.lexical);
  if (t.kind == TermKind::kLiteral && t.datatype && *t.datatype == kXsdInteger) return t.lexical;
  return t.to_ntriples();
}

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kVar: return "?" + e.var;
    case Expr::Kind::kConst: return display_term(e.constant);
    case Expr::Kind::kCompare:
      return to_string(e.args[0]) + " " + std::string(to_string(e.op)) + " " + to_string(e.args[1]);
    case Expr::Kind::kBound: return "BOUND(?" + e.var + ")";
    case Expr::Kind::kAnd: return "(" + to_string(e.args[0]) + " && " + to_string(e.args[1]) + ")";
    case Expr::Kind::kOr: return "(" + to_string(e.args[0]) + " || " + to_string(e.args[1]) + ")";
    case Expr::Kind::kNot: return "!(" + to_string(e.args[0]) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok : std::uint8_t {
  kEnd,
  kIri,      // <...>, text = IRI
  kPname,    // prefix:local, text = whole
  kVar,      // ?x, text = name
  kBlank,    // _:x, text = label
  kString,   // "...", text = unescaped lexical
  kInteger,  // text = digits incl. sign
  kDecimal,
  kWord,     // keyword or function name, text as written
  kLangTag,  // @en, text = tag
  kPunct,    // text = symbol
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd: return "end of input";
    case Tok::kIri: return "<" + t.text + ">";
    case Tok::kVar: return "?" + t.text;
    case Tok::kBlank: return "_:" + t.text;
    case Tok::kString: return "string literal";
    case Tok::kLangTag: return "@" + t.text;
    default: return "'" + t.text + "'";
  }
}

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : s_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (i_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      lex_one(t);
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, col_, msg); }

  char peek(std::size_t k = 0) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i_ < s_.size(); ++k) {
      if (s_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++i_;
    }
  }

  void skip_space() {
    for (;;) {
      while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) advance();
      if (peek() == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
        continue;
      }
      return;
    }
  }

  std::string take_name() {
    std::string out;
    while (i_ < s_.size() && (is_name_char(s_[i_]) || (s_[i_] == '.' && is_name_char(peek(1))))) {
      out += s_[i_];
      advance();
    }
    return out;
  }

  // '<' starts an IRI when a '>' follows before any whitespace or quote.
  bool iri_ahead() const {
    for (std::size_t k = i_ + 1; k < s_.size(); ++k) {
      char c = s_[k];
      if (c == '>') return true;
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"' || c == '{' || c == '}') return false;
    }
    return false;
  }

  void lex_one(Token& t) {
    char c = peek();
    if (c == '<' && iri_ahead()) {
      advance();
      while (peek() != '>') {
        t.text += peek();
        advance();
      }
      advance();
      t.kind = Tok::kIri;
      return;
    }
    if (c == '?' || c == '$') {
      advance();
      t.kind = Tok::kVar;
      t.text = take_name();
      if (t.text.empty()) fail("empty variable name");
      return;
    }
    if (c == '_' && peek(1) == ':') {
      advance(2);
      t.kind = Tok::kBlank;
      t.text = take_name();
      if (t.text.empty()) fail("empty blank node label");
      return;
    }
    if (c == '"' || c == '\'') {
      lex_string(t, c);
      return;
    }
    if (c == '@') {
      advance();
      t.kind = Tok::kLangTag;
      t.text = take_name();
      if (t.text.empty()) fail("empty language tag");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '-' || c == '+') && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number(t);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == ':') {
      std::string word;
      while (i_ < s_.size() && is_name_char(s_[i_])) {
        word += s_[i_];
        advance();
      }
      if (peek() == ':') {
        advance();
        t.kind = Tok::kPname;
        t.text = word + ":" + take_name();
        return;
      }
      t.kind = Tok::kWord;
      t.text = word;
      return;
    }
    static constexpr std::string_view kTwo[] = {"!=", "<=", ">=", "&&", "||", "^^"};
    for (auto two : kTwo) {
      if (c == two[0] && peek(1) == two[1]) {
        advance(2);
        t.kind = Tok::kPunct;
        t.text = std::string(two);
        return;
      }
    }
    static constexpr std::string_view kOne = "{}().;,*=<>!/|^+";
    if (kOne.find(c) != std::string_view::npos) {
      advance();
      t.kind = Tok::kPunct;
      t.text = std::string(1, c);
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void lex_string(Token& t, char quote) {
    advance();
    t.kind = Tok::kString;
    for (;;) {
      if (i_ >= s_.size() || peek() == '\n') fail("unterminated string literal");
      char c = peek();
      if (c == quote) {
        advance();
        return;
      }
      if (c == '\\') {
        advance();
        char e = peek();
        switch (e) {
          case 'n': t.text += '\n'; break;
          case 't': t.text += '\t'; break;
          case 'r': t.text += '\r'; break;
          case '"': t.text += '"'; break;
          case '\'': t.text += '\''; break;
          case '\\': t.text += '\\'; break;
          default: fail(std::string("unknown escape \\") + e);
        }
        advance();
        continue;
      }
      t.text += c;
      advance();
    }
  }

  void lex_number(Token& t) {
    t.kind = Tok::kInteger;
    if (peek() == '-' || peek() == '+') {
      t.text += peek();
      advance();
    }
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      t.text += peek();
      advance();
    }
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      t.kind = Tok::kDecimal;
      t.text += '.';
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        t.text += peek();
        advance();
      }
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

const std::set<std::string>& unsupported_keywords() {
  static const std::set<std::string> kSet = {"OPTIONAL", "MINUS",  "SERVICE", "BIND",     "VALUES",
                                             "ORDER",    "GRAPH",  "EXISTS",  "HAVING",   "OFFSET",
                                             "ASK",      "CONSTRUCT", "DESCRIBE", "FROM", "REDUCED"};
  return kSet;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {
    q_.prefixes = {{"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
                   {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
                   {"xsd", "http://www.w3.org/2001/XMLSchema#"},
                   {"", std::string(kDefaultPrefix)}};
  }

  Query run() {
    while (is_word("PREFIX")) parse_prefix();
    check_unsupported();
    expect_word("SELECT");
    parse_select_clause();
    if (is_word("WHERE")) next();
    q_.where = parse_group();
    parse_modifiers();
    if (peek().kind != Tok::kEnd) {
      check_unsupported();
      fail("unexpected " + describe(peek()), {"GROUP BY", "LIMIT", "end of input"});
    }
    validate();
    return std::move(q_);
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) const {
    throw ParseError(peek().line, peek().column, msg, std::move(expected));
  }

  bool is_word(std::string_view w) const { return peek().kind == Tok::kWord && upper(peek().text) == w; }
  bool is_punct(std::string_view p) const { return peek().kind == Tok::kPunct && peek().text == p; }

  void expect_word(std::string_view w) {
    if (!is_word(w)) fail("unexpected " + describe(peek()), {std::string(w)});
    next();
  }
  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("unexpected " + describe(peek()), {"'" + std::string(p) + "'"});
    next();
  }

  void check_unsupported() const {
    if (peek().kind != Tok::kWord) return;
    std::string w = upper(peek().text);
    if (w == "NOT" && peek(1).kind == Tok::kWord && upper(peek(1).text) == "EXISTS") {
      throw UnsupportedFeature("NOT EXISTS");
    }
    if (unsupported_keywords().count(w) != 0) throw UnsupportedFeature(w);
  }

  void parse_prefix() {
    next();
    if (peek().kind != Tok::kPname) fail("unexpected " + describe(peek()), {"prefix name"});
    std::string name = next().text;
    if (name.back() != ':') fail("prefix declaration must end with ':'");
    name.pop_back();
    if (peek().kind != Tok::kIri) fail("unexpected " + describe(peek()), {"IRI"});
    q_.prefixes[name] = next().text;
  }

  std::string expand_pname(const Token& t) const {
    auto colon = t.text.find(':');
    std::string prefix = t.text.substr(0, colon);
    auto it = q_.prefixes.find(prefix);
    if (it == q_.prefixes.end()) throw ParseError(t.line, t.column, "undeclared prefix '" + prefix + ":'");
    return it->second + t.text.substr(colon + 1);
  }

  void parse_select_clause() {
    if (is_word("DISTINCT")) {
      next();
      q_.distinct = true;
    }
    check_unsupported();
    if (is_punct("*")) {
      next();
      q_.select_all = true;
      return;
    }
    while (peek().kind == Tok::kVar || is_punct("(")) {
      if (peek().kind == Tok::kVar) {
        SelectItem item;
        item.var = next().text;
        q_.select.push_back(std::move(item));
        continue;
      }
      next();
      SelectItem item;
      item.is_aggregate = true;
      item.aggregate = parse_aggregate();
      expect_word("AS");
      if (peek().kind != Tok::kVar) fail("unexpected " + describe(peek()), {"variable"});
      item.aggregate.alias = next().text;
      expect_punct(")");
      q_.select.push_back(std::move(item));
    }
    if (q_.select.empty()) fail("empty projection", {"'*'", "variable", "'('"});
  }

  AggregateExpr parse_aggregate() {
    if (peek().kind != Tok::kWord) fail("unexpected " + describe(peek()), {"COUNT", "MIN", "MAX", "SUM", "AVG"});
    std::string fn = upper(peek().text);
    AggregateExpr a;
    if (fn == "COUNT") {
      a.kind = AggKind::kCount;
    } else if (fn == "MIN") {
      a.kind = AggKind::kMin;
    } else if (fn == "MAX") {
      a.kind = AggKind::kMax;
    } else if (fn == "SUM") {
      a.kind = AggKind::kSum;
    } else if (fn == "AVG") {
      a.kind = AggKind::kAvg;
    } else if (fn == "SAMPLE" || fn == "GROUP_CONCAT") {
      throw UnsupportedFeature(fn);
    } else {
      fail("unexpected " + describe(peek()), {"COUNT", "MIN", "MAX", "SUM", "AVG"});
    }
    next();
    expect_punct("(");
    bool distinct = false;
    if (is_word("DISTINCT")) {
      next();
      distinct = true;
    }
    if (is_punct("*")) {
      if (a.kind != AggKind::kCount) fail("'*' is only allowed in COUNT", {"variable"});
      if (distinct) throw UnsupportedFeature("COUNT(DISTINCT *)");
      next();
    } else if (peek().kind == Tok::kVar) {
      a.arg = next().text;
    } else {
      fail("unexpected " + describe(peek()), {"variable", "'*'"});
    }
    if (distinct) {
      if (a.kind != AggKind::kCount) throw UnsupportedFeature("DISTINCT inside " + fn);
      a.kind = AggKind::kCountDistinct;
    }
    expect_punct(")");
    return a;
  }

  GroupPattern parse_group() {
    expect_punct("{");
    GroupPattern g;
    for (;;) {
      check_unsupported();
      if (is_punct("}")) {
        next();
        return g;
      }
      if (is_word("FILTER")) {
        next();
        g.filters.push_back(parse_filter());
        if (is_punct(".")) next();
        continue;
      }
      if (is_punct("{")) {
        UnionPattern u;
        u.branches.push_back(parse_group());
        while (is_word("UNION")) {
          next();
          u.branches.push_back(parse_group());
        }
        if (u.branches.size() == 1) {
          // A lone nested group is just a conjunction with the enclosing one.
          GroupPattern& inner = u.branches.front();
          g.triples.insert(g.triples.end(), inner.triples.begin(), inner.triples.end());
          g.filters.insert(g.filters.end(), inner.filters.begin(), inner.filters.end());
          g.unions.insert(g.unions.end(), inner.unions.begin(), inner.unions.end());
        } else {
          g.unions.push_back(std::move(u));
        }
        if (is_punct(".")) next();
        continue;
      }
      parse_triples_block(g);
    }
  }

  // subject predicate object (',' object)* (';' predicate object ...)* '.'?
  void parse_triples_block(GroupPattern& g) {
    QueryTerm s = parse_term(true);
    for (;;) {
      QueryTerm p = parse_predicate();
      for (;;) {
        QueryTerm o = parse_term(true);
        g.triples.push_back(QueryTriple{s, p, o});
        if (!is_punct(",")) break;
        next();
      }
      if (!is_punct(";")) break;
      next();
      if (is_punct(".") || is_punct("}")) break;
    }
    if (is_punct(".")) {
      next();
    } else if (!is_punct("}") && !is_punct("{") && !is_word("FILTER")) {
      // FILTER and a nested group may follow a triple without a '.'
      check_unsupported();
      fail("unexpected " + describe(peek()), {"'.'", "';'", "','", "'}'"});
    }
  }

  QueryTerm parse_predicate() {
    if (is_punct("^") || is_punct("!") || is_punct("(")) throw UnsupportedFeature("property path");
    if (peek().kind == Tok::kWord && peek().text == "a") {
      next();
      check_path();
      return QueryTerm::constant(Term::iri(kRdfType));
    }
    QueryTerm p = parse_term(false);
    check_path();
    return p;
  }

  void check_path() const {
    if (is_punct("/") || is_punct("|") || is_punct("*") || is_punct("+")) throw UnsupportedFeature("property path");
    if (peek().kind == Tok::kPunct && peek().text == "?") throw UnsupportedFeature("property path");
  }

  QueryTerm parse_term(bool allow_literal) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kVar: return QueryTerm::variable(next().text);
      case Tok::kBlank: return QueryTerm::variable("_:" + next().text);
      case Tok::kIri: return QueryTerm::constant(Term::iri(next().text));
      case Tok::kPname: {
        Token tok = next();
        return QueryTerm::constant(Term::iri(expand_pname(tok)));
      }
      case Tok::kString:
      case Tok::kInteger:
      case Tok::kDecimal:
        if (!allow_literal) fail("literal not allowed in predicate position", {"IRI", "variable"});
        return QueryTerm::constant(parse_literal());
      case Tok::kWord:
        if (allow_literal && (t.text == "true" || t.text == "false")) return QueryTerm::constant(parse_literal());
        break;
      default: break;
    }
    check_unsupported();
    fail("unexpected " + describe(t), allow_literal ? std::vector<std::string>{"variable", "IRI", "literal"}
                                                    : std::vector<std::string>{"variable", "IRI"});
  }

  Term parse_literal() {
    Token t = next();
    if (t.kind == Tok::kInteger) return Term::typed(t.text, kXsdInteger);
    if (t.kind == Tok::kDecimal) return Term::typed(t.text, kXsdDecimal);
    if (t.kind == Tok::kWord) return Term::typed(t.text, "http://www.w3.org/2001/XMLSchema#boolean");
    if (peek().kind == Tok::kLangTag) return Term::lang(t.text, next().text);
    if (is_punct("^^")) {
      next();
      if (peek().kind == Tok::kIri) return Term::typed(t.text, next().text);
      if (peek().kind == Tok::kPname) {
        Token dt = next();
        return Term::typed(t.text, expand_pname(dt));
      }
      fail("unexpected " + describe(peek()), {"datatype IRI"});
    }
    return Term::literal(t.text);
  }

  Expr parse_filter() {
    if (is_word("BOUND")) return parse_primary();
    if (peek().kind == Tok::kWord) {
      check_unsupported();
      throw UnsupportedFeature("function " + upper(peek().text));
    }
    expect_punct("(");
    Expr e = parse_or();
    expect_punct(")");
    return e;
  }

  Expr parse_or() {
    Expr e = parse_and();
    while (is_punct("||")) {
      next();
      e = Expr::logical_or(std::move(e), parse_and());
    }
    return e;
  }

  Expr parse_and() {
    Expr e = parse_unary();
    while (is_punct("&&")) {
      next();
      e = Expr::logical_and(std::move(e), parse_unary());
    }
    return e;
  }

  Expr parse_unary() {
    if (is_punct("!")) {
      next();
      return Expr::logical_not(parse_unary());
    }
    Expr lhs = parse_primary();
    static const std::pair<std::string_view, CmpOp> kOps[] = {{"=", CmpOp::kEq},  {"!=", CmpOp::kNe},
                                                             {"<", CmpOp::kLt},  {"<=", CmpOp::kLe},
                                                             {">", CmpOp::kGt},  {">=", CmpOp::kGe}};
    for (const auto& [sym, op] : kOps) {
      if (is_punct(sym)) {
        next();
        return Expr::compare(op, std::move(lhs), parse_primary());
      }
    }
    return lhs;
  }

  Expr parse_primary() {
    if (is_punct("(")) {
      next();
      Expr e = parse_or();
      expect_punct(")");
      return e;
    }
    if (is_word("BOUND")) {
      next();
      expect_punct("(");
      if (peek().kind != Tok::kVar) fail("unexpected " + describe(peek()), {"variable"});
      Expr e = Expr::bound(next().text);
      expect_punct(")");
      return e;
    }
    if (peek().kind == Tok::kVar) return Expr::variable(next().text);
    if (peek().kind == Tok::kWord && peek().text != "true" && peek().text != "false") {
      check_unsupported();
      throw UnsupportedFeature("function " + upper(peek().text));
    }
    if (peek().kind == Tok::kIri || peek().kind == Tok::kPname || peek().kind == Tok::kString ||
        peek().kind == Tok::kInteger || peek().kind == Tok::kDecimal || peek().kind == Tok::kWord) {
      return Expr::constant_term(parse_term(true).term);
    }
    fail("unexpected " + describe(peek()), {"variable", "constant", "'('", "BOUND"});
  }

  void parse_modifiers() {
    for (;;) {
      check_unsupported();
      if (is_word("GROUP")) {
        next();
        expect_word("BY");
        if (peek().kind != Tok::kVar) fail("unexpected " + describe(peek()), {"variable"});
        q_.group_by = next().text;
        if (peek().kind == Tok::kVar) throw UnsupportedFeature("GROUP BY over more than one variable");
        if (is_punct("(")) throw UnsupportedFeature("GROUP BY expression");
        continue;
      }
      if (is_word("LIMIT")) {
        next();
        if (peek().kind != Tok::kInteger || peek().text[0] == '-' || peek().text[0] == '+') {
          fail("unexpected " + describe(peek()), {"non-negative integer"});
        }
        q_.limit = std::stoull(next().text);
        continue;
      }
      return;
    }
  }

  void validate() {
    std::vector<std::string> where_vars;
    collect_vars(q_.where, where_vars);
    auto in_where = [&](const std::string& v) {
      return std::find(where_vars.begin(), where_vars.end(), v) != where_vars.end();
    };
    const Token& end = peek();
    auto semantic = [&](const std::string& msg) { throw ParseError(end.line, end.column, msg); };

    bool aggregated = q_.has_aggregates() || q_.group_by.has_value();
    if (q_.group_by && !in_where(*q_.group_by)) semantic("GROUP BY variable ?" + *q_.group_by + " is not in the pattern");
    if (aggregated && q_.select_all) semantic("SELECT * cannot be combined with grouping");
    std::set<std::string> names;
    for (const auto& item : q_.select) {
      const std::string& name = item.is_aggregate ? item.aggregate.alias : item.var;
      if (!names.insert(name).second) semantic("duplicate result variable ?" + name);
      if (item.is_aggregate) {
        if (in_where(name)) semantic("alias ?" + name + " is already bound in the pattern");
      } else if (aggregated && (!q_.group_by || item.var != *q_.group_by)) {
        semantic("?" + item.var + " must be the GROUP BY variable or an aggregate");
      }
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Query q_;
};

}  // namespace

Query parse_query(std::string_view text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.run();
}

}  // namespace vqe
