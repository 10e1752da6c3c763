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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vqe/term.hpp"

namespace vqe {

enum class CmpOp : std::uint8_t { kEq, kNe, kLt, kLe, kGt, kGe };
std::string_view to_string(CmpOp op);

enum class AggKind : std::uint8_t { kCount, kCountDistinct, kMin, kMax, kSum, kAvg };
std::string_view to_string(AggKind kind);

/// A triple-pattern position as written in the query: a named variable or a
/// constant term. Blank nodes in patterns become hidden variables named "_:x".
struct QueryTerm {
  bool is_var = false;
  std::string var;
  Term term;

  static QueryTerm variable(std::string name) { return QueryTerm{true, std::move(name), Term{}}; }
  static QueryTerm constant(Term t) { return QueryTerm{false, {}, std::move(t)}; }
  bool operator==(const QueryTerm&) const = default;
};

struct QueryTriple {
  QueryTerm s, p, o;
  bool operator==(const QueryTriple&) const = default;
};

/// Filter expression tree.
struct Expr {
  enum class Kind : std::uint8_t { kVar, kConst, kCompare, kBound, kAnd, kOr, kNot };

  Kind kind = Kind::kConst;
  std::string var;  // kVar, kBound
  Term constant;    // kConst
  CmpOp op = CmpOp::kEq;
  std::vector<Expr> args;  // kCompare: 2, kAnd/kOr: 2, kNot: 1

  static Expr variable(std::string name);
  static Expr constant_term(Term t);
  static Expr compare(CmpOp op, Expr lhs, Expr rhs);
  static Expr bound(std::string name);
  static Expr logical_and(Expr a, Expr b);
  static Expr logical_or(Expr a, Expr b);
  static Expr logical_not(Expr a);

  /// Variables mentioned, first-appearance order.
  std::vector<std::string> vars() const;
  bool operator==(const Expr&) const = default;
};

struct GroupPattern;

/// `{ A } UNION { B } UNION ...`
struct UnionPattern {
  std::vector<GroupPattern> branches;
  bool operator==(const UnionPattern&) const;
};

struct GroupPattern {
  std::vector<QueryTriple> triples;
  std::vector<Expr> filters;
  std::vector<UnionPattern> unions;
  bool operator==(const GroupPattern&) const = default;
};

struct AggregateExpr {
  AggKind kind = AggKind::kCount;
  /// Unset for COUNT(*).
  std::optional<std::string> arg;
  std::string alias;
  bool operator==(const AggregateExpr&) const = default;
};

struct SelectItem {
  bool is_aggregate = false;
  std::string var;
  AggregateExpr aggregate;
  bool operator==(const SelectItem&) const = default;
};

struct Query {
  std::map<std::string, std::string> prefixes;
  bool distinct = false;
  bool select_all = false;
  std::vector<SelectItem> select;
  GroupPattern where;
  std::optional<std::string> group_by;
  std::optional<std::uint64_t> limit;

  bool has_aggregates() const;
  /// Names of the result columns in output order (without '?').
  std::vector<std::string> result_vars() const;
};

/// Prefix used when the query declares no ':' prefix itself.
inline constexpr std::string_view kDefaultPrefix = "http://example.org/";

/// Parses the supported query subset; see docs/query-grammar.md.
/// Throws ParseError (with line, column, expected tokens) on malformed text
/// and UnsupportedFeature for recognized constructs outside the subset.
Query parse_query(std::string_view text);

/// Compact rendering of an IRI for labels: "rdf:type", ":knows", or "<...>".
std::string abbreviate_iri(const std::string& iri);

/// Label form of a term: abbreviated IRI, literal in N-Triples syntax.
std::string display_term(const Term& t);

/// Renders a filter expression, e.g. "?person1 != ?person3".
std::string to_string(const Expr& e);

}  // namespace vqe
