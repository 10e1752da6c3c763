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

#include "vqe/oracle.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "vqe/aggregate.hpp"
#include "vqe/errors.hpp"

namespace vqe {

namespace {

using Binding = std::map<std::string, Term>;
using DecodedTriple = std::array<Term, 3>;

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return term_less(a, b); }
};

bool bind(Binding& b, const QueryTerm& qt, const Term& value) {
  if (!qt.is_var) return qt.term == value;
  auto it = b.find(qt.var);
  if (it != b.end()) return it->second == value;
  b.emplace(qt.var, value);
  return true;
}

void extend(const std::vector<QueryTriple>& pats, std::size_t i, const Binding& b,
            const std::vector<DecodedTriple>& triples, std::vector<Binding>& out) {
  if (i == pats.size()) {
    out.push_back(b);
    return;
  }
  const QueryTriple& p = pats[i];
  for (const auto& t : triples) {
    Binding nb = b;
    if (bind(nb, p.s, t[0]) && bind(nb, p.p, t[1]) && bind(nb, p.o, t[2])) extend(pats, i + 1, nb, triples, out);
  }
}

std::vector<Binding> join(const std::vector<Binding>& a, const std::vector<Binding>& b) {
  std::vector<Binding> out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      bool ok = true;
      for (const auto& [k, v] : y) {
        auto it = x.find(k);
        if (it != x.end() && !(it->second == v)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      Binding m = x;
      m.insert(y.begin(), y.end());
      out.push_back(std::move(m));
    }
  }
  return out;
}

enum class Tri { kFalse, kTrue, kError };

std::optional<Term> operand(const Expr& e, const Binding& b) {
  if (e.kind == Expr::Kind::kConst) return e.constant;
  auto it = b.find(e.var);
  if (it == b.end()) return std::nullopt;
  return it->second;
}

Tri eval(const Expr& e, const Binding& b) {
  switch (e.kind) {
    case Expr::Kind::kBound: return b.count(e.var) != 0 ? Tri::kTrue : Tri::kFalse;
    case Expr::Kind::kCompare: {
      auto x = operand(e.args[0], b);
      auto y = operand(e.args[1], b);
      if (!x || !y) return Tri::kError;
      if (e.op == CmpOp::kEq) return *x == *y ? Tri::kTrue : Tri::kFalse;
      if (e.op == CmpOp::kNe) return *x == *y ? Tri::kFalse : Tri::kTrue;
      auto nx = integer_value(*x);
      auto ny = integer_value(*y);
      if (!nx || !ny) return Tri::kError;
      bool r = e.op == CmpOp::kLt   ? *nx < *ny
               : e.op == CmpOp::kLe ? *nx <= *ny
               : e.op == CmpOp::kGt ? *nx > *ny
                                    : *nx >= *ny;
      return r ? Tri::kTrue : Tri::kFalse;
    }
    case Expr::Kind::kNot: {
      Tri t = eval(e.args[0], b);
      return t == Tri::kError ? t : (t == Tri::kTrue ? Tri::kFalse : Tri::kTrue);
    }
    case Expr::Kind::kAnd: {
      Tri x = eval(e.args[0], b);
      Tri y = eval(e.args[1], b);
      if (x == Tri::kFalse || y == Tri::kFalse) return Tri::kFalse;
      return (x == Tri::kError || y == Tri::kError) ? Tri::kError : Tri::kTrue;
    }
    case Expr::Kind::kOr: {
      Tri x = eval(e.args[0], b);
      Tri y = eval(e.args[1], b);
      if (x == Tri::kTrue || y == Tri::kTrue) return Tri::kTrue;
      return (x == Tri::kError || y == Tri::kError) ? Tri::kError : Tri::kFalse;
    }
    default: throw TypeError("filter condition must be a comparison, BOUND, or a logical combination");
  }
}

std::vector<Binding> eval_group(const GroupPattern& g, const std::vector<DecodedTriple>& triples) {
  std::vector<Binding> sols;
  extend(g.triples, 0, Binding{}, triples, sols);
  for (const auto& u : g.unions) {
    std::vector<Binding> alt;
    for (const auto& br : u.branches) {
      auto s = eval_group(br, triples);
      alt.insert(alt.end(), s.begin(), s.end());
    }
    sols = join(sols, alt);
  }
  std::vector<Binding> kept;
  for (auto& s : sols) {
    bool ok = std::all_of(g.filters.begin(), g.filters.end(), [&](const Expr& f) { return eval(f, s) == Tri::kTrue; });
    if (ok) kept.push_back(std::move(s));
  }
  return kept;
}

// Aggregate computed directly over the group's bindings.
std::optional<Term> aggregate(const AggregateExpr& a, const std::vector<const Binding*>& rows, const Dictionary& dict) {
  std::vector<Term> vals;
  for (const Binding* b : rows) {
    if (!a.arg) {
      vals.push_back(Term::iri("row"));
      continue;
    }
    auto it = b->find(*a.arg);
    if (it != b->end()) vals.push_back(it->second);
  }
  switch (a.kind) {
    case AggKind::kCount: return Term::integer(static_cast<long long>(vals.size()));
    case AggKind::kCountDistinct: {
      std::set<Term, TermLess> uniq(vals.begin(), vals.end());
      return Term::integer(static_cast<long long>(uniq.size()));
    }
    case AggKind::kSum:
    case AggKind::kAvg: {
      long long sum = 0;
      std::uint64_t n = 0;
      for (const auto& v : vals) {
        if (auto x = integer_value(v)) {
          sum += *x;
          ++n;
        }
      }
      if (n == 0) return std::nullopt;
      if (a.kind == AggKind::kSum) return Term::integer(sum);
      return Term::typed(format_average(sum, n), kXsdDecimal);
    }
    case AggKind::kMin:
    case AggKind::kMax: {
      std::optional<Term> best;
      long long best_v = 0;
      for (const auto& v : vals) {
        auto x = integer_value(v);
        if (!x) continue;
        bool better = !best || (a.kind == AggKind::kMin ? *x < best_v : *x > best_v) ||
                      (*x == best_v && dict.find(v) < dict.find(*best));
        if (better) {
          best = v;
          best_v = *x;
        }
      }
      return best;
    }
  }
  return std::nullopt;
}

}  // namespace

ResultSet evaluate_naive(const TripleStore& store, const Query& query) {
  std::vector<DecodedTriple> triples;
  const Dictionary& dict = store.dictionary();
  for (const Triple& t : store.triples()) triples.push_back({dict.decode(t[0]), dict.decode(t[1]), dict.decode(t[2])});

  std::vector<Binding> sols = eval_group(query.where, triples);
  ResultSet rs;
  rs.vars = query.result_vars();

  if (query.has_aggregates() || query.group_by) {
    std::map<std::optional<Term>, std::vector<const Binding*>, decltype(&term_less)> groups(&term_less);
    for (const auto& s : sols) {
      std::optional<Term> key;
      if (query.group_by) {
        auto it = s.find(*query.group_by);
        if (it != s.end()) key = it->second;
      }
      groups[key].push_back(&s);
    }
    if (groups.empty() && !query.group_by) groups[std::nullopt];
    for (const auto& [key, rows] : groups) {
      ResultRow row;
      for (const auto& item : query.select) {
        row.push_back(item.is_aggregate ? aggregate(item.aggregate, rows, dict) : key);
      }
      rs.rows.push_back(std::move(row));
    }
  } else {
    for (const auto& s : sols) {
      ResultRow row;
      for (const auto& v : rs.vars) {
        auto it = s.find(v);
        row.push_back(it == s.end() ? std::nullopt : std::optional<Term>(it->second));
      }
      rs.rows.push_back(std::move(row));
    }
  }

  if (query.distinct) {
    std::sort(rs.rows.begin(), rs.rows.end(), row_less);
    rs.rows.erase(std::unique(rs.rows.begin(), rs.rows.end()), rs.rows.end());
  }
  if (query.limit && rs.rows.size() > *query.limit) rs.rows.resize(*query.limit);
  return rs;
}

}  // namespace vqe
