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

#include "test_support.hpp"

#include <algorithm>
#include <cctype>

#include "vqe/query.hpp"

namespace vqe::test {

Term term(const std::string& s) {
  if (!s.empty() && s.front() == '"') return Term::literal(s.substr(1, s.size() - 2));
  bool numeric = !s.empty() && std::all_of(s.begin() + (s[0] == '-' ? 1 : 0), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
  if (numeric) return Term::integer(std::stoll(s));
  if (s == "a") return Term::iri(kRdfType);
  return Term::iri(std::string(kDefaultPrefix) + s);
}

TripleStore make_store(const std::vector<Spo>& triples) {
  TripleStore store;
  for (const auto& [s, p, o] : triples) store.insert(term(s), term(p), term(o));
  store.freeze();
  return store;
}

TripleStore example_graph() {
  return make_store({{"Alice", "knows", "Bob"}, {"Alice", "knows", "Charlie"}, {"Bob", "worksAt", "ACME"}});
}

TripleStore random_graph(std::mt19937_64& rng, std::size_t max_triples, std::size_t max_terms) {
  // 4 predicates + 6 integers leave the rest for entities.
  const std::size_t entities = std::min<std::size_t>(max_terms - 10, 12 + rng() % 19);
  const std::size_t n = 20 + rng() % (max_triples - 19);
  TripleStore store;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = rng() % 4;
    const Term s = term("e" + std::to_string(rng() % entities));
    const Term o = p == 3 ? Term::integer(static_cast<long long>(rng() % 6))
                          : term("e" + std::to_string(rng() % entities));
    store.insert(s, term("p" + std::to_string(p)), o);
  }
  store.freeze();
  return store;
}

std::string random_query(std::mt19937_64& rng) {
  auto chance = [&](unsigned pct) { return rng() % 100 < pct; };
  const std::size_t n_patterns = 2 + rng() % 3;
  std::vector<std::string> used;
  std::vector<std::string> int_vars;
  std::string body;
  std::size_t fresh = 0;
  auto new_var = [&] { return "?v" + std::to_string(fresh++); };
  auto existing = [&] { return used[rng() % used.size()]; };
  auto note = [&](const std::string& t) {
    if (t[0] == '?' && std::find(used.begin(), used.end(), t) == used.end()) used.push_back(t);
  };

  for (std::size_t i = 0; i < n_patterns; ++i) {
    const bool pred_var = chance(10);
    const std::size_t p = rng() % 4;
    std::string s, o;
    std::string pred = pred_var ? "?q" + std::to_string(i) : ":p" + std::to_string(p);
    if (i == 0) {
      s = chance(85) ? new_var() : ":e" + std::to_string(rng() % 12);
      o = chance(80) ? new_var() : (p == 3 ? std::to_string(rng() % 6) : ":e" + std::to_string(rng() % 12));
      if (s[0] != '?' && o[0] != '?') o = new_var();
    } else {
      // Connect through subject or object.
      bool via_subject = chance(50);
      std::string join = existing();
      std::string other;
      if (chance(15)) {
        other = join;  // repeated variable inside one pattern
      } else if (chance(75)) {
        other = chance(30) && used.size() > 1 ? existing() : new_var();
      } else {
        other = p == 3 && via_subject ? std::to_string(rng() % 6) : ":e" + std::to_string(rng() % 12);
      }
      s = via_subject ? join : other;
      o = via_subject ? other : join;
      if (!via_subject && s[0] != '?' && s[0] != ':') s = new_var();
    }
    note(s);
    note(pred);
    note(o);
    if (!pred_var && p == 3 && o[0] == '?') int_vars.push_back(o);
    body += "  " + s + " " + pred + " " + o + " .\n";
  }

  if (used.size() >= 2 && chance(40)) {
    std::string a = existing();
    std::string b = existing();
    if (a != b) body += "  FILTER(" + a + " != " + b + ")\n";
  } else if (!int_vars.empty() && chance(30)) {
    const char* ops[] = {"<", "<=", ">", ">=", "="};
    body += "  FILTER(" + int_vars[rng() % int_vars.size()] + " " + ops[rng() % 5] + " " + std::to_string(rng() % 6) +
            ")\n";
  } else if (chance(15)) {
    body += "  FILTER(" + existing() + " != :e" + std::to_string(rng() % 12) + ")\n";
  }

  const std::string x = existing();
  std::string y = existing();
  std::string head;
  std::string tail;
  switch (rng() % 8) {
    case 0: head = "SELECT *"; break;
    case 1: head = "SELECT DISTINCT " + x; break;
    case 2: head = x == y ? "SELECT DISTINCT " + x : "SELECT DISTINCT " + x + " " + y; break;
    case 3:
      head = "SELECT " + x + " (COUNT(*) AS ?n)";
      tail = " GROUP BY " + x;
      break;
    case 4: head = "SELECT (COUNT(*) AS ?n)"; break;
    case 5:
      head = "SELECT " + x + " (COUNT(DISTINCT " + y + ") AS ?n)";
      tail = " GROUP BY " + x;
      break;
    case 6: {
      const std::string o = int_vars.empty() ? y : int_vars[rng() % int_vars.size()];
      head = "SELECT " + x + " (MIN(" + o + ") AS ?mn) (MAX(" + o + ") AS ?mx) (SUM(" + o + ") AS ?sm) (AVG(" + o +
             ") AS ?av) (COUNT(" + o + ") AS ?ct)";
      tail = " GROUP BY " + x;
      if (chance(30)) {
        head = "SELECT (SUM(" + o + ") AS ?sm) (AVG(" + o + ") AS ?av) (MIN(" + o + ") AS ?mn)";
        tail.clear();
      }
      break;
    }
    default: head = x == y ? "SELECT " + x : "SELECT " + y + " " + x; break;
  }
  return head + " WHERE {\n" + body + "}" + tail;
}

ScriptedBatchOp::ScriptedBatchOp(ExecContext& ctx, std::vector<VarId> vs, std::optional<VarId> sort_var,
                                 std::vector<RowTuple> rows, std::size_t chunk)
    : BatchOperator(std::move(vs), sort_var), ctx_(&ctx), rows_(std::move(rows)), chunk_(chunk) {}

BatchHandle ScriptedBatchOp::next() {
  ++calls.next_calls;
  if (pos_ >= rows_.size()) return nullptr;
  const std::size_t n = std::min(chunk_, rows_.size() - pos_);
  BatchHandle b = ctx_->pool().acquire(output_vars_, std::max(n, chunk_));
  for (std::size_t c = 0; c < output_vars_.size(); ++c) {
    TermId* col = b->column(c);
    for (std::size_t i = 0; i < n; ++i) col[i] = rows_[pos_ + i][output_vars_[c].value];
  }
  b->fill_identity(n);
  b->set_sort_var(sort_var_);
  pos_ += n;
  rows_pulled += n;
  calls.rows_out += n;
  return b;
}

void ScriptedBatchOp::skip(TermId key) {
  require_sorted("ScriptedBatchOp");
  ++calls.skip_calls;
  while (pos_ < rows_.size() && rows_[pos_][sort_var_->value] < key) ++pos_;
}

void ScriptedBatchOp::reset() {
  ++calls.reset_calls;
  pos_ = 0;
}

ScriptedRowOp::ScriptedRowOp(std::vector<VarId> vs, std::optional<VarId> sort_var, std::vector<RowTuple> rows)
    : RowOperator(std::move(vs), sort_var), rows_(std::move(rows)) {}

const RowTuple* ScriptedRowOp::next() {
  ++calls.next_calls;
  if (pos_ >= rows_.size()) return nullptr;
  ++calls.rows_out;
  return &rows_[pos_++];
}

void ScriptedRowOp::skip(TermId key) {
  require_sorted("ScriptedRowOp");
  ++calls.skip_calls;
  while (pos_ < rows_.size() && rows_[pos_][sort_var_->value] < key) ++pos_;
}

void ScriptedRowOp::reset() {
  ++calls.reset_calls;
  pos_ = 0;
}

RowTuple row(std::size_t width, std::initializer_list<std::pair<std::uint32_t, std::uint64_t>> binds) {
  RowTuple r(width, kNullId);
  for (auto [v, id] : binds) r[v] = TermId{id};
  return r;
}

std::vector<VarId> vars(std::initializer_list<std::uint32_t> ids) {
  std::vector<VarId> out;
  for (auto i : ids) out.push_back(VarId{i});
  return out;
}

std::vector<RowTuple> sorted(std::vector<RowTuple> rows) {
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::vector<RowTuple> project_sorted(const std::vector<RowTuple>& rows, const std::vector<VarId>& vs) {
  std::vector<RowTuple> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    RowTuple p;
    for (VarId v : vs) p.push_back(v.value < r.size() ? r[v.value] : kNullId);
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vqe::test
