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

#include "vqe/result.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <tuple>

namespace vqe {

bool term_less(const std::optional<Term>& a, const std::optional<Term>& b) {
  if (!a || !b) return !a && b;
  return std::tie(a->kind, a->lexical, a->datatype, a->langtag) < std::tie(b->kind, b->lexical, b->datatype, b->langtag);
}

bool row_less(const ResultRow& a, const ResultRow& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), term_less);
}

std::vector<ResultRow> ResultSet::sorted_rows() const {
  std::vector<ResultRow> out = rows;
  std::sort(out.begin(), out.end(), row_less);
  return out;
}

bool ResultSet::same_multiset(const ResultSet& other) const {
  return vars == other.vars && rows.size() == other.rows.size() && sorted_rows() == other.sorted_rows();
}

std::string to_tsv(const ResultSet& r) {
  std::string out;
  for (std::size_t i = 0; i < r.vars.size(); ++i) {
    if (i > 0) out += '\t';
    out += "?" + r.vars[i];
  }
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += '\t';
      if (row[i]) out += row[i]->to_ntriples();
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ResultSet& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!row[i]) continue;
      const Term& t = *row[i];
      nlohmann::json v;
      switch (t.kind) {
        case TermKind::kIri: v["type"] = "uri"; break;
        case TermKind::kBlankNode: v["type"] = "bnode"; break;
        case TermKind::kLiteral: v["type"] = "literal"; break;
      }
      v["value"] = t.lexical;
      if (t.datatype) v["datatype"] = *t.datatype;
      if (t.langtag) v["xml:lang"] = *t.langtag;
      obj[r.vars[i]] = std::move(v);
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

}  // namespace vqe
