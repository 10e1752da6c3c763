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

#include <optional>
#include <string>
#include <vector>

#include "vqe/term.hpp"

namespace vqe {

/// One decoded solution; std::nullopt marks an unbound variable.
using ResultRow = std::vector<std::optional<Term>>;

/// Decoded query answer. Row order is not significant unless the query has
/// a LIMIT.
struct ResultSet {
  std::vector<std::string> vars;
  std::vector<ResultRow> rows;

  /// Same variables and the same multiset of rows.
  bool same_multiset(const ResultSet& other) const;
  /// Rows in a canonical order (for comparisons and stable output).
  std::vector<ResultRow> sorted_rows() const;
};

/// Strict weak order over optional terms: unbound first, then by kind,
/// lexical form, datatype, language tag.
bool term_less(const std::optional<Term>& a, const std::optional<Term>& b);
bool row_less(const ResultRow& a, const ResultRow& b);

/// Header row of "?var" names, then one line per row; terms in N-Triples
/// syntax, unbound as an empty field.
std::string to_tsv(const ResultSet& r);

/// Array of binding objects; unbound variables are omitted.
std::string to_json(const ResultSet& r);

}  // namespace vqe
