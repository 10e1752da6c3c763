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

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "vqe/term.hpp"
#include "vqe/types.hpp"

namespace vqe {

/// Bidirectional Term <-> TermId mapping. Ids are assigned densely from 1 in
/// first-encounter order. Mutable while loading, immutable after freeze().
class Dictionary {
 public:
  TermId encode(const Term& term);

  /// Lookup without inserting; kNullId when the term was never encoded.
  TermId find(const Term& term) const;

  /// Throws NullIdError for id 0 and UnknownIdError for unassigned ids.
  const Term& decode(TermId id) const;

  /// Integer value for integer-typed literals, used by ordered comparisons
  /// and numeric aggregates.
  std::optional<long long> numeric_value(TermId id) const {
    if (id.value == 0 || id.value > numeric_.size()) return std::nullopt;
    return numeric_[id.value - 1];
  }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  std::size_t size() const { return inverse_.size(); }

 private:
  std::unordered_map<Term, TermId> forward_;
  std::vector<Term> inverse_;
  std::vector<std::optional<long long>> numeric_;
  bool frozen_ = false;
};

/// Per-execution extension of a frozen dictionary for values computed during
/// a query (aggregate results). Terms already in the base dictionary keep
/// their base id; new terms get ids above the base range.
class TermOverlay {
 public:
  explicit TermOverlay(const Dictionary& base) : base_(&base) {}

  TermId intern(const Term& term);
  const Term& decode(TermId id) const;
  std::optional<long long> numeric_value(TermId id) const;
  const Dictionary& base() const { return *base_; }

 private:
  const Dictionary* base_;
  std::unordered_map<Term, TermId> forward_;
  std::vector<Term> extra_;
  std::vector<std::optional<long long>> numeric_;
};

}  // namespace vqe
