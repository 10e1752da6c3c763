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
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "vqe/dictionary.hpp"
#include "vqe/query.hpp"
#include "vqe/types.hpp"

namespace vqe {

/// One aggregate of a grouping operator, resolved to variable ids.
struct AggregateSpec {
  AggKind kind = AggKind::kCount;
  /// Unset for COUNT(*).
  std::optional<VarId> arg;
  VarId out{};
  /// Label text, e.g. "(COUNT(*) AS ?count)".
  std::string label;
};

/// Accumulator for one aggregate over one group. Partial states built over
/// any contiguous split of the input merge to the single-pass result.
///
/// MIN, MAX, SUM and AVG consider integer-valued terms only; a group with no
/// integer values yields unbound. MIN/MAX return the original term, picking
/// the smallest id among equal values.
class AggregateState {
 public:
  explicit AggregateState(AggKind kind = AggKind::kCount) : kind_(kind) {}

  AggKind kind() const { return kind_; }

  /// Adds one input row whose argument value is `value` (0 = unbound; for
  /// COUNT(*) pass any non-null id).
  void add(TermId value, std::optional<long long> numeric);
  /// Adds n rows to COUNT(*) at once.
  void add_rows(std::uint64_t n) { count_ += n; }

  void merge(const AggregateState& other);

  /// Result term id, interned into the overlay; 0 when the result is unbound.
  TermId finish(TermOverlay& terms) const;

  /// Result as a term (std::nullopt when unbound).
  std::optional<Term> result_term() const;

  std::size_t memory_bytes() const;

 private:
  AggKind kind_;
  std::uint64_t count_ = 0;
  long long sum_ = 0;
  bool has_value_ = false;
  long long best_value_ = 0;
  TermId best_id_{};
  std::unordered_set<TermId> distinct_;
};

/// Lexical form of an average, xsd:decimal.
std::string format_average(long long sum, std::uint64_t count);

}  // namespace vqe
