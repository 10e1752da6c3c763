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

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqe/dictionary.hpp"
#include "vqe/types.hpp"

namespace vqe {

/// One position of a triple pattern: either a variable or a constant id.
/// A constant with id 0 stands for a term missing from the dictionary and
/// matches nothing.
struct PatternSlot {
  bool is_var = false;
  VarId var{};
  TermId id{};

  static PatternSlot variable(VarId v) { return PatternSlot{true, v, kNullId}; }
  static PatternSlot constant(TermId t) { return PatternSlot{false, VarId{}, t}; }
  bool operator==(const PatternSlot&) const = default;
};

struct TriplePattern {
  std::array<PatternSlot, 3> slots;

  /// Distinct variables in position order.
  std::vector<VarId> vars() const;
  bool has_var(VarId v) const;
  /// True when some variable occurs in more than one position.
  bool has_repeated_var() const;
  bool matches(const Triple& t) const;
  bool operator==(const TriplePattern&) const = default;
};

enum class IndexOrder : std::uint8_t { kSPO, kPSO, kPOS, kOSP };

inline constexpr std::array<IndexOrder, 4> kAllOrders = {IndexOrder::kSPO, IndexOrder::kPSO, IndexOrder::kPOS,
                                                         IndexOrder::kOSP};

/// permutation(o)[i] is the triple position stored in component i of order o.
std::array<std::uint8_t, 3> permutation(IndexOrder order);
std::string to_string(IndexOrder order);

/// Forward-only cursor over one index range whose constant prefix is fixed.
/// Triples are handed out in permuted (index) layout.
class RangeCursor {
 public:
  RangeCursor() = default;
  RangeCursor(const std::vector<Triple>* index, IndexOrder order, std::size_t begin, std::size_t end,
              std::optional<std::size_t> sort_component);

  IndexOrder order() const { return order_; }
  /// Component (in permuted layout) holding the sort variable, if any.
  std::optional<std::size_t> sort_component() const { return sort_component_; }
  /// Component of the permuted triple that stores a pattern position.
  std::size_t component_of(TriplePosition pos) const;

  bool exhausted() const { return pos_ >= end_; }
  std::size_t remaining() const { return end_ - pos_; }
  std::size_t position() const { return pos_; }

  /// Sort-key value of the current triple; cursor must not be exhausted.
  TermId current_key() const;

  /// Positions at the first remaining triple whose sort key is >= key. Never
  /// moves backward; seeking past the range exhausts the cursor.
  void seek(TermId key);

  /// Returns up to n triples and advances past them.
  std::span<const Triple> next_block(std::size_t n);

  /// Returns to the first triple of the range. Counters are kept.
  void rewind() { pos_ = begin_; }

  /// Rows handed out by next_block, i.e. rows "read from storage".
  std::uint64_t rows_read() const { return rows_read_; }
  std::uint64_t seeks() const { return seeks_; }

 private:
  const std::vector<Triple>* index_ = nullptr;
  IndexOrder order_ = IndexOrder::kSPO;
  std::size_t begin_ = 0;
  std::size_t end_ = 0;
  std::size_t pos_ = 0;
  std::optional<std::size_t> sort_component_;
  std::uint64_t rows_read_ = 0;
  std::uint64_t seeks_ = 0;
};

/// In-memory triple store: one sorted, deduplicated array per index order
/// plus the dictionary. Load, then freeze, then query.
class TripleStore {
 public:
  TripleStore();
  TripleStore(TripleStore&&) noexcept;
  TripleStore& operator=(TripleStore&&) noexcept;
  ~TripleStore();

  Dictionary& dictionary() { return dictionary_; }
  const Dictionary& dictionary() const { return dictionary_; }

  /// Adds a triple; duplicates are ignored. Throws FrozenStoreError after
  /// freeze() and Error for triples containing the NULL id.
  void insert(const Triple& t);
  void insert(const Term& s, const Term& p, const Term& o);

  /// Builds the sorted indexes and freezes the dictionary.
  void freeze();
  bool frozen() const { return frozen_; }

  std::size_t size() const;

  /// Index contents in permuted layout.
  const std::vector<Triple>& index(IndexOrder order) const;

  /// All triples in SPO order, positions unpermuted.
  std::vector<Triple> triples() const;

  /// Opens a cursor whose constant prefix covers the pattern's bound
  /// positions and whose next component is required_sort_var (if given).
  /// Throws NoSuitableIndexError when no stored order can provide it.
  RangeCursor open_scan(const TriplePattern& pattern, std::optional<VarId> required_sort_var = {}) const;

  /// Whether open_scan(pattern, v) would succeed.
  bool can_sort_by(const TriplePattern& pattern, VarId v) const;

  /// Exact match count for the pattern (binary search on the constant prefix;
  /// a scan only when a variable repeats inside the pattern).
  std::uint64_t count_range(const TriplePattern& pattern) const;

  /// Exact number of distinct values of v among the pattern's matches.
  std::uint64_t distinct_values(const TriplePattern& pattern, VarId v) const;

 private:
  struct LoadSet;

  std::optional<IndexOrder> choose_order(const TriplePattern& pattern, std::optional<VarId> sort_var) const;
  std::pair<std::size_t, std::size_t> prefix_range(IndexOrder order, const TriplePattern& pattern) const;

  Dictionary dictionary_;
  std::array<std::vector<Triple>, 4> indexes_;
  std::unique_ptr<LoadSet> loading_;
  bool frozen_ = false;
};

}  // namespace vqe
