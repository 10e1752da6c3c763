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

#include "vqe/storage.hpp"

#include <algorithm>
#include <unordered_set>

#include "vqe/errors.hpp"

namespace vqe {

namespace {

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::hash<TermId> h;
    return h(t[0]) ^ (h(t[1]) * 31) ^ (h(t[2]) * 1031);
  }
};

// Number of bound (constant) positions and the positions themselves.
struct BoundSet {
  std::array<bool, 3> bound{};
  std::size_t count = 0;
};

BoundSet bound_positions(const TriplePattern& p) {
  BoundSet b;
  for (std::size_t i = 0; i < 3; ++i) {
    b.bound[i] = !p.slots[i].is_var;
    b.count += b.bound[i] ? 1 : 0;
  }
  return b;
}

}  // namespace

struct TripleStore::LoadSet {
  std::unordered_set<Triple, TripleHash> triples;
};

std::vector<VarId> TriplePattern::vars() const {
  std::vector<VarId> out;
  for (const auto& s : slots) {
    if (s.is_var && std::find(out.begin(), out.end(), s.var) == out.end()) out.push_back(s.var);
  }
  return out;
}

bool TriplePattern::has_var(VarId v) const {
  return std::any_of(slots.begin(), slots.end(), [v](const PatternSlot& s) { return s.is_var && s.var == v; });
}

bool TriplePattern::has_repeated_var() const {
  std::size_t n = 0;
  for (const auto& s : slots) n += s.is_var ? 1 : 0;
  return vars().size() != n;
}

bool TriplePattern::matches(const Triple& t) const {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!slots[i].is_var) {
      if (slots[i].id != t[i]) return false;
      continue;
    }
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (slots[j].is_var && slots[j].var == slots[i].var && t[j] != t[i]) return false;
    }
  }
  return true;
}

std::array<std::uint8_t, 3> permutation(IndexOrder order) {
  switch (order) {
    case IndexOrder::kSPO: return {0, 1, 2};
    case IndexOrder::kPSO: return {1, 0, 2};
    case IndexOrder::kPOS: return {1, 2, 0};
    case IndexOrder::kOSP: return {2, 0, 1};
  }
  return {0, 1, 2};
}

std::string to_string(IndexOrder order) {
  switch (order) {
    case IndexOrder::kSPO: return "SPO";
    case IndexOrder::kPSO: return "PSO";
    case IndexOrder::kPOS: return "POS";
    case IndexOrder::kOSP: return "OSP";
  }
  return "?";
}

RangeCursor::RangeCursor(const std::vector<Triple>* index, IndexOrder order, std::size_t begin, std::size_t end,
                         std::optional<std::size_t> sort_component)
    : index_(index), order_(order), begin_(begin), end_(end), pos_(begin), sort_component_(sort_component) {}

std::size_t RangeCursor::component_of(TriplePosition pos) const {
  auto perm = permutation(order_);
  for (std::size_t i = 0; i < 3; ++i) {
    if (perm[i] == static_cast<std::uint8_t>(pos)) return i;
  }
  return 0;
}

TermId RangeCursor::current_key() const {
  if (!sort_component_) throw ContractViolation("cursor has no sort component");
  return (*index_)[pos_][*sort_component_];
}

void RangeCursor::seek(TermId key) {
  if (!sort_component_) throw ContractViolation("seek on a cursor without sort component");
  ++seeks_;
  const auto& idx = *index_;
  const std::size_t c = *sort_component_;
  if (pos_ >= end_ || idx[pos_][c] >= key) return;
  // Gallop forward, then binary search inside the bracket.
  std::size_t lo = pos_;
  std::size_t step = 1;
  std::size_t hi = pos_ + step;
  while (hi < end_ && idx[hi][c] < key) {
    lo = hi;
    step *= 2;
    hi = pos_ + step;
  }
  hi = std::min(hi, end_);
  auto it = std::partition_point(idx.begin() + static_cast<std::ptrdiff_t>(lo + 1),
                                 idx.begin() + static_cast<std::ptrdiff_t>(hi),
                                 [&](const Triple& t) { return t[c] < key; });
  pos_ = static_cast<std::size_t>(it - idx.begin());
}

std::span<const Triple> RangeCursor::next_block(std::size_t n) {
  std::size_t take = std::min(n, remaining());
  std::span<const Triple> out(index_->data() + pos_, take);
  pos_ += take;
  rows_read_ += take;
  return out;
}

TripleStore::TripleStore() : loading_(std::make_unique<LoadSet>()) {}
TripleStore::TripleStore(TripleStore&&) noexcept = default;
TripleStore& TripleStore::operator=(TripleStore&&) noexcept = default;
TripleStore::~TripleStore() = default;

void TripleStore::insert(const Triple& t) {
  if (frozen_) throw FrozenStoreError("store is frozen; insert rejected");
  if (t[0].is_null() || t[1].is_null() || t[2].is_null()) throw Error("triple contains the NULL id");
  loading_->triples.insert(t);
}

void TripleStore::insert(const Term& s, const Term& p, const Term& o) {
  if (frozen_) throw FrozenStoreError("store is frozen; insert rejected");
  insert(Triple{dictionary_.encode(s), dictionary_.encode(p), dictionary_.encode(o)});
}

void TripleStore::freeze() {
  if (frozen_) return;
  std::vector<Triple> base(loading_->triples.begin(), loading_->triples.end());
  loading_.reset();
  for (IndexOrder order : kAllOrders) {
    auto perm = permutation(order);
    auto& idx = indexes_[static_cast<std::size_t>(order)];
    idx.resize(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      idx[i] = Triple{base[i][perm[0]], base[i][perm[1]], base[i][perm[2]]};
    }
    std::sort(idx.begin(), idx.end());
  }
  dictionary_.freeze();
  frozen_ = true;
}

std::size_t TripleStore::size() const {
  return frozen_ ? indexes_[0].size() : loading_->triples.size();
}

const std::vector<Triple>& TripleStore::index(IndexOrder order) const {
  return indexes_[static_cast<std::size_t>(order)];
}

std::vector<Triple> TripleStore::triples() const {
  if (!frozen_) {
    std::vector<Triple> out(loading_->triples.begin(), loading_->triples.end());
    std::sort(out.begin(), out.end());
    return out;
  }
  return indexes_[static_cast<std::size_t>(IndexOrder::kSPO)];
}

std::optional<IndexOrder> TripleStore::choose_order(const TriplePattern& pattern,
                                                    std::optional<VarId> sort_var) const {
  BoundSet b = bound_positions(pattern);
  for (IndexOrder order : kAllOrders) {
    auto perm = permutation(order);
    bool prefix_ok = true;
    for (std::size_t i = 0; i < b.count; ++i) prefix_ok = prefix_ok && b.bound[perm[i]];
    if (!prefix_ok) continue;
    if (!sort_var) return order;
    if (b.count < 3) {
      const PatternSlot& next = pattern.slots[perm[b.count]];
      if (next.is_var && next.var == *sort_var) return order;
    }
  }
  return std::nullopt;
}

std::pair<std::size_t, std::size_t> TripleStore::prefix_range(IndexOrder order, const TriplePattern& pattern) const {
  const auto& idx = index(order);
  auto perm = permutation(order);
  BoundSet b = bound_positions(pattern);
  Triple key{};
  for (std::size_t i = 0; i < b.count; ++i) key[i] = pattern.slots[perm[i]].id;
  auto less = [n = b.count](const Triple& a, const Triple& k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] != k[i]) return a[i] < k[i];
    }
    return false;
  };
  auto greater = [n = b.count](const Triple& k, const Triple& a) {
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] != k[i]) return k[i] < a[i];
    }
    return false;
  };
  auto lo = std::lower_bound(idx.begin(), idx.end(), key, less);
  auto hi = std::upper_bound(lo, idx.end(), key, greater);
  return {static_cast<std::size_t>(lo - idx.begin()), static_cast<std::size_t>(hi - idx.begin())};
}

RangeCursor TripleStore::open_scan(const TriplePattern& pattern, std::optional<VarId> required_sort_var) const {
  if (!frozen_) throw ContractViolation("open_scan requires a frozen store");
  if (required_sort_var && !pattern.has_var(*required_sort_var)) {
    throw NoSuitableIndexError("sort variable does not occur in the pattern");
  }
  auto order = choose_order(pattern, required_sort_var);
  if (!order) throw NoSuitableIndexError("no stored index order provides the requested sort variable");
  auto [lo, hi] = prefix_range(*order, pattern);
  std::size_t bound = bound_positions(pattern).count;
  std::optional<std::size_t> sort_component;
  if (bound < 3) sort_component = bound;
  return RangeCursor(&index(*order), *order, lo, hi, sort_component);
}

bool TripleStore::can_sort_by(const TriplePattern& pattern, VarId v) const {
  return pattern.has_var(v) && choose_order(pattern, v).has_value();
}

std::uint64_t TripleStore::count_range(const TriplePattern& pattern) const {
  if (!frozen_) throw ContractViolation("count_range requires a frozen store");
  auto order = *choose_order(pattern, std::nullopt);
  auto [lo, hi] = prefix_range(order, pattern);
  if (!pattern.has_repeated_var()) return hi - lo;
  const auto& idx = index(order);
  auto perm = permutation(order);
  std::uint64_t n = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    Triple t{};
    for (std::size_t c = 0; c < 3; ++c) t[perm[c]] = idx[i][c];
    n += pattern.matches(t) ? 1 : 0;
  }
  return n;
}

std::uint64_t TripleStore::distinct_values(const TriplePattern& pattern, VarId v) const {
  if (!pattern.has_var(v)) return 0;
  auto order = choose_order(pattern, v);
  if (order && !pattern.has_repeated_var()) {
    auto [lo, hi] = prefix_range(*order, pattern);
    std::size_t c = bound_positions(pattern).count;
    const auto& idx = index(*order);
    std::uint64_t n = 0;
    for (std::size_t i = lo; i < hi; ++i) n += (i == lo || idx[i][c] != idx[i - 1][c]) ? 1 : 0;
    return n;
  }
  auto any = *choose_order(pattern, std::nullopt);
  auto [lo, hi] = prefix_range(any, pattern);
  const auto& idx = index(any);
  auto perm = permutation(any);
  std::size_t vpos = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    if (pattern.slots[i].is_var && pattern.slots[i].var == v) {
      vpos = i;
      break;
    }
  }
  std::unordered_set<TermId> seen;
  for (std::size_t i = lo; i < hi; ++i) {
    Triple t{};
    for (std::size_t c = 0; c < 3; ++c) t[perm[c]] = idx[i][c];
    if (pattern.matches(t)) seen.insert(t[vpos]);
  }
  return seen.size();
}

}  // namespace vqe
