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

#include "vqe/batch.hpp"

#include <algorithm>
#include <numeric>

namespace vqe {

void SelectionVector::reset_identity(std::size_t n) {
  idx_.resize(n);
  std::iota(idx_.begin(), idx_.end(), std::uint32_t{0});
}

void SelectionVector::erase_prefix(std::size_t n) {
  n = std::min(n, idx_.size());
  idx_.erase(idx_.begin(), idx_.begin() + static_cast<std::ptrdiff_t>(n));
}

bool SelectionVector::valid_for(std::size_t length) const {
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (idx_[i] >= length) return false;
    if (i > 0 && idx_[i - 1] >= idx_[i]) return false;
  }
  return true;
}

void ColumnBatch::reset(std::span<const VarId> vars, std::size_t capacity) {
  vars_.assign(vars.begin(), vars.end());
  capacity_ = capacity;
  columns_.resize(vars_.size());
  for (auto& c : columns_) c.resize(capacity);
  length_ = 0;
  sv_.clear();
  sort_var_.reset();
}

std::optional<std::size_t> ColumnBatch::column_index(VarId v) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i] == v) return i;
  }
  return std::nullopt;
}

void ColumnBatch::drop_column(std::size_t i) {
  vars_.erase(vars_.begin() + static_cast<std::ptrdiff_t>(i));
  // Keep the buffer around at the tail so pooled reuse does not reallocate.
  auto buf = std::move(columns_[i]);
  columns_.erase(columns_.begin() + static_cast<std::ptrdiff_t>(i));
  columns_.push_back(std::move(buf));
  columns_.resize(vars_.size());
  if (sort_var_ && !column_index(*sort_var_)) sort_var_.reset();
}

bool ColumnBatch::invariants_hold() const {
  if (length_ > capacity_) return false;
  for (const auto& c : columns_) {
    if (c.size() < length_) return false;
  }
  if (!sv_.valid_for(length_)) return false;
  if (sort_var_) {
    auto ci = column_index(*sort_var_);
    if (!ci) return false;
    const TermId* col = column(*ci);
    for (std::size_t i = 1; i < sv_.size(); ++i) {
      if (col[sv_[i - 1]] > col[sv_[i]]) return false;
    }
  }
  return true;
}

void BatchRecycler::operator()(ColumnBatch* batch) const {
  if (pool != nullptr) {
    pool->give_back(batch);
  } else {
    delete batch;
  }
}

BatchPool::~BatchPool() = default;

BatchHandle BatchPool::acquire(std::span<const VarId> vars, std::size_t capacity) {
  std::unique_ptr<ColumnBatch> batch;
  auto it = free_.find(capacity);
  if (it != free_.end() && !it->second.empty()) {
    batch = std::move(it->second.back());
    it->second.pop_back();
    ++hits_;
  } else {
    batch = std::make_unique<ColumnBatch>(capacity);
    ++misses_;
  }
  batch->reset(vars, capacity);
  ++in_flight_;
  peak_in_flight_ = std::max(peak_in_flight_, in_flight_);
  return BatchHandle(batch.release(), BatchRecycler{this});
}

void BatchPool::give_back(ColumnBatch* batch) {
  --in_flight_;
  free_[batch->capacity()].emplace_back(batch);
}

std::size_t BatchPool::pooled() const {
  std::size_t n = 0;
  for (const auto& [cap, list] : free_) n += list.size();
  return n;
}

BatchHandle make_batch(std::span<const VarId> vars, std::size_t capacity) {
  BatchHandle b(new ColumnBatch(capacity), BatchRecycler{nullptr});
  b->reset(vars, capacity);
  return b;
}

std::vector<RowTuple> pivot_to_rows(const ColumnBatch& batch, std::size_t width) {
  std::vector<RowTuple> out;
  out.reserve(batch.active_count());
  for (RowRef r : batch.rows()) {
    RowTuple t(width, kNullId);
    for (std::size_t c = 0; c < batch.num_columns(); ++c) t[batch.vars()[c].value] = r[c];
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<BatchHandle> pivot_from_rows(std::span<const RowTuple> rows, std::span<const VarId> vars,
                                         std::size_t cap, BatchPool* pool) {
  std::vector<BatchHandle> out;
  for (std::size_t start = 0; start < rows.size(); start += cap) {
    std::size_t n = std::min(cap, rows.size() - start);
    BatchHandle b = pool != nullptr ? pool->acquire(vars, cap) : make_batch(vars, cap);
    for (std::size_t c = 0; c < vars.size(); ++c) {
      TermId* col = b->column(c);
      const std::size_t v = vars[c].value;
      for (std::size_t i = 0; i < n; ++i) {
        const RowTuple& row = rows[start + i];
        col[i] = v < row.size() ? row[v] : kNullId;
      }
    }
    b->fill_identity(n);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace vqe
