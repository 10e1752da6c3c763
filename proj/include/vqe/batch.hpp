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

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "vqe/types.hpp"

namespace vqe {

inline constexpr std::size_t kDefaultBatchMax = 512;

/// Sorted, duplicate-free list of active row positions.
class SelectionVector {
 public:
  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  std::uint32_t operator[](std::size_t i) const { return idx_[i]; }
  std::span<const std::uint32_t> indices() const { return idx_; }

  void clear() { idx_.clear(); }
  void reset_identity(std::size_t n);
  void push_back(std::uint32_t row) {
    assert(idx_.empty() || idx_.back() < row);
    idx_.push_back(row);
  }
  /// Drops the first n active entries.
  void erase_prefix(std::size_t n);
  void truncate(std::size_t n) {
    if (n < idx_.size()) idx_.resize(n);
  }

  /// Keeps only rows for which keep(row_index) holds; order is preserved.
  template <class Pred>
  void retain(Pred&& keep) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      std::uint32_t r = idx_[i];
      idx_[out] = r;
      out += keep(r) ? 1 : 0;
    }
    idx_.resize(out);
  }

  /// Strictly increasing and every entry below length.
  bool valid_for(std::size_t length) const;

  std::vector<std::uint32_t>& raw() { return idx_; }

 private:
  std::vector<std::uint32_t> idx_;
};

class ColumnBatch;

/// Lazy view of one active row; reads the columns on access.
class RowRef {
 public:
  RowRef(const ColumnBatch* batch, std::uint32_t row) : batch_(batch), row_(row) {}
  TermId operator[](std::size_t column) const;
  std::uint32_t physical_row() const { return row_; }

 private:
  const ColumnBatch* batch_;
  std::uint32_t row_;
};

/// Columnar batch: one TermId column per variable, all of equal length, plus
/// a selection vector shared by every column.
class ColumnBatch {
 public:
  explicit ColumnBatch(std::size_t capacity = kDefaultBatchMax) : capacity_(capacity) {}

  /// Re-targets the batch for a schema; length and selection are cleared,
  /// column storage is kept and sized to capacity.
  void reset(std::span<const VarId> vars, std::size_t capacity);

  const std::vector<VarId>& vars() const { return vars_; }
  std::size_t num_columns() const { return vars_.size(); }
  std::optional<std::size_t> column_index(VarId v) const;

  TermId* column(std::size_t i) { return columns_[i].data(); }
  const TermId* column(std::size_t i) const { return columns_[i].data(); }

  std::size_t capacity() const { return capacity_; }
  std::size_t length() const { return length_; }
  void set_length(std::size_t n) {
    assert(n <= capacity_);
    length_ = n;
  }
  /// Sets length n with every row active.
  void fill_identity(std::size_t n) {
    set_length(n);
    sv_.reset_identity(n);
  }

  SelectionVector& sv() { return sv_; }
  const SelectionVector& sv() const { return sv_; }
  std::size_t active_count() const { return sv_.size(); }

  std::optional<VarId> sort_var() const { return sort_var_; }
  void set_sort_var(std::optional<VarId> v) { sort_var_ = v; }

  /// Removes rows from the selection vector; data columns are not touched.
  template <class Pred>
  void retain(Pred&& keep) {
    sv_.retain(std::forward<Pred>(keep));
  }

  /// Drops a column (used by projections); the selection is unchanged.
  void drop_column(std::size_t i);

  /// Checks every structural invariant, including sort order on sort_var.
  bool invariants_hold() const;

  class RowRange {
   public:
    class iterator {
     public:
      iterator(const ColumnBatch* b, std::size_t i) : b_(b), i_(i) {}
      RowRef operator*() const { return RowRef(b_, b_->sv()[i_]); }
      iterator& operator++() {
        ++i_;
        return *this;
      }
      bool operator==(const iterator& o) const { return i_ == o.i_; }

     private:
      const ColumnBatch* b_;
      std::size_t i_;
    };
    explicit RowRange(const ColumnBatch* b) : b_(b) {}
    iterator begin() const { return iterator(b_, 0); }
    iterator end() const { return iterator(b_, b_->active_count()); }
    std::size_t size() const { return b_->active_count(); }

   private:
    const ColumnBatch* b_;
  };

  /// Pivot to rows: one lazy RowRef per selection entry, in selection order.
  RowRange rows() const { return RowRange(this); }

 private:
  std::vector<VarId> vars_;
  std::vector<std::vector<TermId>> columns_;
  std::size_t capacity_;
  std::size_t length_ = 0;
  SelectionVector sv_;
  std::optional<VarId> sort_var_;
};

inline TermId RowRef::operator[](std::size_t column) const { return batch_->column(column)[row_]; }

class BatchPool;

struct BatchRecycler {
  BatchPool* pool = nullptr;
  void operator()(ColumnBatch* batch) const;
};

/// Owning handle; destroying it returns the batch to its pool.
using BatchHandle = std::unique_ptr<ColumnBatch, BatchRecycler>;

/// Free lists of batch buffers keyed by capacity. Single-threaded.
class BatchPool {
 public:
  BatchPool() = default;
  BatchPool(const BatchPool&) = delete;
  BatchPool& operator=(const BatchPool&) = delete;
  ~BatchPool();

  BatchHandle acquire(std::span<const VarId> vars, std::size_t capacity);
  void release(BatchHandle batch) { batch.reset(); }

  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }
  std::size_t in_flight() const { return in_flight_; }
  std::size_t peak_in_flight() const { return peak_in_flight_; }
  std::size_t pooled() const;

 private:
  friend struct BatchRecycler;
  void give_back(ColumnBatch* batch);

  std::map<std::size_t, std::vector<std::unique_ptr<ColumnBatch>>> free_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
  std::size_t in_flight_ = 0;
  std::size_t peak_in_flight_ = 0;
};

/// Batch not owned by any pool; freed on destruction.
BatchHandle make_batch(std::span<const VarId> vars, std::size_t capacity);

/// Materializes the active rows as full-width tuples of the given width.
std::vector<RowTuple> pivot_to_rows(const ColumnBatch& batch, std::size_t width);

/// Packs rows into batches of at most cap rows, preserving order. Variables
/// a row leaves unbound are stored as the NULL marker.
std::vector<BatchHandle> pivot_from_rows(std::span<const RowTuple> rows, std::span<const VarId> vars,
                                         std::size_t cap, BatchPool* pool = nullptr);

}  // namespace vqe
