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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vqe/aggregate.hpp"
#include "vqe/batch.hpp"
#include "vqe/expr.hpp"
#include "vqe/operator.hpp"
#include "vqe/storage.hpp"

namespace vqe {

/// Decides how many rows a scan produces per next() from the call pattern of
/// its parent: doubling after every next() not preceded by a skip(), back to
/// the minimum on skip() or reset(). In fixed mode it always answers max.
class AdaptiveSizer {
 public:
  AdaptiveSizer(std::size_t min_size, std::size_t max_size, bool adaptive, std::size_t grow_factor = 2);

  /// Size for the batch about to be produced; advances the policy.
  std::size_t on_next();
  void on_skip();
  void on_reset();

  std::size_t current_size() const { return current_; }
  std::size_t min_size() const { return min_; }
  std::size_t max_size() const { return max_; }
  bool adaptive() const { return adaptive_; }
  const CallStats& observed() const { return observed_; }

 private:
  std::size_t min_, max_, grow_;
  bool adaptive_;
  std::size_t current_;
  bool skipped_since_next_ = false;
  CallStats observed_;
};

/// What a scan reads and emits.
struct ScanSpec {
  TriplePattern pattern;
  std::optional<VarId> sort_var;
  /// Subset of the pattern variables to emit; must contain sort_var.
  std::vector<VarId> output_vars;
  std::string label;
};

/// Index scan producing batches of sizer-chosen size.
class VScan final : public BatchOperator, public StorageReader {
 public:
  VScan(ExecContext& ctx, ScanSpec spec);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

  std::uint64_t rows_read() const override { return cursor_.rows_read(); }
  std::string reader_label() const override { return spec_.label; }
  const AdaptiveSizer& sizer() const { return sizer_; }
  /// Sizes of the batches returned so far, in order.
  const std::vector<std::size_t>& batch_sizes() const { return batch_sizes_; }

 private:
  ExecContext* ctx_;
  ScanSpec spec_;
  RangeCursor cursor_;
  AdaptiveSizer sizer_;
  std::vector<std::size_t> component_;  // per output column
  std::vector<std::pair<std::size_t, std::size_t>> equal_components_;
  std::vector<std::size_t> batch_sizes_;
  bool done_ = false;
};

/// Three-phase merge join on one key variable, with optional secondary key
/// variables (shared by both children) checked by a filter pass.
class VMergeJoin final : public BatchOperator {
 public:
  /// output_vars: the columns to emit (a subset of the children's variables).
  VMergeJoin(ExecContext& ctx, std::unique_ptr<BatchOperator> left, std::unique_ptr<BatchOperator> right, VarId key,
             std::vector<VarId> output_vars);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

  BatchOperator& left() { return *left_; }
  BatchOperator& right() { return *right_; }
  /// Skip targets passed to the children, in call order.
  const std::vector<TermId>& left_skips() const { return left_skips_; }
  const std::vector<TermId>& right_skips() const { return right_skips_; }
  std::size_t right_buffer_peak_bytes() const { return rbuf_peak_bytes_; }

 private:
  struct Side {
    BatchHandle batch;
    std::size_t pos = 0;  // index into the selection vector
    std::size_t key_col = 0;
    bool done = false;
    std::optional<TermId> pending_skip;
    std::optional<TermId> last_key;  // for the sortedness check across batches
  };

  bool fetch(Side& side, BatchOperator& child, std::vector<TermId>& skip_log);
  TermId key_of(const Side& side, std::size_t i) const;
  std::size_t active(const Side& side) const { return side.batch->active_count(); }
  void stage_right_group();
  std::size_t build(ColumnBatch& out, std::size_t at, std::size_t space);
  void forward_skip(Side& side, TermId key);
  void clear_group();

  ExecContext* ctx_;
  std::unique_ptr<BatchOperator> left_, right_;
  VarId key_;
  AdaptiveSizer sizer_;

  // Output column sources.
  std::vector<VarId> left_cols_;   // vars copied from the left (expanded)
  std::vector<VarId> right_cols_;  // vars copied from the right buffer (repeated)
  std::vector<VarId> secondary_;
  std::vector<VarId> rbuf_vars_;  // right columns staged per group

  Side l_, r_;
  bool done_ = false;

  // Current group.
  bool in_group_ = false;
  TermId ordinal_{};
  std::size_t gl_end_ = 0;   // end of the left run in the current left batch
  std::size_t gl_pos_ = 0;   // next left row of the run to emit
  std::size_t gr_off_ = 0;   // offset into the right buffer for a partially emitted left row
  std::vector<std::vector<TermId>> rbuf_;
  std::size_t rbuf_rows_ = 0;
  std::size_t rbuf_peak_bytes_ = 0;

  std::vector<TermId> scratch_left_, scratch_right_;
  std::vector<std::uint8_t> keep_;
  std::vector<TermId> left_skips_, right_skips_;
};

/// Selection-vector filter.
class VFilter final : public BatchOperator {
 public:
  VFilter(ExecContext& ctx, std::unique_ptr<BatchOperator> child, FilterExpr expr);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  ExecContext* ctx_;
  std::unique_ptr<BatchOperator> child_;
  FilterExpr expr_;
  bool done_ = false;
};

/// Streaming aggregation over input sorted by the single group variable, or
/// a global aggregate when group_var is unset.
class VStreamGroup final : public BatchOperator {
 public:
  VStreamGroup(ExecContext& ctx, std::unique_ptr<BatchOperator> child, std::optional<VarId> group_var,
               std::vector<AggregateSpec> aggregates);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  void open_group(TermId key);
  void close_group(ColumnBatch& out, std::size_t& n);
  void accumulate(const ColumnBatch& in, std::size_t from, std::size_t to);

  ExecContext* ctx_;
  std::unique_ptr<BatchOperator> child_;
  std::optional<VarId> group_var_;
  std::vector<AggregateSpec> aggs_;
  std::vector<std::optional<std::size_t>> arg_cols_;

  BatchHandle in_;
  std::size_t pos_ = 0;
  bool child_done_ = false;
  bool done_ = false;
  bool have_group_ = false;
  bool emitted_any_ = false;
  TermId group_key_{};
  std::optional<TermId> last_key_;
  std::vector<AggregateState> states_;
  std::vector<AggregateState> partial_;
};

/// DISTINCT over the sort variable only; skips the child past each emitted
/// key.
class VDistinct final : public BatchOperator {
 public:
  VDistinct(ExecContext& ctx, std::unique_ptr<BatchOperator> child, VarId key);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  ExecContext* ctx_;
  std::unique_ptr<BatchOperator> child_;
  VarId key_;
  BatchHandle in_;
  std::size_t pos_ = 0;
  std::optional<TermId> last_;
  std::optional<TermId> pending_skip_;
  bool done_ = false;
};

/// Union of branches: a k-way merge on sort_var when set, else concatenation.
/// Variables missing from a branch are padded with the NULL marker.
class VUnion final : public BatchOperator {
 public:
  VUnion(ExecContext& ctx, std::vector<std::unique_ptr<BatchOperator>> branches, std::vector<VarId> output_vars,
         std::optional<VarId> sort_var);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  struct Branch {
    std::unique_ptr<BatchOperator> op;
    BatchHandle batch;
    std::size_t pos = 0;
    bool done = false;
    std::optional<TermId> pending_skip;
    std::size_t key_col = 0;
  };
  bool ensure(Branch& b);
  BatchHandle next_concat();
  BatchHandle next_merge();

  ExecContext* ctx_;
  std::vector<Branch> branches_;
  std::size_t current_ = 0;
  bool done_ = false;
};

/// Pipeline breaker: drains the child, sorts by `key`, streams batches.
class VSort final : public BatchOperator {
 public:
  VSort(ExecContext& ctx, std::unique_ptr<BatchOperator> child, VarId key);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  void materialize();

  ExecContext* ctx_;
  std::unique_ptr<BatchOperator> child_;
  VarId key_;
  bool materialized_ = false;
  std::vector<std::vector<TermId>> cols_;
  std::vector<std::uint32_t> order_;
  std::size_t key_index_ = 0;
  std::size_t pos_ = 0;
};

/// Drops columns; zero copy.
class VProject final : public BatchOperator {
 public:
  VProject(ExecContext& ctx, std::unique_ptr<BatchOperator> child, std::vector<VarId> output_vars);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  std::unique_ptr<BatchOperator> child_;
};

class VLimit final : public BatchOperator {
 public:
  VLimit(ExecContext& ctx, std::unique_ptr<BatchOperator> child, std::uint64_t limit);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  std::unique_ptr<BatchOperator> child_;
  std::uint64_t limit_;
  std::uint64_t emitted_ = 0;
};

/// Drains a batch operator into full-width rows (test and session helper).
std::vector<RowTuple> drain_rows(BatchOperator& op, std::size_t width);

}  // namespace vqe
