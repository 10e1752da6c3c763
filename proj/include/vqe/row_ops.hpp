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
#include <unordered_map>
#include <vector>

#include "vqe/aggregate.hpp"
#include "vqe/batch_ops.hpp"
#include "vqe/expr.hpp"
#include "vqe/operator.hpp"

namespace vqe {

/// Index scan handing out one row per next().
class RowScan final : public RowOperator, public StorageReader {
 public:
  RowScan(ExecContext& ctx, ScanSpec spec);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

  std::uint64_t rows_read() const override { return cursor_.rows_read(); }
  std::string reader_label() const override { return spec_.label; }

 private:
  ScanSpec spec_;
  RangeCursor cursor_;
  std::vector<std::pair<VarId, std::size_t>> bind_;  // var -> permuted component
  std::vector<std::pair<std::size_t, std::size_t>> equal_components_;
  RowTuple row_;
  bool done_ = false;
};

/// Classic two-pointer merge join; the lagging side is skipped to the other
/// side's key. Variables shared beyond the key must agree.
class RowMergeJoin final : public RowOperator {
 public:
  RowMergeJoin(ExecContext& ctx, std::unique_ptr<RowOperator> left, std::unique_ptr<RowOperator> right, VarId key,
               std::vector<VarId> output_vars);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  bool pull(RowOperator& child, std::optional<RowTuple>& slot);
  bool combine(const RowTuple& l, const RowTuple& r);

  ExecContext* ctx_;
  std::unique_ptr<RowOperator> left_, right_;
  VarId key_;
  std::vector<VarId> secondary_;
  std::optional<RowTuple> lrow_, rrow_;  // lookahead rows
  bool left_done_ = false, right_done_ = false;
  bool in_group_ = false;
  TermId ordinal_{};
  std::vector<RowTuple> group_;  // right rows of the current ordinal
  std::size_t gi_ = 0;
  RowTuple out_;
  bool done_ = false;
};

/// Hash join on the shared variables (a cartesian product when there are
/// none). The build side is drained on the first call.
class RowHashJoin final : public RowOperator {
 public:
  RowHashJoin(ExecContext& ctx, std::unique_ptr<RowOperator> probe, std::unique_ptr<RowOperator> build,
              std::vector<VarId> key_vars, std::vector<VarId> output_vars);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  void build_table();
  std::size_t hash_key(const RowTuple& row) const;
  bool compatible(const RowTuple& a, const RowTuple& b) const;

  ExecContext* ctx_;
  std::unique_ptr<RowOperator> probe_, build_;
  std::vector<VarId> keys_;
  std::vector<VarId> shared_;
  bool built_ = false;
  std::vector<RowTuple> rows_;
  std::unordered_map<std::size_t, std::vector<std::uint32_t>> table_;
  const RowTuple* probe_row_ = nullptr;
  const std::vector<std::uint32_t>* bucket_ = nullptr;
  std::size_t bi_ = 0;
  RowTuple out_;
  bool done_ = false;
};

class RowFilter final : public RowOperator {
 public:
  RowFilter(ExecContext& ctx, std::unique_ptr<RowOperator> child, FilterExpr expr);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  ExecContext* ctx_;
  std::unique_ptr<RowOperator> child_;
  FilterExpr expr_;
  bool done_ = false;
};

/// Hash-based DISTINCT over the given variables.
class RowDistinct final : public RowOperator {
 public:
  RowDistinct(ExecContext& ctx, std::unique_ptr<RowOperator> child, std::vector<VarId> vars);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<TermId>& k) const noexcept;
  };
  ExecContext* ctx_;
  std::unique_ptr<RowOperator> child_;
  std::unordered_map<std::vector<TermId>, bool, KeyHash> seen_;
  RowTuple out_;
  bool done_ = false;
};

class RowSort final : public RowOperator {
 public:
  RowSort(ExecContext& ctx, std::unique_ptr<RowOperator> child, VarId key);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  void materialize();

  ExecContext* ctx_;
  std::unique_ptr<RowOperator> child_;
  VarId key_;
  bool materialized_ = false;
  std::vector<RowTuple> rows_;
  std::size_t pos_ = 0;
};

/// Hash-based grouping over arbitrary input; output ordered by group key.
class HashGroup final : public RowOperator {
 public:
  HashGroup(ExecContext& ctx, std::unique_ptr<RowOperator> child, std::optional<VarId> group_var,
            std::vector<AggregateSpec> aggregates);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  void materialize();

  ExecContext* ctx_;
  std::unique_ptr<RowOperator> child_;
  std::optional<VarId> group_var_;
  std::vector<AggregateSpec> aggs_;
  bool materialized_ = false;
  std::vector<RowTuple> out_rows_;
  std::size_t pos_ = 0;
};

/// Narrows rows to the projected variables (others are reset to unbound).
class RowProject final : public RowOperator {
 public:
  RowProject(ExecContext& ctx, std::unique_ptr<RowOperator> child, std::vector<VarId> output_vars);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  std::unique_ptr<RowOperator> child_;
  RowTuple out_;
};

class RowLimit final : public RowOperator {
 public:
  RowLimit(ExecContext& ctx, std::unique_ptr<RowOperator> child, std::uint64_t limit);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  std::unique_ptr<RowOperator> child_;
  std::uint64_t limit_;
  std::uint64_t emitted_ = 0;
};

/// Concatenation, or a sorted merge when sort_var is set.
class RowUnion final : public RowOperator {
 public:
  RowUnion(ExecContext& ctx, std::vector<std::unique_ptr<RowOperator>> branches, std::vector<VarId> output_vars,
           std::optional<VarId> sort_var);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

 private:
  std::vector<std::unique_ptr<RowOperator>> branches_;
  std::vector<std::optional<RowTuple>> heads_;
  std::vector<bool> done_;
  std::vector<std::optional<TermId>> pending_skip_;
  std::size_t current_ = 0;
  RowTuple out_;
};

/// Pivots batches to rows. skip(k) drops buffered rows below k and reaches
/// the child only once the buffered batch is used up.
class BatchToRow final : public RowOperator {
 public:
  BatchToRow(ExecContext& ctx, std::unique_ptr<BatchOperator> child);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

  BatchOperator& child() { return *child_; }

 private:
  std::unique_ptr<BatchOperator> child_;
  BatchHandle batch_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> slots_;  // VarId value per column
  RowTuple row_;
  bool done_ = false;
};

/// Packs rows into batches of at most `cap` rows.
class RowToBatch final : public BatchOperator {
 public:
  RowToBatch(ExecContext& ctx, std::unique_ptr<RowOperator> child, std::size_t cap);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

  RowOperator& child() { return *child_; }

 private:
  ExecContext* ctx_;
  std::unique_ptr<RowOperator> child_;
  std::size_t cap_;
  bool done_ = false;
};

/// Drains a row operator (test and session helper).
std::vector<RowTuple> drain_rows(RowOperator& op);

}  // namespace vqe
