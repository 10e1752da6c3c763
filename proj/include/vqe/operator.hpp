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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vqe/batch.hpp"
#include "vqe/dictionary.hpp"
#include "vqe/errors.hpp"
#include "vqe/storage.hpp"
#include "vqe/types.hpp"

namespace vqe {

struct ExecOptions {
  std::size_t batch_max = kDefaultBatchMax;
  std::size_t min_batch = 16;
  bool adaptive = true;
  /// Per blocking operator (sort, hash table, distinct set).
  std::size_t memory_cap = std::size_t{2} << 30;
  /// Per merge join, bytes staged for one right-side group.
  std::size_t right_buffer_cap = std::size_t{64} << 20;
};

/// Anything that reads triples from storage and can report how many it read.
class StorageReader {
 public:
  virtual ~StorageReader() = default;
  virtual std::uint64_t rows_read() const = 0;
  virtual std::string reader_label() const = 0;
};

/// State shared by all operators of one execution. Must outlive the operator
/// tree (batches return to `pool` when released).
class ExecContext {
 public:
  ExecContext(const TripleStore& store, ExecOptions options, std::size_t num_vars)
      : store_(&store), options_(options), num_vars_(num_vars), terms_(store.dictionary()) {}

  ExecContext(const ExecContext&) = delete;
  ExecContext& operator=(const ExecContext&) = delete;

  const TripleStore& store() const { return *store_; }
  const ExecOptions& options() const { return options_; }
  std::size_t num_vars() const { return num_vars_; }
  BatchPool& pool() { return pool_; }
  TermOverlay& terms() { return terms_; }
  const TermOverlay& terms() const { return terms_; }

  void register_reader(const StorageReader* reader) { readers_.push_back(reader); }
  const std::vector<const StorageReader*>& readers() const { return readers_; }
  std::uint64_t total_rows_read() const;

 private:
  const TripleStore* store_;
  ExecOptions options_;
  std::size_t num_vars_;
  BatchPool pool_;
  TermOverlay terms_;
  std::vector<const StorageReader*> readers_;
};

/// Calls received by an operator from its parent.
struct CallStats {
  std::uint64_t next_calls = 0;
  std::uint64_t skip_calls = 0;
  std::uint64_t reset_calls = 0;
  std::uint64_t rows_out = 0;
};

/// Common surface of both operator kinds.
class OperatorBase {
 public:
  OperatorBase(std::vector<VarId> output_vars, std::optional<VarId> sort_var)
      : output_vars_(std::move(output_vars)), sort_var_(sort_var) {}
  virtual ~OperatorBase() = default;

  const std::vector<VarId>& output_vars() const { return output_vars_; }
  std::optional<VarId> sort_var() const { return sort_var_; }

 protected:
  void require_sorted(const char* op) const {
    if (!sort_var_) throw ContractViolation(std::string("skip() on unsorted operator ") + op);
  }

  std::vector<VarId> output_vars_;
  std::optional<VarId> sort_var_;
};

/// Vector-Volcano operator: next() hands out a batch (null at exhaustion),
/// skip(k) drops everything with sort key below k, reset() rewinds.
class BatchOperator : public OperatorBase {
 public:
  using OperatorBase::OperatorBase;

  virtual BatchHandle next() = 0;
  virtual void skip(TermId key) = 0;
  virtual void reset() = 0;
};

/// Tuple-at-a-time operator. next() returns a row owned by the operator that
/// stays valid until the following call on it, or null at exhaustion.
class RowOperator : public OperatorBase {
 public:
  using OperatorBase::OperatorBase;

  virtual const RowTuple* next() = 0;
  virtual void skip(TermId key) = 0;
  virtual void reset() = 0;
};

}  // namespace vqe
