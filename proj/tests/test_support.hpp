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
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "vqe/batch_ops.hpp"
#include "vqe/operator.hpp"
#include "vqe/row_ops.hpp"
#include "vqe/storage.hpp"

namespace vqe::test {

/// "Alice" -> <http://example.org/Alice>, "42" -> integer literal,
/// "\"x\"" -> plain literal.
Term term(const std::string& s);

using Spo = std::tuple<std::string, std::string, std::string>;
TripleStore make_store(const std::vector<Spo>& triples);

/// The three-triple example graph (Alice knows Bob and Charlie, Bob works
/// at ACME).
TripleStore example_graph();

/// Random graph: up to max_triples triples over at most max_terms terms
/// (entities, 4 predicates, a few integer literals).
TripleStore random_graph(std::mt19937_64& rng, std::size_t max_triples = 500, std::size_t max_terms = 40);

/// Random query text over the vocabulary of random_graph: 2 to 4 connected
/// patterns, optionally a != filter, optionally a grouping, aggregate or
/// DISTINCT.
std::string random_query(std::mt19937_64& rng);

/// Batch source replaying fixed rows in chunks of `chunk` rows. Rows are
/// indexed by VarId (full width). skip(k) drops rows whose key is below k.
class ScriptedBatchOp final : public BatchOperator {
 public:
  ScriptedBatchOp(ExecContext& ctx, std::vector<VarId> vars, std::optional<VarId> sort_var,
                  std::vector<RowTuple> rows, std::size_t chunk);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

  CallStats calls;
  std::size_t rows_pulled = 0;

 private:
  ExecContext* ctx_;
  std::vector<RowTuple> rows_;
  std::size_t chunk_;
  std::size_t pos_ = 0;
};

/// Row source replaying fixed rows.
class ScriptedRowOp final : public RowOperator {
 public:
  ScriptedRowOp(std::vector<VarId> vars, std::optional<VarId> sort_var, std::vector<RowTuple> rows);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

  CallStats calls;

 private:
  std::vector<RowTuple> rows_;
  std::size_t pos_ = 0;
};

/// Row over `width` variables with the given (VarId, value) bindings.
RowTuple row(std::size_t width, std::initializer_list<std::pair<std::uint32_t, std::uint64_t>> binds);

std::vector<VarId> vars(std::initializer_list<std::uint32_t> ids);

/// Rows as a sorted list, for multiset comparison.
std::vector<RowTuple> sorted(std::vector<RowTuple> rows);

/// Projects full-width rows onto the given variables, then sorts.
std::vector<RowTuple> project_sorted(const std::vector<RowTuple>& rows, const std::vector<VarId>& vs);

}  // namespace vqe::test
