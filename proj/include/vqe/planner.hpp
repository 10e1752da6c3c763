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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vqe/aggregate.hpp"
#include "vqe/expr.hpp"
#include "vqe/query.hpp"
#include "vqe/storage.hpp"

namespace vqe {

enum class Engine : std::uint8_t { kBarq, kLegacy, kAuto };
std::string_view to_string(Engine e);

enum class ExecTag : std::uint8_t { kBatch, kRow };

enum class PlanKind : std::uint8_t {
  kScan,
  kMergeJoin,
  kHashJoin,
  kFilter,
  kGroup,
  kDistinct,
  kUnion,
  kSort,
  kProject,
  kLimit
};
std::string_view to_string(PlanKind k);

struct PlanNode {
  PlanKind kind = PlanKind::kScan;
  std::vector<std::unique_ptr<PlanNode>> children;

  /// Columns this node emits (after pruning).
  std::vector<VarId> output_vars;
  /// Variables bound in every output row / in some output row.
  std::vector<VarId> bound_vars;
  std::vector<VarId> maybe_vars;
  std::optional<VarId> sort_var;

  double est_rows = 0;
  /// Estimated distinct values per variable.
  std::map<std::uint32_t, double> distinct;

  // kScan
  TriplePattern pattern;
  QueryTriple source;
  // kMergeJoin (key) / kHashJoin (join_vars, possibly empty) / kSort (key)
  VarId key{};
  std::vector<VarId> join_vars;
  // kFilter
  Expr expr;
  FilterExpr filter;
  // kGroup
  std::optional<VarId> group_var;
  std::vector<AggregateSpec> aggregates;
  bool streaming = false;
  // kDistinct: over output_vars
  // kLimit
  std::uint64_t limit = 0;

  ExecTag tag = ExecTag::kRow;
  std::string label;

  std::unique_ptr<PlanNode> clone() const;
  /// Has a vectorized implementation.
  bool batch_capable() const;
  /// Merge join whose estimated output exceeds every child's estimate.
  bool amplifying() const;
};

struct LogicalPlan {
  std::unique_ptr<PlanNode> root;
  /// Name of each VarId (hidden blank-node variables start with "_:").
  std::vector<std::string> var_names;
  /// Result columns in output order.
  std::vector<std::string> result_names;
  std::vector<VarId> result_vars;

  std::size_t num_vars() const { return var_names.size(); }
};

struct PlannerOptions {
  Engine engine = Engine::kAuto;
  /// Cost multiplier for amplifying merge joins run vectorized. 1 disables it.
  double merge_discount = 0.5;
};

/// Per-node cost weights.
double node_weight(PlanKind k);

/// Σ (rows_in + rows_out) × weight over the subtree; scans count their
/// estimate as input.
double plan_cost(const PlanNode& node, const PlannerOptions& opts);

/// Parse tree to logical plan: greedy join order by exact counts, merge or
/// hash join per step by cost, filter pushing, variable pruning. Executor
/// tags are left for choose_executors.
LogicalPlan plan_query(const Query& q, const TripleStore& store, const PlannerOptions& opts = {});

/// Tags every node batch or row.
void choose_executors(PlanNode& root, Engine engine);

/// Number of parent/child pairs whose tags differ.
std::size_t count_boundaries(const PlanNode& root);

/// Indented plan text with estimates and tags.
std::string explain(const PlanNode& root);

}  // namespace vqe
