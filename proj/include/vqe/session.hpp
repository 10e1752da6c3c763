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

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vqe/operator.hpp"
#include "vqe/planner.hpp"
#include "vqe/profiler.hpp"
#include "vqe/query.hpp"
#include "vqe/result.hpp"
#include "vqe/storage.hpp"

namespace vqe {

/// Where batch/row adapters go. kMinimal follows the planner's tags; the
/// other two re-tag the plan to exercise adapters (tests).
enum class AdapterMode : std::uint8_t {
  kMinimal,
  /// Alternate tags level by level wherever a batch implementation exists.
  kEveryBoundary,
  /// Random tags (seeded) wherever a batch implementation exists.
  kRandom
};

struct QueryOptions {
  Engine engine = Engine::kAuto;
  ExecOptions exec;
  bool profile = false;
  double merge_discount = 0.5;
  AdapterMode adapters = AdapterMode::kMinimal;
  std::uint64_t adapter_seed = 0;
};

struct ScanReadCount {
  std::string label;
  std::uint64_t rows_read = 0;
};

struct QueryResult {
  ResultSet results;
  /// Set when profiling was requested.
  std::unique_ptr<ProfileNode> profile;
  std::string plan;
  std::uint64_t rows_read = 0;
  std::vector<ScanReadCount> scans;
  std::size_t adapters = 0;
  std::chrono::nanoseconds elapsed{0};
};

/// A translated operator tree plus what is needed to drive and inspect it.
struct Executable {
  std::unique_ptr<BatchOperator> batch_root;
  std::unique_ptr<RowOperator> row_root;
  std::unique_ptr<ProfileNode> profile;
  std::unique_ptr<ProfileTimer> timer;
  std::size_t adapters = 0;
  std::vector<std::function<void()>> finalizers;

  /// Drains the root into full-width rows.
  std::vector<RowTuple> drain(std::size_t width);
  /// Copies storage counters into the profile.
  void finalize();
};

/// Re-tags the plan per the adapter mode (kMinimal leaves it untouched).
void apply_adapter_mode(PlanNode& root, AdapterMode mode, std::uint64_t seed);

/// Builds the operator tree for the tagged plan, inserting an adapter at every
/// tag boundary; wraps each operator in a profiler when `profile` is set.
Executable translate(const LogicalPlan& plan, ExecContext& ctx, bool profile);

QueryResult run_query(const TripleStore& store, const Query& query, const QueryOptions& options = {});
QueryResult run_query(const TripleStore& store, std::string_view text, const QueryOptions& options = {});

}  // namespace vqe
