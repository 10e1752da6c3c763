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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vqe/operator.hpp"

namespace vqe {

/// Counters of one operator in one execution.
struct ProfileNode {
  std::string label;
  CallStats stats;
  /// Own time, children excluded.
  std::chrono::nanoseconds exclusive{0};
  /// Time inside this operator's calls including its children.
  std::chrono::nanoseconds inclusive{0};
  bool batched = false;
  /// Rows handed out by the storage cursor (scans only).
  std::optional<std::uint64_t> rows_read;
  std::vector<std::unique_ptr<ProfileNode>> children;

  ProfileNode* add_child(std::string child_label, bool child_batched);
};

/// Stack of running operator calls; lets a wrapper subtract the time spent
/// in the wrappers it calls.
class ProfileTimer {
 public:
  using Clock = std::chrono::steady_clock;

  void enter() { child_time_.push_back(std::chrono::nanoseconds{0}); }
  /// Ends the innermost call that began at `start`; returns its exclusive time.
  std::chrono::nanoseconds leave(Clock::time_point start, std::chrono::nanoseconds& inclusive);

 private:
  std::vector<std::chrono::nanoseconds> child_time_;
};

/// Forwards every call to the wrapped operator and records it in `node`.
class ProfiledBatch final : public BatchOperator {
 public:
  ProfiledBatch(std::unique_ptr<BatchOperator> inner, ProfileNode* node, ProfileTimer* timer);

  BatchHandle next() override;
  void skip(TermId key) override;
  void reset() override;

  BatchOperator& inner() { return *inner_; }
  /// Copies storage counters into the node; call before the tree is destroyed.
  void finalize();

 private:
  std::unique_ptr<BatchOperator> inner_;
  ProfileNode* node_;
  ProfileTimer* timer_;
};

class ProfiledRow final : public RowOperator {
 public:
  ProfiledRow(std::unique_ptr<RowOperator> inner, ProfileNode* node, ProfileTimer* timer);

  const RowTuple* next() override;
  void skip(TermId key) override;
  void reset() override;

  RowOperator& inner() { return *inner_; }
  void finalize();

 private:
  std::unique_ptr<RowOperator> inner_;
  ProfileNode* node_;
  ProfileTimer* timer_;
};

/// "46.7M", "5.7K", "950".
std::string abbreviate_count(std::uint64_t n);

/// Indented tree, one line per operator:
///   Label, results: 46.7M [46712345] (next: 3, skip: 1), wall time: 42.3%, batched
/// Shares are exclusive time over the root's inclusive time.
std::string render_profile(const ProfileNode& root);

/// One JSON object per node with all counters, children nested.
std::string profile_to_json(const ProfileNode& root);

}  // namespace vqe
