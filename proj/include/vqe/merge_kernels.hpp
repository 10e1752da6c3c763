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
#include <span>
#include <vector>

#include "vqe/types.hpp"

namespace vqe {

/// A matching pair of key runs: rows [left_begin, left_end) of the left
/// input and [right_begin, right_end) of the right input all carry `ordinal`.
struct JoinGroup {
  TermId ordinal;
  std::size_t left_begin = 0, left_end = 0;
  std::size_t right_begin = 0, right_end = 0;

  std::size_t left_len() const { return left_end - left_begin; }
  std::size_t right_len() const { return right_end - right_begin; }
  bool operator==(const JoinGroup&) const = default;
};

struct ProbeResult {
  std::vector<JoinGroup> groups;
  /// Greatest key on each side that found no partner, if any.
  std::optional<TermId> left_last_unmatched;
  std::optional<TermId> right_last_unmatched;
};

/// Probe over two ascending key arrays. NULL keys never match.
ProbeResult probe_groups(std::span<const TermId> left, std::span<const TermId> right);

/// First index i in [from, n) with keys[sel[i]] >= key (sel may be null for
/// identity). Gallops from `from`.
std::size_t lower_bound_active(const TermId* keys, const std::uint32_t* sel, std::size_t from, std::size_t n,
                               TermId key);

/// End of the run of equal keys starting at `from`.
std::size_t run_end(const TermId* keys, const std::uint32_t* sel, std::size_t from, std::size_t n);

/// Build step for one left column: each of the n selected values is written
/// `times` times consecutively.
void expand_each(const TermId* src, const std::uint32_t* sel, std::size_t n, std::size_t times, TermId* dst);

/// Build step for one right column: the contiguous range src[0, n) is
/// written `times` times.
void repeat_range(const TermId* src, std::size_t n, std::size_t times, TermId* dst);

/// Writes `value` n times.
void fill_value(TermId value, std::size_t n, TermId* dst);

}  // namespace vqe
