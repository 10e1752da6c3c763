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

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace vqe {

/// Dictionary-encoded RDF term. Value 0 is the NULL marker and is never
/// assigned to a term.
struct TermId {
  std::uint64_t value = 0;

  constexpr bool is_null() const { return value == 0; }
  friend constexpr auto operator<=>(TermId, TermId) = default;
};

inline constexpr TermId kNullId{0};

/// Per-query variable identifier. Dense from 0 in order of first appearance.
struct VarId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(VarId, VarId) = default;
};

/// Subject, predicate, object.
using Triple = std::array<TermId, 3>;

/// A solution row for the tuple-at-a-time engine, indexed by VarId.value.
/// Unbound variables hold the NULL marker.
using RowTuple = std::vector<TermId>;

enum class TriplePosition : std::uint8_t { kSubject = 0, kPredicate = 1, kObject = 2 };

}  // namespace vqe

template <>
struct std::hash<vqe::TermId> {
  std::size_t operator()(vqe::TermId id) const noexcept {
    // splitmix64 finalizer; ids are dense so the identity hash clusters badly.
    std::uint64_t x = id.value + 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(x ^ (x >> 31));
  }
};

template <>
struct std::hash<vqe::VarId> {
  std::size_t operator()(vqe::VarId v) const noexcept { return std::hash<std::uint32_t>{}(v.value); }
};
