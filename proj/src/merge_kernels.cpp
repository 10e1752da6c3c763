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

#include "vqe/merge_kernels.hpp"

#include <algorithm>
#include <cstring>

namespace vqe {

namespace {

inline TermId key_at(const TermId* keys, const std::uint32_t* sel, std::size_t i) {
  return sel != nullptr ? keys[sel[i]] : keys[i];
}

}  // namespace

std::size_t lower_bound_active(const TermId* keys, const std::uint32_t* sel, std::size_t from, std::size_t n,
                               TermId key) {
  if (from >= n || key_at(keys, sel, from) >= key) return from;
  std::size_t lo = from;
  std::size_t step = 1;
  std::size_t hi = from + 1;
  while (hi < n && key_at(keys, sel, hi) < key) {
    lo = hi;
    step *= 2;
    hi = from + step;
  }
  hi = std::min(hi, n);
  // Invariant: key_at(lo) < key, and hi == n or key_at(hi) >= key.
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (key_at(keys, sel, mid) < key) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

std::size_t run_end(const TermId* keys, const std::uint32_t* sel, std::size_t from, std::size_t n) {
  if (from >= n) return n;
  const TermId k = key_at(keys, sel, from);
  return lower_bound_active(keys, sel, from, n, TermId{k.value + 1});
}

ProbeResult probe_groups(std::span<const TermId> left, std::span<const TermId> right) {
  ProbeResult out;
  const std::size_t nl = left.size();
  const std::size_t nr = right.size();
  std::size_t i = lower_bound_active(left.data(), nullptr, 0, nl, TermId{1});
  std::size_t j = lower_bound_active(right.data(), nullptr, 0, nr, TermId{1});
  auto note_left = [&](std::size_t from, std::size_t to) {
    if (to > from) out.left_last_unmatched = left[to - 1];
  };
  auto note_right = [&](std::size_t from, std::size_t to) {
    if (to > from) out.right_last_unmatched = right[to - 1];
  };
  while (i < nl && j < nr) {
    if (left[i] < right[j]) {
      std::size_t k = lower_bound_active(left.data(), nullptr, i, nl, right[j]);
      note_left(i, k);
      i = k;
    } else if (right[j] < left[i]) {
      std::size_t k = lower_bound_active(right.data(), nullptr, j, nr, left[i]);
      note_right(j, k);
      j = k;
    } else {
      JoinGroup g;
      g.ordinal = left[i];
      g.left_begin = i;
      g.left_end = run_end(left.data(), nullptr, i, nl);
      g.right_begin = j;
      g.right_end = run_end(right.data(), nullptr, j, nr);
      i = g.left_end;
      j = g.right_end;
      out.groups.push_back(g);
    }
  }
  note_left(i, nl);
  note_right(j, nr);
  return out;
}

void expand_each(const TermId* src, const std::uint32_t* sel, std::size_t n, std::size_t times, TermId* dst) {
  for (std::size_t i = 0; i < n; ++i) {
    const TermId v = sel != nullptr ? src[sel[i]] : src[i];
    TermId* d = dst + i * times;
    for (std::size_t t = 0; t < times; ++t) d[t] = v;
  }
}

void repeat_range(const TermId* src, std::size_t n, std::size_t times, TermId* dst) {
  for (std::size_t t = 0; t < times; ++t) std::memcpy(dst + t * n, src, n * sizeof(TermId));
}

void fill_value(TermId value, std::size_t n, TermId* dst) { std::fill(dst, dst + n, value); }

}  // namespace vqe
