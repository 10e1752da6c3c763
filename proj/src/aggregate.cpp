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

#include "vqe/aggregate.hpp"

#include <fmt/format.h>

namespace vqe {

void AggregateState::add(TermId value, std::optional<long long> numeric) {
  if (value.is_null()) return;
  switch (kind_) {
    case AggKind::kCount: ++count_; return;
    case AggKind::kCountDistinct: distinct_.insert(value); return;
    case AggKind::kSum:
    case AggKind::kAvg:
      if (numeric) {
        sum_ += *numeric;
        ++count_;
      }
      return;
    case AggKind::kMin:
    case AggKind::kMax: {
      if (!numeric) return;
      bool better = !has_value_;
      if (has_value_) {
        if (*numeric == best_value_) {
          better = value < best_id_;
        } else {
          better = kind_ == AggKind::kMin ? *numeric < best_value_ : *numeric > best_value_;
        }
      }
      if (better) {
        has_value_ = true;
        best_value_ = *numeric;
        best_id_ = value;
      }
      return;
    }
  }
}

void AggregateState::merge(const AggregateState& other) {
  switch (kind_) {
    case AggKind::kCount: count_ += other.count_; return;
    case AggKind::kCountDistinct: distinct_.insert(other.distinct_.begin(), other.distinct_.end()); return;
    case AggKind::kSum:
    case AggKind::kAvg:
      sum_ += other.sum_;
      count_ += other.count_;
      return;
    case AggKind::kMin:
    case AggKind::kMax:
      if (other.has_value_) add(other.best_id_, other.best_value_);
      return;
  }
}

std::string format_average(long long sum, std::uint64_t count) {
  std::string s = fmt::format("{}", static_cast<double>(sum) / static_cast<double>(count));
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::optional<Term> AggregateState::result_term() const {
  switch (kind_) {
    case AggKind::kCount: return Term::integer(static_cast<long long>(count_));
    case AggKind::kCountDistinct: return Term::integer(static_cast<long long>(distinct_.size()));
    case AggKind::kSum:
      if (count_ == 0) return std::nullopt;
      return Term::integer(sum_);
    case AggKind::kAvg:
      if (count_ == 0) return std::nullopt;
      return Term::typed(format_average(sum_, count_), kXsdDecimal);
    case AggKind::kMin:
    case AggKind::kMax: return std::nullopt;
  }
  return std::nullopt;
}

TermId AggregateState::finish(TermOverlay& terms) const {
  if (kind_ == AggKind::kMin || kind_ == AggKind::kMax) return has_value_ ? best_id_ : kNullId;
  auto t = result_term();
  return t ? terms.intern(*t) : kNullId;
}

std::size_t AggregateState::memory_bytes() const { return sizeof(*this) + distinct_.size() * 32; }

}  // namespace vqe
