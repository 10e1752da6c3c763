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

#include "vqe/dictionary.hpp"

#include "vqe/errors.hpp"

namespace vqe {

TermId Dictionary::encode(const Term& term) {
  if (auto it = forward_.find(term); it != forward_.end()) return it->second;
  if (frozen_) throw FrozenStoreError("dictionary is frozen; cannot encode new terms");
  term.validate();
  TermId id{inverse_.size() + 1};
  forward_.emplace(term, id);
  inverse_.push_back(term);
  numeric_.push_back(integer_value(term));
  return id;
}

TermId Dictionary::find(const Term& term) const {
  auto it = forward_.find(term);
  return it == forward_.end() ? kNullId : it->second;
}

const Term& Dictionary::decode(TermId id) const {
  if (id.is_null()) throw NullIdError();
  if (id.value > inverse_.size()) throw UnknownIdError(id.value);
  return inverse_[id.value - 1];
}

TermId TermOverlay::intern(const Term& term) {
  if (TermId id = base_->find(term); !id.is_null()) return id;
  if (auto it = forward_.find(term); it != forward_.end()) return it->second;
  TermId id{base_->size() + extra_.size() + 1};
  forward_.emplace(term, id);
  extra_.push_back(term);
  numeric_.push_back(integer_value(term));
  return id;
}

const Term& TermOverlay::decode(TermId id) const {
  if (id.value <= base_->size()) return base_->decode(id);
  std::size_t idx = id.value - base_->size() - 1;
  if (idx >= extra_.size()) throw UnknownIdError(id.value);
  return extra_[idx];
}

std::optional<long long> TermOverlay::numeric_value(TermId id) const {
  if (id.value <= base_->size()) return base_->numeric_value(id);
  std::size_t idx = id.value - base_->size() - 1;
  return idx < numeric_.size() ? numeric_[idx] : std::nullopt;
}

}  // namespace vqe
