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

#include "vqe/row_ops.hpp"

#include <algorithm>

#include "vqe/errors.hpp"
#include "vqe/merge_kernels.hpp"

namespace vqe {

namespace {

bool contains(const std::vector<VarId>& vs, VarId v) { return std::find(vs.begin(), vs.end(), v) != vs.end(); }

std::vector<VarId> shared_vars(const std::vector<VarId>& a, const std::vector<VarId>& b) {
  std::vector<VarId> out;
  for (VarId v : a) {
    if (contains(b, v)) out.push_back(v);
  }
  return out;
}

std::size_t row_bytes(std::size_t width) { return width * sizeof(TermId) + sizeof(RowTuple); }

}  // namespace

// ---------------------------------------------------------------------------
// RowScan

RowScan::RowScan(ExecContext& ctx, ScanSpec spec)
    : RowOperator(spec.output_vars, spec.sort_var),
      spec_(std::move(spec)),
      cursor_(ctx.store().open_scan(spec_.pattern, spec_.sort_var)),
      row_(ctx.num_vars(), kNullId) {
  const auto& slots = spec_.pattern.slots;
  for (VarId v : output_vars_) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (slots[i].is_var && slots[i].var == v) {
        bind_.emplace_back(v, cursor_.component_of(static_cast<TriplePosition>(i)));
        break;
      }
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (slots[i].is_var && slots[j].is_var && slots[i].var == slots[j].var) {
        equal_components_.emplace_back(cursor_.component_of(static_cast<TriplePosition>(i)),
                                       cursor_.component_of(static_cast<TriplePosition>(j)));
      }
    }
  }
  ctx.register_reader(this);
}

const RowTuple* RowScan::next() {
  if (done_) return nullptr;
  for (;;) {
    auto block = cursor_.next_block(1);
    if (block.empty()) {
      done_ = true;
      return nullptr;
    }
    const Triple& t = block[0];
    bool ok = true;
    for (auto [a, b] : equal_components_) ok = ok && t[a] == t[b];
    if (!ok) continue;
    for (auto [v, comp] : bind_) row_[v.value] = t[comp];
    return &row_;
  }
}

void RowScan::skip(TermId key) {
  require_sorted("Scan");
  if (!done_) cursor_.seek(key);
}

void RowScan::reset() {
  cursor_.rewind();
  done_ = false;
}

// ---------------------------------------------------------------------------
// RowMergeJoin

RowMergeJoin::RowMergeJoin(ExecContext& ctx, std::unique_ptr<RowOperator> left, std::unique_ptr<RowOperator> right,
                           VarId key, std::vector<VarId> output_vars)
    : RowOperator(std::move(output_vars), key),
      ctx_(&ctx),
      left_(std::move(left)),
      right_(std::move(right)),
      key_(key),
      out_(ctx.num_vars(), kNullId) {
  if (left_->sort_var() != key || right_->sort_var() != key) {
    throw ContractViolation("MergeJoin children must be sorted on the join key");
  }
  for (VarId v : shared_vars(left_->output_vars(), right_->output_vars())) {
    if (v != key) secondary_.push_back(v);
  }
  if (!contains(output_vars_, key)) sort_var_.reset();
}

bool RowMergeJoin::pull(RowOperator& child, std::optional<RowTuple>& slot) {
  bool& done = &child == left_.get() ? left_done_ : right_done_;
  if (done) return false;
  const RowTuple* r = child.next();
  if (r == nullptr) {
    done = true;
    return false;
  }
  slot = *r;
  return true;
}

bool RowMergeJoin::combine(const RowTuple& l, const RowTuple& r) {
  for (VarId s : secondary_) {
    if (l[s.value] != r[s.value] || l[s.value].is_null()) return false;
  }
  out_ = l;
  for (std::size_t v = 0; v < out_.size(); ++v) {
    if (out_[v].is_null()) out_[v] = r[v];
  }
  return true;
}

const RowTuple* RowMergeJoin::next() {
  if (done_) return nullptr;
  const std::size_t k = key_.value;
  for (;;) {
    if (in_group_) {
      while (gi_ < group_.size()) {
        if (combine(*lrow_, group_[gi_++])) return &out_;
      }
      lrow_.reset();
      if (!pull(*left_, lrow_)) {
        done_ = true;
        return nullptr;
      }
      if ((*lrow_)[k] == ordinal_) {
        gi_ = 0;
        continue;
      }
      in_group_ = false;
      continue;
    }
    if (!lrow_ && !pull(*left_, lrow_)) {
      done_ = true;
      return nullptr;
    }
    if (!rrow_ && !pull(*right_, rrow_)) {
      done_ = true;
      return nullptr;
    }
    const TermId lk = (*lrow_)[k];
    const TermId rk = (*rrow_)[k];
    if (lk.is_null()) {
      lrow_.reset();
      continue;
    }
    if (rk.is_null()) {
      rrow_.reset();
      continue;
    }
    if (lk < rk) {
      lrow_.reset();
      left_->skip(rk);
      continue;
    }
    if (rk < lk) {
      rrow_.reset();
      right_->skip(lk);
      continue;
    }
    ordinal_ = lk;
    group_.clear();
    const std::size_t cap = ctx_->options().right_buffer_cap;
    while (rrow_ && (*rrow_)[k] == ordinal_) {
      group_.push_back(std::move(*rrow_));
      rrow_.reset();
      if (group_.size() * row_bytes(out_.size()) > cap) {
        throw QueryMemoryExceeded("MergeJoin right-side buffer", group_.size() * row_bytes(out_.size()), cap);
      }
      pull(*right_, rrow_);
    }
    in_group_ = true;
    gi_ = 0;
  }
}

void RowMergeJoin::skip(TermId key) {
  require_sorted("MergeJoin");
  if (done_) return;
  const std::size_t k = key_.value;
  if (in_group_) {
    if (ordinal_ >= key) return;
    in_group_ = false;
    lrow_.reset();
  }
  if (lrow_ && (*lrow_)[k] < key) lrow_.reset();
  if (!lrow_ && !left_done_) left_->skip(key);
  if (rrow_ && (*rrow_)[k] < key) rrow_.reset();
  if (!rrow_ && !right_done_) right_->skip(key);
}

void RowMergeJoin::reset() {
  left_->reset();
  right_->reset();
  lrow_.reset();
  rrow_.reset();
  left_done_ = right_done_ = false;
  in_group_ = false;
  group_.clear();
  gi_ = 0;
  done_ = false;
}

// ---------------------------------------------------------------------------
// RowHashJoin

RowHashJoin::RowHashJoin(ExecContext& ctx, std::unique_ptr<RowOperator> probe, std::unique_ptr<RowOperator> build,
                         std::vector<VarId> key_vars, std::vector<VarId> output_vars)
    : RowOperator(std::move(output_vars), std::nullopt),
      ctx_(&ctx),
      probe_(std::move(probe)),
      build_(std::move(build)),
      keys_(std::move(key_vars)),
      shared_(shared_vars(probe_->output_vars(), build_->output_vars())),
      out_(ctx.num_vars(), kNullId) {}

std::size_t RowHashJoin::hash_key(const RowTuple& row) const {
  std::size_t h = 0x51ed270b27u;
  for (VarId v : keys_) h = (h ^ std::hash<TermId>{}(row[v.value])) * 0x100000001b3ULL;
  return h;
}

bool RowHashJoin::compatible(const RowTuple& a, const RowTuple& b) const {
  for (VarId v : shared_) {
    if (a[v.value] != b[v.value] || a[v.value].is_null()) return false;
  }
  return true;
}

void RowHashJoin::build_table() {
  const std::size_t cap = ctx_->options().memory_cap;
  while (const RowTuple* r = build_->next()) {
    rows_.push_back(*r);
    table_[hash_key(*r)].push_back(static_cast<std::uint32_t>(rows_.size() - 1));
    const std::size_t bytes = rows_.size() * (row_bytes(out_.size()) + 16);
    if (bytes > cap) throw QueryMemoryExceeded("HashJoin build side", bytes, cap);
  }
  built_ = true;
}

const RowTuple* RowHashJoin::next() {
  if (done_) return nullptr;
  if (!built_) build_table();
  for (;;) {
    if (bucket_ != nullptr) {
      while (bi_ < bucket_->size()) {
        const RowTuple& b = rows_[(*bucket_)[bi_++]];
        if (!compatible(*probe_row_, b)) continue;
        out_ = *probe_row_;
        for (std::size_t v = 0; v < out_.size(); ++v) {
          if (out_[v].is_null()) out_[v] = b[v];
        }
        return &out_;
      }
      bucket_ = nullptr;
    }
    probe_row_ = rows_.empty() ? nullptr : probe_->next();
    if (probe_row_ == nullptr) {
      done_ = true;
      return nullptr;
    }
    auto it = table_.find(hash_key(*probe_row_));
    if (it != table_.end()) {
      bucket_ = &it->second;
      bi_ = 0;
    }
  }
}

void RowHashJoin::skip(TermId /*key*/) { require_sorted("HashJoin"); }

void RowHashJoin::reset() {
  probe_->reset();
  build_->reset();
  built_ = false;
  rows_.clear();
  table_.clear();
  probe_row_ = nullptr;
  bucket_ = nullptr;
  done_ = false;
}

// ---------------------------------------------------------------------------
// RowFilter

RowFilter::RowFilter(ExecContext& ctx, std::unique_ptr<RowOperator> child, FilterExpr expr)
    : RowOperator(child->output_vars(), child->sort_var()), ctx_(&ctx), child_(std::move(child)), expr_(std::move(expr)) {}

const RowTuple* RowFilter::next() {
  if (done_) return nullptr;
  while (const RowTuple* r = child_->next()) {
    if (expr_.eval_row(*r, ctx_->terms()) == Truth::kTrue) return r;
  }
  done_ = true;
  return nullptr;
}

void RowFilter::skip(TermId key) {
  require_sorted("Filter");
  if (!done_) child_->skip(key);
}

void RowFilter::reset() {
  child_->reset();
  done_ = false;
}

// ---------------------------------------------------------------------------
// RowDistinct

std::size_t RowDistinct::KeyHash::operator()(const std::vector<TermId>& k) const noexcept {
  std::size_t h = 0x84222325u;
  for (TermId t : k) h = (h ^ std::hash<TermId>{}(t)) * 0x100000001b3ULL;
  return h;
}

namespace {

std::optional<VarId> kept_sort(const RowOperator& child, const std::vector<VarId>& vars) {
  auto s = child.sort_var();
  return s && contains(vars, *s) ? s : std::nullopt;
}

}  // namespace

RowDistinct::RowDistinct(ExecContext& ctx, std::unique_ptr<RowOperator> child, std::vector<VarId> vars)
    : RowOperator(vars, kept_sort(*child, vars)), ctx_(&ctx), child_(std::move(child)), out_(ctx.num_vars(), kNullId) {}

const RowTuple* RowDistinct::next() {
  if (done_) return nullptr;
  const std::size_t cap = ctx_->options().memory_cap;
  std::vector<TermId> key(output_vars_.size());
  while (const RowTuple* r = child_->next()) {
    for (std::size_t i = 0; i < output_vars_.size(); ++i) key[i] = (*r)[output_vars_[i].value];
    if (!seen_.emplace(key, true).second) continue;
    const std::size_t bytes = seen_.size() * (key.size() * sizeof(TermId) + 48);
    if (bytes > cap) throw QueryMemoryExceeded("Distinct", bytes, cap);
    for (std::size_t i = 0; i < output_vars_.size(); ++i) out_[output_vars_[i].value] = key[i];
    return &out_;
  }
  done_ = true;
  return nullptr;
}

void RowDistinct::skip(TermId key) {
  require_sorted("Distinct");
  if (!done_) child_->skip(key);
}

void RowDistinct::reset() {
  child_->reset();
  seen_.clear();
  done_ = false;
}

// ---------------------------------------------------------------------------
// RowSort

RowSort::RowSort(ExecContext& ctx, std::unique_ptr<RowOperator> child, VarId key)
    : RowOperator(child->output_vars(), key), ctx_(&ctx), child_(std::move(child)), key_(key) {}

void RowSort::materialize() {
  const std::size_t cap = ctx_->options().memory_cap;
  rows_.clear();
  while (const RowTuple* r = child_->next()) {
    rows_.push_back(*r);
    const std::size_t bytes = rows_.size() * row_bytes(r->size());
    if (bytes > cap) throw QueryMemoryExceeded("Sort", bytes, cap);
  }
  const std::size_t k = key_.value;
  std::sort(rows_.begin(), rows_.end(), [k](const RowTuple& a, const RowTuple& b) { return a[k] < b[k]; });
  pos_ = 0;
  materialized_ = true;
}

const RowTuple* RowSort::next() {
  if (!materialized_) materialize();
  if (pos_ >= rows_.size()) return nullptr;
  return &rows_[pos_++];
}

void RowSort::skip(TermId key) {
  if (!materialized_) materialize();
  const std::size_t k = key_.value;
  auto it = std::partition_point(rows_.begin() + static_cast<std::ptrdiff_t>(pos_), rows_.end(),
                                 [&](const RowTuple& r) { return r[k] < key; });
  pos_ = static_cast<std::size_t>(it - rows_.begin());
}

void RowSort::reset() {
  child_->reset();
  rows_.clear();
  materialized_ = false;
  pos_ = 0;
}

// ---------------------------------------------------------------------------
// HashGroup

namespace {

std::vector<VarId> group_output(std::optional<VarId> g, const std::vector<AggregateSpec>& aggs) {
  std::vector<VarId> out;
  if (g) out.push_back(*g);
  for (const auto& a : aggs) out.push_back(a.out);
  return out;
}

}  // namespace

HashGroup::HashGroup(ExecContext& ctx, std::unique_ptr<RowOperator> child, std::optional<VarId> group_var,
                     std::vector<AggregateSpec> aggregates)
    : RowOperator(group_output(group_var, aggregates), group_var),
      ctx_(&ctx),
      child_(std::move(child)),
      group_var_(group_var),
      aggs_(std::move(aggregates)) {}

void HashGroup::materialize() {
  const std::size_t cap = ctx_->options().memory_cap;
  const TermOverlay& terms = ctx_->terms();
  std::unordered_map<TermId, std::vector<AggregateState>> groups;
  std::uint64_t rows = 0;
  std::uint64_t distinct_values = 0;
  while (const RowTuple* r = child_->next()) {
    const TermId key = group_var_ ? (*r)[group_var_->value] : kNullId;
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) {
      for (const auto& a : aggs_) it->second.emplace_back(a.kind);
    }
    for (std::size_t a = 0; a < aggs_.size(); ++a) {
      const AggregateSpec& spec = aggs_[a];
      if (!spec.arg) {
        it->second[a].add_rows(1);
        continue;
      }
      const TermId v = (*r)[spec.arg->value];
      it->second[a].add(v, terms.numeric_value(v));
      distinct_values += spec.kind == AggKind::kCountDistinct ? 1 : 0;
    }
    if ((++rows & 1023) == 0) {
      const std::size_t bytes = groups.size() * (aggs_.size() * sizeof(AggregateState) + 64) + distinct_values * 32;
      if (bytes > cap) throw QueryMemoryExceeded("HashGroup", bytes, cap);
    }
  }
  if (groups.empty() && !group_var_) {
    auto& states = groups[kNullId];
    for (const auto& a : aggs_) states.emplace_back(a.kind);
  }
  std::vector<TermId> keys;
  keys.reserve(groups.size());
  for (const auto& [k, s] : groups) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  out_rows_.clear();
  for (TermId k : keys) {
    RowTuple row(ctx_->num_vars(), kNullId);
    if (group_var_) row[group_var_->value] = k;
    const auto& states = groups[k];
    for (std::size_t a = 0; a < aggs_.size(); ++a) row[aggs_[a].out.value] = states[a].finish(ctx_->terms());
    out_rows_.push_back(std::move(row));
  }
  pos_ = 0;
  materialized_ = true;
}

const RowTuple* HashGroup::next() {
  if (!materialized_) materialize();
  if (pos_ >= out_rows_.size()) return nullptr;
  return &out_rows_[pos_++];
}

void HashGroup::skip(TermId key) {
  require_sorted("Group");
  if (!materialized_) materialize();
  const std::size_t g = group_var_->value;
  while (pos_ < out_rows_.size() && out_rows_[pos_][g] < key) ++pos_;
}

void HashGroup::reset() {
  child_->reset();
  out_rows_.clear();
  materialized_ = false;
  pos_ = 0;
}

// ---------------------------------------------------------------------------
// RowProject, RowLimit

RowProject::RowProject(ExecContext& ctx, std::unique_ptr<RowOperator> child, std::vector<VarId> output_vars)
    : RowOperator(output_vars, kept_sort(*child, output_vars)),
      child_(std::move(child)),
      out_(ctx.num_vars(), kNullId) {}

const RowTuple* RowProject::next() {
  const RowTuple* r = child_->next();
  if (r == nullptr) return nullptr;
  for (VarId v : output_vars_) out_[v.value] = (*r)[v.value];
  return &out_;
}

void RowProject::skip(TermId key) {
  require_sorted("Project");
  child_->skip(key);
}

void RowProject::reset() { child_->reset(); }

RowLimit::RowLimit(ExecContext& /*ctx*/, std::unique_ptr<RowOperator> child, std::uint64_t limit)
    : RowOperator(child->output_vars(), child->sort_var()), child_(std::move(child)), limit_(limit) {}

const RowTuple* RowLimit::next() {
  if (emitted_ >= limit_) return nullptr;
  const RowTuple* r = child_->next();
  if (r == nullptr) {
    emitted_ = limit_;
    return nullptr;
  }
  ++emitted_;
  return r;
}

void RowLimit::skip(TermId key) {
  require_sorted("Limit");
  if (emitted_ < limit_) child_->skip(key);
}

void RowLimit::reset() {
  child_->reset();
  emitted_ = 0;
}

// ---------------------------------------------------------------------------
// RowUnion

RowUnion::RowUnion(ExecContext& ctx, std::vector<std::unique_ptr<RowOperator>> branches,
                   std::vector<VarId> output_vars, std::optional<VarId> sort_var)
    : RowOperator(std::move(output_vars), sort_var),
      branches_(std::move(branches)),
      heads_(branches_.size()),
      done_(branches_.size(), false),
      pending_skip_(branches_.size()),
      out_(ctx.num_vars(), kNullId) {}

const RowTuple* RowUnion::next() {
  if (!sort_var_) {
    while (current_ < branches_.size()) {
      if (!done_[current_]) {
        if (const RowTuple* r = branches_[current_]->next()) return r;
        done_[current_] = true;
      }
      ++current_;
    }
    return nullptr;
  }
  const std::size_t k = sort_var_->value;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    if (!heads_[i] && !done_[i]) {
      if (pending_skip_[i]) {
        branches_[i]->skip(*pending_skip_[i]);
        pending_skip_[i].reset();
      }
      if (const RowTuple* r = branches_[i]->next()) {
        heads_[i] = *r;
      } else {
        done_[i] = true;
      }
    }
    if (heads_[i] && (!best || (*heads_[i])[k] < (*heads_[*best])[k])) best = i;
  }
  if (!best) return nullptr;
  out_ = std::move(*heads_[*best]);
  heads_[*best].reset();
  return &out_;
}

void RowUnion::skip(TermId key) {
  require_sorted("Union");
  const std::size_t k = sort_var_->value;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    if (heads_[i] && (*heads_[i])[k] < key) heads_[i].reset();
    if (!heads_[i] && !done_[i]) {
      pending_skip_[i] = pending_skip_[i] && *pending_skip_[i] > key ? *pending_skip_[i] : key;
    }
  }
}

void RowUnion::reset() {
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    branches_[i]->reset();
    heads_[i].reset();
    done_[i] = false;
    pending_skip_[i].reset();
  }
  current_ = 0;
}

// ---------------------------------------------------------------------------
// Adapters

BatchToRow::BatchToRow(ExecContext& ctx, std::unique_ptr<BatchOperator> child)
    : RowOperator(child->output_vars(), child->sort_var()),
      child_(std::move(child)),
      row_(ctx.num_vars(), kNullId) {}

const RowTuple* BatchToRow::next() {
  if (done_) return nullptr;
  while (!batch_ || pos_ >= batch_->active_count()) {
    batch_ = child_->next();
    pos_ = 0;
    if (!batch_) {
      done_ = true;
      return nullptr;
    }
    std::vector<std::size_t> slots;
    for (VarId v : batch_->vars()) slots.push_back(v.value);
    if (slots != slots_) {
      std::fill(row_.begin(), row_.end(), kNullId);
      slots_ = std::move(slots);
    }
  }
  const std::uint32_t r = batch_->sv()[pos_++];
  for (std::size_t c = 0; c < slots_.size(); ++c) row_[slots_[c]] = batch_->column(c)[r];
  return &row_;
}

void BatchToRow::skip(TermId key) {
  require_sorted("BatchToRow");
  if (done_) return;
  if (batch_) {
    auto ci = batch_->column_index(*sort_var_);
    pos_ = lower_bound_active(batch_->column(*ci), batch_->sv().indices().data(), pos_, batch_->active_count(), key);
    if (pos_ < batch_->active_count()) return;
    batch_.reset();
  }
  child_->skip(key);
}

void BatchToRow::reset() {
  child_->reset();
  batch_.reset();
  pos_ = 0;
  done_ = false;
}

RowToBatch::RowToBatch(ExecContext& ctx, std::unique_ptr<RowOperator> child, std::size_t cap)
    : BatchOperator(child->output_vars(), child->sort_var()), ctx_(&ctx), child_(std::move(child)), cap_(cap) {}

BatchHandle RowToBatch::next() {
  if (done_) return nullptr;
  BatchHandle b = ctx_->pool().acquire(output_vars_, cap_);
  std::size_t n = 0;
  while (n < cap_) {
    const RowTuple* r = child_->next();
    if (r == nullptr) {
      done_ = true;
      break;
    }
    for (std::size_t c = 0; c < output_vars_.size(); ++c) b->column(c)[n] = (*r)[output_vars_[c].value];
    ++n;
  }
  if (n == 0) return nullptr;
  b->fill_identity(n);
  b->set_sort_var(sort_var_);
  return b;
}

void RowToBatch::skip(TermId key) {
  require_sorted("RowToBatch");
  if (!done_) child_->skip(key);
}

void RowToBatch::reset() {
  child_->reset();
  done_ = false;
}

std::vector<RowTuple> drain_rows(RowOperator& op) {
  std::vector<RowTuple> out;
  while (const RowTuple* r = op.next()) out.push_back(*r);
  return out;
}

}  // namespace vqe
