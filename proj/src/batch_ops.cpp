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

#include "vqe/batch_ops.hpp"

#include <algorithm>
#include <numeric>

#include "vqe/errors.hpp"
#include "vqe/merge_kernels.hpp"

namespace vqe {

namespace {

bool contains(const std::vector<VarId>& vs, VarId v) { return std::find(vs.begin(), vs.end(), v) != vs.end(); }

std::size_t require_column(const ColumnBatch& b, VarId v, const char* op) {
  auto ci = b.column_index(v);
  if (!ci) throw ContractViolation(std::string(op) + ": child batch lacks a required column");
  return *ci;
}

TermId max_key(std::optional<TermId> a, TermId b) { return a && *a > b ? *a : b; }

}  // namespace

// ---------------------------------------------------------------------------
// AdaptiveSizer

AdaptiveSizer::AdaptiveSizer(std::size_t min_size, std::size_t max_size, bool adaptive, std::size_t grow_factor)
    : min_(std::max<std::size_t>(1, std::min(min_size, max_size))),
      max_(std::max<std::size_t>(1, max_size)),
      grow_(std::max<std::size_t>(2, grow_factor)),
      adaptive_(adaptive),
      current_(adaptive ? min_ : max_) {}

std::size_t AdaptiveSizer::on_next() {
  ++observed_.next_calls;
  if (!adaptive_) return max_;
  std::size_t size = current_;
  if (!skipped_since_next_) current_ = std::min(max_, current_ * grow_);
  skipped_since_next_ = false;
  return size;
}

void AdaptiveSizer::on_skip() {
  ++observed_.skip_calls;
  if (!adaptive_) return;
  current_ = min_;
  skipped_since_next_ = true;
}

void AdaptiveSizer::on_reset() {
  ++observed_.reset_calls;
  current_ = adaptive_ ? min_ : max_;
  skipped_since_next_ = false;
}

// ---------------------------------------------------------------------------
// VScan

VScan::VScan(ExecContext& ctx, ScanSpec spec)
    : BatchOperator(spec.output_vars, spec.sort_var),
      ctx_(&ctx),
      spec_(std::move(spec)),
      cursor_(ctx.store().open_scan(spec_.pattern, spec_.sort_var)),
      sizer_(ctx.options().min_batch, ctx.options().batch_max, ctx.options().adaptive) {
  const auto& slots = spec_.pattern.slots;
  for (VarId v : output_vars_) {
    bool found = false;
    for (std::size_t i = 0; i < 3 && !found; ++i) {
      if (slots[i].is_var && slots[i].var == v) {
        component_.push_back(cursor_.component_of(static_cast<TriplePosition>(i)));
        found = true;
      }
    }
    if (!found) throw ContractViolation("scan output variable not in pattern");
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

BatchHandle VScan::next() {
  if (done_) return nullptr;
  const std::size_t n = sizer_.on_next();
  for (;;) {
    auto block = cursor_.next_block(n);
    if (block.empty()) {
      done_ = true;
      return nullptr;
    }
    BatchHandle b = ctx_->pool().acquire(output_vars_, n);
    for (std::size_t c = 0; c < component_.size(); ++c) {
      TermId* col = b->column(c);
      const std::size_t comp = component_[c];
      for (std::size_t i = 0; i < block.size(); ++i) col[i] = block[i][comp];
    }
    b->fill_identity(block.size());
    for (auto [a, z] : equal_components_) {
      b->retain([&block, a = a, z = z](std::uint32_t r) { return block[r][a] == block[r][z]; });
    }
    b->set_sort_var(sort_var_);
    if (b->active_count() > 0) {
      batch_sizes_.push_back(block.size());
      return b;
    }
  }
}

void VScan::skip(TermId key) {
  require_sorted("Scan");
  sizer_.on_skip();
  if (!done_) cursor_.seek(key);
}

void VScan::reset() {
  cursor_.rewind();
  sizer_.on_reset();
  batch_sizes_.clear();
  done_ = false;
}

// ---------------------------------------------------------------------------
// VMergeJoin

namespace {

std::optional<VarId> join_sort_var(const std::vector<VarId>& out, VarId key) {
  return contains(out, key) ? std::optional<VarId>(key) : std::nullopt;
}

}  // namespace

VMergeJoin::VMergeJoin(ExecContext& ctx, std::unique_ptr<BatchOperator> left, std::unique_ptr<BatchOperator> right,
                       VarId key, std::vector<VarId> output_vars)
    : BatchOperator(output_vars, join_sort_var(output_vars, key)),
      ctx_(&ctx),
      left_(std::move(left)),
      right_(std::move(right)),
      key_(key),
      sizer_(ctx.options().min_batch, ctx.options().batch_max, ctx.options().adaptive) {
  if (left_->sort_var() != key || right_->sort_var() != key) {
    throw ContractViolation("MergeJoin children must be sorted on the join key");
  }
  const auto& lv = left_->output_vars();
  const auto& rv = right_->output_vars();
  for (VarId v : lv) {
    if (v != key && contains(rv, v)) secondary_.push_back(v);
  }
  for (VarId v : output_vars_) {
    if (v == key || !contains(rv, v)) {
      if (!contains(lv, v)) throw ContractViolation("MergeJoin output variable produced by neither child");
      left_cols_.push_back(v);
    } else {
      right_cols_.push_back(v);
    }
  }
  rbuf_vars_ = right_cols_;
  for (VarId v : secondary_) {
    if (!contains(rbuf_vars_, v)) rbuf_vars_.push_back(v);
  }
  rbuf_.resize(rbuf_vars_.size());
}

TermId VMergeJoin::key_of(const Side& side, std::size_t i) const {
  return side.batch->column(side.key_col)[side.batch->sv()[i]];
}

bool VMergeJoin::fetch(Side& side, BatchOperator& child, std::vector<TermId>& skip_log) {
  side.batch.reset();
  side.pos = 0;
  if (side.done) return false;
  for (;;) {
    if (side.pending_skip) {
      child.skip(*side.pending_skip);
      skip_log.push_back(*side.pending_skip);
      side.pending_skip.reset();
    }
    side.batch = child.next();
    if (!side.batch) {
      side.done = true;
      return false;
    }
    const std::size_t n = side.batch->active_count();
    if (n == 0) continue;
    side.key_col = require_column(*side.batch, key_, "MergeJoin");
    const TermId* keys = side.batch->column(side.key_col);
    const std::uint32_t* sel = side.batch->sv().indices().data();
    if (side.last_key && keys[sel[0]] < *side.last_key) throw UnsortedInputError("MergeJoin input not sorted");
    side.last_key = keys[sel[n - 1]];
    // NULL keys never join.
    side.pos = lower_bound_active(keys, sel, 0, n, TermId{1});
    if (side.pos < n) return true;
  }
}

void VMergeJoin::stage_right_group() {
  for (auto& c : rbuf_) c.clear();
  rbuf_rows_ = 0;
  const std::size_t cap = ctx_->options().right_buffer_cap;
  for (;;) {
    const ColumnBatch& b = *r_.batch;
    const std::size_t n = b.active_count();
    const std::uint32_t* sel = b.sv().indices().data();
    const std::size_t end = run_end(b.column(r_.key_col), sel, r_.pos, n);
    for (std::size_t j = 0; j < rbuf_vars_.size(); ++j) {
      const TermId* col = b.column(require_column(b, rbuf_vars_[j], "MergeJoin"));
      auto& dst = rbuf_[j];
      for (std::size_t i = r_.pos; i < end; ++i) dst.push_back(col[sel[i]]);
    }
    rbuf_rows_ += end - r_.pos;
    const std::size_t bytes = rbuf_rows_ * std::max<std::size_t>(1, rbuf_vars_.size()) * sizeof(TermId);
    rbuf_peak_bytes_ = std::max(rbuf_peak_bytes_, bytes);
    if (bytes > cap) throw QueryMemoryExceeded("MergeJoin right-side buffer", bytes, cap);
    r_.pos = end;
    if (end < n) return;
    // The group reaches the end of the right batch; it may continue in the next one.
    if (!fetch(r_, *right_, right_skips_)) return;
    if (key_of(r_, r_.pos) != ordinal_) return;
  }
}

std::size_t VMergeJoin::build(ColumnBatch& out, std::size_t at, std::size_t space) {
  const std::size_t rn = rbuf_rows_;
  const ColumnBatch& lb = *l_.batch;
  const std::uint32_t* lsel = lb.sv().indices().data();
  std::size_t written = 0;
  while (space > 0 && gl_pos_ < gl_end_) {
    // Either whole left rows (each times the full right range) or a slice of
    // the right range for one left row when the output is nearly full.
    const bool whole = gr_off_ == 0 && rn <= space;
    const std::size_t k = whole ? std::min(gl_end_ - gl_pos_, space / rn) : 1;
    const std::size_t m = whole ? rn : std::min(rn - gr_off_, space);
    const std::size_t rows = whole ? k * rn : m;

    auto write_left = [&](const TermId* src, TermId* dst) {
      if (whole) {
        expand_each(src, lsel + gl_pos_, k, rn, dst);
      } else {
        fill_value(src[lsel[gl_pos_]], m, dst);
      }
    };
    auto write_right = [&](const TermId* buf, TermId* dst) {
      if (whole) {
        repeat_range(buf, rn, k, dst);
      } else {
        std::copy(buf + gr_off_, buf + gr_off_ + m, dst);
      }
    };

    for (VarId v : left_cols_) {
      write_left(lb.column(*lb.column_index(v)), out.column(*out.column_index(v)) + at);
    }
    for (std::size_t j = 0; j < right_cols_.size(); ++j) {
      write_right(rbuf_[j].data(), out.column(*out.column_index(right_cols_[j])) + at);
    }

    auto& sv = out.sv().raw();
    if (secondary_.empty()) {
      for (std::size_t i = 0; i < rows; ++i) sv.push_back(static_cast<std::uint32_t>(at + i));
    } else {
      keep_.assign(rows, 1);
      scratch_left_.resize(rows);
      scratch_right_.resize(rows);
      for (VarId s : secondary_) {
        write_left(lb.column(*lb.column_index(s)), scratch_left_.data());
        auto bi = static_cast<std::size_t>(std::find(rbuf_vars_.begin(), rbuf_vars_.end(), s) - rbuf_vars_.begin());
        write_right(rbuf_[bi].data(), scratch_right_.data());
        const TermId* x = scratch_left_.data();
        const TermId* y = scratch_right_.data();
        std::uint8_t* keep = keep_.data();
        for (std::size_t i = 0; i < rows; ++i) keep[i] &= static_cast<std::uint8_t>(x[i] == y[i] && !x[i].is_null());
      }
      for (std::size_t i = 0; i < rows; ++i) {
        if (keep_[i] != 0) sv.push_back(static_cast<std::uint32_t>(at + i));
      }
    }

    if (whole) {
      gl_pos_ += k;
    } else {
      gr_off_ += m;
      if (gr_off_ == rn) {
        gr_off_ = 0;
        ++gl_pos_;
      }
    }
    at += rows;
    space -= rows;
    written += rows;
  }
  return written;
}

void VMergeJoin::clear_group() {
  in_group_ = false;
  gr_off_ = 0;
}

BatchHandle VMergeJoin::next() {
  if (done_) return nullptr;
  const std::size_t target = sizer_.on_next();
  const std::size_t cap = ctx_->options().batch_max;
  BatchHandle out = ctx_->pool().acquire(output_vars_, cap);
  for (;;) {
    std::size_t len = 0;
    out->sv().clear();
    while (len < target && !done_) {
      if (in_group_) {
        if (gl_pos_ < gl_end_) {
          len += build(*out, len, target - len);
          continue;
        }
        if (gl_end_ < active(l_)) {
          l_.pos = gl_end_;
          clear_group();
          continue;
        }
        // The left run ended with its batch; the next left batch may continue it.
        if (!fetch(l_, *left_, left_skips_)) {
          clear_group();
          done_ = true;
          break;
        }
        const ColumnBatch& lb = *l_.batch;
        if (key_of(l_, l_.pos) == ordinal_) {
          gl_pos_ = l_.pos;
          gl_end_ = run_end(lb.column(l_.key_col), lb.sv().indices().data(), l_.pos, active(l_));
          continue;
        }
        clear_group();
        continue;
      }

      // Probe.
      if (!l_.batch && !fetch(l_, *left_, left_skips_)) {
        done_ = true;
        break;
      }
      if (!r_.batch && !fetch(r_, *right_, right_skips_)) {
        done_ = true;
        break;
      }
      const TermId lk = key_of(l_, l_.pos);
      const TermId rk = key_of(r_, r_.pos);
      if (lk < rk) {
        const ColumnBatch& lb = *l_.batch;
        l_.pos = lower_bound_active(lb.column(l_.key_col), lb.sv().indices().data(), l_.pos, active(l_), rk);
        if (l_.pos == active(l_)) {
          // Trailing rows did not match: jump the left child to the right's key.
          l_.batch.reset();
          l_.pending_skip = max_key(l_.pending_skip, rk);
        }
        continue;
      }
      if (rk < lk) {
        const ColumnBatch& rb = *r_.batch;
        r_.pos = lower_bound_active(rb.column(r_.key_col), rb.sv().indices().data(), r_.pos, active(r_), lk);
        if (r_.pos == active(r_)) {
          r_.batch.reset();
          r_.pending_skip = max_key(r_.pending_skip, lk);
        }
        continue;
      }
      ordinal_ = lk;
      const ColumnBatch& lb = *l_.batch;
      gl_pos_ = l_.pos;
      gl_end_ = run_end(lb.column(l_.key_col), lb.sv().indices().data(), l_.pos, active(l_));
      gr_off_ = 0;
      stage_right_group();
      in_group_ = true;
    }
    out->set_length(len);
    if (out->active_count() > 0) {
      out->set_sort_var(sort_var_);
      return out;
    }
    if (done_) return nullptr;
  }
}

void VMergeJoin::forward_skip(Side& side, TermId key) {
  if (side.batch) {
    const ColumnBatch& b = *side.batch;
    side.pos = lower_bound_active(b.column(side.key_col), b.sv().indices().data(), side.pos, active(side), key);
    if (side.pos < active(side)) return;
    side.batch.reset();
  }
  if (!side.done) side.pending_skip = max_key(side.pending_skip, key);
}

void VMergeJoin::skip(TermId key) {
  require_sorted("MergeJoin");
  sizer_.on_skip();
  if (done_) return;
  if (in_group_) {
    if (ordinal_ >= key) return;
    l_.pos = gl_end_;
    clear_group();
  }
  forward_skip(l_, key);
  forward_skip(r_, key);
}

void VMergeJoin::reset() {
  left_->reset();
  right_->reset();
  l_ = Side{};
  r_ = Side{};
  done_ = false;
  clear_group();
  rbuf_rows_ = 0;
  sizer_.on_reset();
  left_skips_.clear();
  right_skips_.clear();
}

// ---------------------------------------------------------------------------
// VFilter

VFilter::VFilter(ExecContext& ctx, std::unique_ptr<BatchOperator> child, FilterExpr expr)
    : BatchOperator(child->output_vars(), child->sort_var()), ctx_(&ctx), child_(std::move(child)), expr_(std::move(expr)) {}

BatchHandle VFilter::next() {
  if (done_) return nullptr;
  for (;;) {
    BatchHandle b = child_->next();
    if (!b) {
      done_ = true;
      return nullptr;
    }
    apply_filter(expr_, *b, ctx_->terms());
    if (b->active_count() > 0) return b;
    // Fully filtered batches go straight back to the pool.
  }
}

void VFilter::skip(TermId key) {
  require_sorted("Filter");
  if (!done_) child_->skip(key);
}

void VFilter::reset() {
  child_->reset();
  done_ = false;
}

// ---------------------------------------------------------------------------
// VStreamGroup

namespace {

std::vector<VarId> group_output(std::optional<VarId> g, const std::vector<AggregateSpec>& aggs) {
  std::vector<VarId> out;
  if (g) out.push_back(*g);
  for (const auto& a : aggs) out.push_back(a.out);
  return out;
}

}  // namespace

VStreamGroup::VStreamGroup(ExecContext& ctx, std::unique_ptr<BatchOperator> child, std::optional<VarId> group_var,
                           std::vector<AggregateSpec> aggregates)
    : BatchOperator(group_output(group_var, aggregates), group_var),
      ctx_(&ctx),
      child_(std::move(child)),
      group_var_(group_var),
      aggs_(std::move(aggregates)) {
  if (group_var_ && child_->sort_var() != group_var_) {
    throw ContractViolation("streaming group needs input sorted by the group variable");
  }
}

void VStreamGroup::open_group(TermId key) {
  states_.clear();
  for (const auto& a : aggs_) states_.emplace_back(a.kind);
  group_key_ = key;
  have_group_ = true;
}

void VStreamGroup::close_group(ColumnBatch& out, std::size_t& n) {
  std::size_t c = 0;
  if (group_var_) out.column(c++)[n] = group_key_;
  for (std::size_t a = 0; a < aggs_.size(); ++a) out.column(c++)[n] = states_[a].finish(ctx_->terms());
  ++n;
  have_group_ = false;
  emitted_any_ = true;
}

void VStreamGroup::accumulate(const ColumnBatch& in, std::size_t from, std::size_t to) {
  const std::uint32_t* sel = in.sv().indices().data();
  const TermOverlay& terms = ctx_->terms();
  for (std::size_t a = 0; a < aggs_.size(); ++a) {
    const AggregateSpec& spec = aggs_[a];
    AggregateState part(spec.kind);
    if (!spec.arg) {
      part.add_rows(to - from);
    } else if (auto ci = in.column_index(*spec.arg)) {
      const TermId* col = in.column(*ci);
      if (spec.kind == AggKind::kCount) {
        std::uint64_t bound = 0;
        for (std::size_t i = from; i < to; ++i) bound += col[sel[i]].is_null() ? 0 : 1;
        part.add_rows(bound);
      } else {
        for (std::size_t i = from; i < to; ++i) {
          const TermId v = col[sel[i]];
          part.add(v, terms.numeric_value(v));
        }
      }
    }
    states_[a].merge(part);
  }
}

BatchHandle VStreamGroup::next() {
  if (done_) return nullptr;
  const std::size_t cap = ctx_->options().batch_max;
  BatchHandle out = ctx_->pool().acquire(output_vars_, cap);
  std::size_t n = 0;
  while (n < cap) {
    if (!in_ || pos_ >= in_->active_count()) {
      in_.reset();
      if (child_done_) break;
      in_ = child_->next();
      pos_ = 0;
      if (!in_) {
        child_done_ = true;
        if (have_group_) {
          close_group(*out, n);
        } else if (!group_var_ && !emitted_any_) {
          // Global aggregate over empty input still yields one row.
          open_group(kNullId);
          close_group(*out, n);
        }
      }
      continue;
    }
    const std::size_t active = in_->active_count();
    if (!group_var_) {
      if (!have_group_) open_group(kNullId);
      accumulate(*in_, pos_, active);
      pos_ = active;
      continue;
    }
    const TermId* keys = in_->column(require_column(*in_, *group_var_, "Group"));
    const std::uint32_t* sel = in_->sv().indices().data();
    const TermId k = keys[sel[pos_]];
    if (last_key_ && k < *last_key_) throw UnsortedInputError("Group input not sorted by the group variable");
    if (have_group_ && k != group_key_) {
      close_group(*out, n);
      continue;
    }
    if (!have_group_) open_group(k);
    const std::size_t end = run_end(keys, sel, pos_, active);
    accumulate(*in_, pos_, end);
    pos_ = end;
    last_key_ = k;
  }
  if (child_done_ && !have_group_) done_ = true;
  if (n == 0) return nullptr;
  out->fill_identity(n);
  out->set_sort_var(sort_var_);
  return out;
}

void VStreamGroup::skip(TermId key) {
  require_sorted("Group");
  if (done_) return;
  if (have_group_ && group_key_ < key) have_group_ = false;
  if (in_) {
    const TermId* keys = in_->column(require_column(*in_, *group_var_, "Group"));
    pos_ = lower_bound_active(keys, in_->sv().indices().data(), pos_, in_->active_count(), key);
    if (pos_ < in_->active_count()) return;
    in_.reset();
  }
  if (!child_done_) child_->skip(key);
}

void VStreamGroup::reset() {
  child_->reset();
  in_.reset();
  pos_ = 0;
  child_done_ = false;
  done_ = false;
  have_group_ = false;
  emitted_any_ = false;
  last_key_.reset();
  states_.clear();
}

// ---------------------------------------------------------------------------
// VDistinct

VDistinct::VDistinct(ExecContext& ctx, std::unique_ptr<BatchOperator> child, VarId key)
    : BatchOperator({key}, key), ctx_(&ctx), child_(std::move(child)), key_(key) {
  if (child_->sort_var() != key) throw ContractViolation("Distinct needs input sorted by its variable");
}

BatchHandle VDistinct::next() {
  if (done_) return nullptr;
  const std::size_t cap = ctx_->options().batch_max;
  BatchHandle out = ctx_->pool().acquire(output_vars_, cap);
  TermId* dst = out->column(0);
  std::size_t n = 0;
  while (n < cap) {
    if (!in_ || pos_ >= in_->active_count()) {
      in_.reset();
      if (pending_skip_) {
        child_->skip(*pending_skip_);
        pending_skip_.reset();
      }
      in_ = child_->next();
      pos_ = 0;
      if (!in_) {
        done_ = true;
        break;
      }
    }
    const TermId* keys = in_->column(require_column(*in_, key_, "Distinct"));
    const auto sel = in_->sv().indices();
    for (; pos_ < sel.size() && n < cap; ++pos_) {
      const TermId k = keys[sel[pos_]];
      if (last_ && k < *last_) throw UnsortedInputError("Distinct input not sorted");
      if (pending_skip_ && k < *pending_skip_) continue;
      if (!last_ || k > *last_) {
        dst[n++] = k;
        last_ = k;
      }
    }
    // Remaining duplicates of the last key are jumped over in storage.
    if (pos_ >= sel.size() && last_) pending_skip_ = max_key(pending_skip_, TermId{last_->value + 1});
  }
  if (n == 0) return nullptr;
  out->fill_identity(n);
  out->set_sort_var(key_);
  return out;
}

void VDistinct::skip(TermId key) {
  require_sorted("Distinct");
  if (done_) return;
  pending_skip_ = max_key(pending_skip_, key);
}

void VDistinct::reset() {
  child_->reset();
  in_.reset();
  pos_ = 0;
  last_.reset();
  pending_skip_.reset();
  done_ = false;
}

// ---------------------------------------------------------------------------
// VUnion

VUnion::VUnion(ExecContext& ctx, std::vector<std::unique_ptr<BatchOperator>> branches, std::vector<VarId> output_vars,
               std::optional<VarId> sort_var)
    : BatchOperator(std::move(output_vars), sort_var), ctx_(&ctx) {
  for (auto& b : branches) {
    if (sort_var && b->sort_var() != sort_var) throw ContractViolation("sorted Union needs sorted branches");
    Branch br;
    br.op = std::move(b);
    branches_.push_back(std::move(br));
  }
}

bool VUnion::ensure(Branch& b) {
  if (b.batch && b.pos < b.batch->active_count()) return true;
  b.batch.reset();
  b.pos = 0;
  if (b.done) return false;
  for (;;) {
    if (b.pending_skip) {
      b.op->skip(*b.pending_skip);
      b.pending_skip.reset();
    }
    b.batch = b.op->next();
    if (!b.batch) {
      b.done = true;
      return false;
    }
    if (b.batch->active_count() == 0) continue;
    b.key_col = require_column(*b.batch, *sort_var_, "Union");
    return true;
  }
}

BatchHandle VUnion::next_concat() {
  while (current_ < branches_.size()) {
    BatchHandle b = branches_[current_].op->next();
    if (!b) {
      branches_[current_].done = true;
      ++current_;
      continue;
    }
    if (b->active_count() == 0) continue;
    if (b->vars() == output_vars_) {
      b->set_sort_var(std::nullopt);
      return b;
    }
    const std::size_t n = b->active_count();
    BatchHandle out = ctx_->pool().acquire(output_vars_, std::max(n, ctx_->options().batch_max));
    const auto sel = b->sv().indices();
    for (std::size_t c = 0; c < output_vars_.size(); ++c) {
      TermId* dst = out->column(c);
      if (auto ci = b->column_index(output_vars_[c])) {
        const TermId* src = b->column(*ci);
        for (std::size_t i = 0; i < n; ++i) dst[i] = src[sel[i]];
      } else {
        fill_value(kNullId, n, dst);
      }
    }
    out->fill_identity(n);
    return out;
  }
  done_ = true;
  return nullptr;
}

BatchHandle VUnion::next_merge() {
  const std::size_t cap = ctx_->options().batch_max;
  BatchHandle out = ctx_->pool().acquire(output_vars_, cap);
  std::size_t n = 0;
  auto key_at = [](const Branch& b) { return b.batch->column(b.key_col)[b.batch->sv()[b.pos]]; };
  while (n < cap) {
    Branch* best = nullptr;
    for (auto& b : branches_) {
      if (!ensure(b)) continue;
      if (best == nullptr || key_at(b) < key_at(*best)) best = &b;
    }
    if (best == nullptr) {
      done_ = true;
      break;
    }
    std::optional<TermId> bound;
    for (auto& b : branches_) {
      if (&b == best || !b.batch) continue;
      if (!bound || key_at(b) < *bound) bound = key_at(b);
    }
    const ColumnBatch& in = *best->batch;
    const std::size_t active = in.active_count();
    const std::uint32_t* sel = in.sv().indices().data();
    std::size_t end = active;
    if (bound && bound->value != UINT64_MAX) {
      end = lower_bound_active(in.column(best->key_col), sel, best->pos, active, TermId{bound->value + 1});
    }
    end = std::min(end, best->pos + (cap - n));
    const std::size_t m = end - best->pos;
    for (std::size_t c = 0; c < output_vars_.size(); ++c) {
      TermId* dst = out->column(c) + n;
      if (auto ci = in.column_index(output_vars_[c])) {
        const TermId* src = in.column(*ci);
        for (std::size_t i = 0; i < m; ++i) dst[i] = src[sel[best->pos + i]];
      } else {
        fill_value(kNullId, m, dst);
      }
    }
    n += m;
    best->pos = end;
  }
  if (n == 0) return nullptr;
  out->fill_identity(n);
  out->set_sort_var(sort_var_);
  return out;
}

BatchHandle VUnion::next() {
  if (done_) return nullptr;
  return sort_var_ ? next_merge() : next_concat();
}

void VUnion::skip(TermId key) {
  require_sorted("Union");
  if (done_) return;
  for (auto& b : branches_) {
    if (b.batch) {
      const ColumnBatch& in = *b.batch;
      b.pos = lower_bound_active(in.column(b.key_col), in.sv().indices().data(), b.pos, in.active_count(), key);
      if (b.pos < in.active_count()) continue;
      b.batch.reset();
    }
    if (!b.done) b.pending_skip = max_key(b.pending_skip, key);
  }
}

void VUnion::reset() {
  for (auto& b : branches_) {
    b.op->reset();
    b.batch.reset();
    b.pos = 0;
    b.done = false;
    b.pending_skip.reset();
  }
  current_ = 0;
  done_ = false;
}

// ---------------------------------------------------------------------------
// VSort

VSort::VSort(ExecContext& ctx, std::unique_ptr<BatchOperator> child, VarId key)
    : BatchOperator(child->output_vars(), key), ctx_(&ctx), child_(std::move(child)), key_(key) {
  if (!contains(output_vars_, key)) throw ContractViolation("Sort key not produced by the child");
  key_index_ = static_cast<std::size_t>(std::find(output_vars_.begin(), output_vars_.end(), key) - output_vars_.begin());
}

void VSort::materialize() {
  cols_.assign(output_vars_.size(), {});
  const std::size_t cap = ctx_->options().memory_cap;
  std::size_t rows = 0;
  while (BatchHandle b = child_->next()) {
    const auto sel = b->sv().indices();
    for (std::size_t c = 0; c < output_vars_.size(); ++c) {
      auto& dst = cols_[c];
      if (auto ci = b->column_index(output_vars_[c])) {
        const TermId* src = b->column(*ci);
        for (std::uint32_t r : sel) dst.push_back(src[r]);
      } else {
        dst.insert(dst.end(), sel.size(), kNullId);
      }
    }
    rows += sel.size();
    const std::size_t bytes = rows * (output_vars_.size() * sizeof(TermId) + 16);
    if (bytes > cap) throw QueryMemoryExceeded("Sort", bytes, cap);
  }
  std::vector<std::pair<TermId, std::uint32_t>> keyed(rows);
  const auto& keys = cols_[key_index_];
  for (std::size_t i = 0; i < rows; ++i) keyed[i] = {keys[i], static_cast<std::uint32_t>(i)};
  std::sort(keyed.begin(), keyed.end());
  order_.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) order_[i] = keyed[i].second;
  pos_ = 0;
  materialized_ = true;
}

BatchHandle VSort::next() {
  if (!materialized_) materialize();
  if (pos_ >= order_.size()) return nullptr;
  const std::size_t cap = ctx_->options().batch_max;
  const std::size_t n = std::min(cap, order_.size() - pos_);
  BatchHandle out = ctx_->pool().acquire(output_vars_, cap);
  for (std::size_t c = 0; c < cols_.size(); ++c) {
    TermId* dst = out->column(c);
    const TermId* src = cols_[c].data();
    const std::uint32_t* ord = order_.data() + pos_;
    for (std::size_t i = 0; i < n; ++i) dst[i] = src[ord[i]];
  }
  pos_ += n;
  out->fill_identity(n);
  out->set_sort_var(key_);
  return out;
}

void VSort::skip(TermId key) {
  if (!materialized_) materialize();
  const auto& keys = cols_[key_index_];
  auto it = std::partition_point(order_.begin() + static_cast<std::ptrdiff_t>(pos_), order_.end(),
                                 [&](std::uint32_t i) { return keys[i] < key; });
  pos_ = static_cast<std::size_t>(it - order_.begin());
}

void VSort::reset() {
  child_->reset();
  materialized_ = false;
  cols_.clear();
  order_.clear();
  pos_ = 0;
}

// ---------------------------------------------------------------------------
// VProject, VLimit

namespace {

std::optional<VarId> kept_sort_var(const BatchOperator& child, const std::vector<VarId>& out) {
  auto s = child.sort_var();
  return s && contains(out, *s) ? s : std::nullopt;
}

}  // namespace

VProject::VProject(ExecContext& /*ctx*/, std::unique_ptr<BatchOperator> child, std::vector<VarId> output_vars)
    : BatchOperator(output_vars, kept_sort_var(*child, output_vars)), child_(std::move(child)) {}

BatchHandle VProject::next() {
  BatchHandle b = child_->next();
  if (!b) return nullptr;
  for (std::size_t i = b->num_columns(); i-- > 0;) {
    if (!contains(output_vars_, b->vars()[i])) b->drop_column(i);
  }
  return b;
}

void VProject::skip(TermId key) {
  require_sorted("Project");
  child_->skip(key);
}

void VProject::reset() { child_->reset(); }

VLimit::VLimit(ExecContext& /*ctx*/, std::unique_ptr<BatchOperator> child, std::uint64_t limit)
    : BatchOperator(child->output_vars(), child->sort_var()), child_(std::move(child)), limit_(limit) {}

BatchHandle VLimit::next() {
  if (emitted_ >= limit_) return nullptr;
  BatchHandle b = child_->next();
  if (!b) {
    emitted_ = limit_;
    return nullptr;
  }
  b->sv().truncate(static_cast<std::size_t>(limit_ - emitted_));
  emitted_ += b->active_count();
  return b;
}

void VLimit::skip(TermId key) {
  require_sorted("Limit");
  if (emitted_ < limit_) child_->skip(key);
}

void VLimit::reset() {
  child_->reset();
  emitted_ = 0;
}

std::vector<RowTuple> drain_rows(BatchOperator& op, std::size_t width) {
  std::vector<RowTuple> out;
  while (BatchHandle b = op.next()) {
    auto rows = pivot_to_rows(*b, width);
    out.insert(out.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
  }
  return out;
}

}  // namespace vqe
