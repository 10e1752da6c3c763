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

#include "vqe/session.hpp"

#include <random>

#include "vqe/batch_ops.hpp"
#include "vqe/row_ops.hpp"

namespace vqe {

std::vector<RowTuple> Executable::drain(std::size_t width) {
  if (batch_root) return drain_rows(*batch_root, width);
  auto rows = drain_rows(*row_root);
  for (auto& r : rows) r.resize(width);
  return rows;
}

void Executable::finalize() {
  for (auto& f : finalizers) f();
}

namespace {

void retag(PlanNode& n, std::optional<ExecTag> parent, AdapterMode mode, std::mt19937_64& rng) {
  bool want_batch = false;
  if (mode == AdapterMode::kEveryBoundary) {
    want_batch = !parent || *parent == ExecTag::kRow;
  } else {
    want_batch = (rng() & 1U) != 0;
  }
  n.tag = want_batch && n.batch_capable() ? ExecTag::kBatch : ExecTag::kRow;
  for (auto& c : n.children) retag(*c, n.tag, mode, rng);
}

class Translator {
 public:
  Translator(ExecContext& ctx, Executable& exe, bool profile) : ctx_(ctx), exe_(exe), profile_(profile) {}

  std::unique_ptr<BatchOperator> batch(const PlanNode& n, ProfileNode* parent) {
    if (n.tag == ExecTag::kRow) {
      ++exe_.adapters;
      ProfileNode* prof = open(parent, "RowToBatch", true);
      auto op = std::make_unique<RowToBatch>(ctx_, row(n, prof), ctx_.options().batch_max);
      return wrap(std::move(op), prof);
    }
    ProfileNode* prof = open(parent, n.label, true);
    std::unique_ptr<BatchOperator> op;
    switch (n.kind) {
      case PlanKind::kScan:
        op = std::make_unique<VScan>(ctx_, ScanSpec{n.pattern, n.sort_var, n.output_vars, n.label});
        break;
      case PlanKind::kMergeJoin: {
        auto l = batch(*n.children[0], prof);
        auto r = batch(*n.children[1], prof);
        op = std::make_unique<VMergeJoin>(ctx_, std::move(l), std::move(r), n.key, n.output_vars);
        break;
      }
      case PlanKind::kFilter: op = std::make_unique<VFilter>(ctx_, batch(*n.children[0], prof), n.filter); break;
      case PlanKind::kGroup:
        op = std::make_unique<VStreamGroup>(ctx_, batch(*n.children[0], prof), n.group_var, n.aggregates);
        break;
      case PlanKind::kDistinct:
        op = std::make_unique<VDistinct>(ctx_, batch(*n.children[0], prof), n.output_vars[0]);
        break;
      case PlanKind::kUnion: {
        std::vector<std::unique_ptr<BatchOperator>> branches;
        for (const auto& c : n.children) branches.push_back(batch(*c, prof));
        op = std::make_unique<VUnion>(ctx_, std::move(branches), n.output_vars, n.sort_var);
        break;
      }
      case PlanKind::kSort: op = std::make_unique<VSort>(ctx_, batch(*n.children[0], prof), n.key); break;
      case PlanKind::kProject:
        op = std::make_unique<VProject>(ctx_, batch(*n.children[0], prof), n.output_vars);
        break;
      case PlanKind::kLimit: op = std::make_unique<VLimit>(ctx_, batch(*n.children[0], prof), n.limit); break;
      case PlanKind::kHashJoin: throw Error("HashJoin has no batch implementation");
    }
    return wrap(std::move(op), prof);
  }

  std::unique_ptr<RowOperator> row(const PlanNode& n, ProfileNode* parent) {
    if (n.tag == ExecTag::kBatch) {
      ++exe_.adapters;
      ProfileNode* prof = open(parent, "BatchToRow", false);
      auto op = std::make_unique<BatchToRow>(ctx_, batch(n, prof));
      return wrap(std::move(op), prof);
    }
    ProfileNode* prof = open(parent, n.label, false);
    std::unique_ptr<RowOperator> op;
    switch (n.kind) {
      case PlanKind::kScan:
        op = std::make_unique<RowScan>(ctx_, ScanSpec{n.pattern, n.sort_var, n.output_vars, n.label});
        break;
      case PlanKind::kMergeJoin: {
        auto l = row(*n.children[0], prof);
        auto r = row(*n.children[1], prof);
        op = std::make_unique<RowMergeJoin>(ctx_, std::move(l), std::move(r), n.key, n.output_vars);
        break;
      }
      case PlanKind::kHashJoin: {
        auto probe = row(*n.children[0], prof);
        auto build = row(*n.children[1], prof);
        op = std::make_unique<RowHashJoin>(ctx_, std::move(probe), std::move(build), n.join_vars, n.output_vars);
        break;
      }
      case PlanKind::kFilter: op = std::make_unique<RowFilter>(ctx_, row(*n.children[0], prof), n.filter); break;
      case PlanKind::kGroup:
        op = std::make_unique<HashGroup>(ctx_, row(*n.children[0], prof), n.group_var, n.aggregates);
        break;
      case PlanKind::kDistinct:
        op = std::make_unique<RowDistinct>(ctx_, row(*n.children[0], prof), n.output_vars);
        break;
      case PlanKind::kUnion: {
        std::vector<std::unique_ptr<RowOperator>> branches;
        for (const auto& c : n.children) branches.push_back(row(*c, prof));
        op = std::make_unique<RowUnion>(ctx_, std::move(branches), n.output_vars, n.sort_var);
        break;
      }
      case PlanKind::kSort: op = std::make_unique<RowSort>(ctx_, row(*n.children[0], prof), n.key); break;
      case PlanKind::kProject:
        op = std::make_unique<RowProject>(ctx_, row(*n.children[0], prof), n.output_vars);
        break;
      case PlanKind::kLimit: op = std::make_unique<RowLimit>(ctx_, row(*n.children[0], prof), n.limit); break;
    }
    return wrap(std::move(op), prof);
  }

 private:
  ProfileNode* open(ProfileNode* parent, const std::string& label, bool batched) {
    if (!profile_) return nullptr;
    if (!parent) {
      exe_.profile = std::make_unique<ProfileNode>();
      exe_.profile->label = label;
      exe_.profile->batched = batched;
      return exe_.profile.get();
    }
    return parent->add_child(label, batched);
  }

  std::unique_ptr<BatchOperator> wrap(std::unique_ptr<BatchOperator> op, ProfileNode* prof) {
    if (!profile_) return op;
    auto w = std::make_unique<ProfiledBatch>(std::move(op), prof, exe_.timer.get());
    exe_.finalizers.push_back([p = w.get()] { p->finalize(); });
    return w;
  }

  std::unique_ptr<RowOperator> wrap(std::unique_ptr<RowOperator> op, ProfileNode* prof) {
    if (!profile_) return op;
    auto w = std::make_unique<ProfiledRow>(std::move(op), prof, exe_.timer.get());
    exe_.finalizers.push_back([p = w.get()] { p->finalize(); });
    return w;
  }

  ExecContext& ctx_;
  Executable& exe_;
  bool profile_;
};

}  // namespace

void apply_adapter_mode(PlanNode& root, AdapterMode mode, std::uint64_t seed) {
  if (mode == AdapterMode::kMinimal) return;
  std::mt19937_64 rng(seed);
  retag(root, std::nullopt, mode, rng);
}

Executable translate(const LogicalPlan& plan, ExecContext& ctx, bool profile) {
  Executable exe;
  if (profile) exe.timer = std::make_unique<ProfileTimer>();
  Translator t(ctx, exe, profile);
  if (plan.root->tag == ExecTag::kBatch) {
    exe.batch_root = t.batch(*plan.root, nullptr);
  } else {
    exe.row_root = t.row(*plan.root, nullptr);
  }
  return exe;
}

QueryResult run_query(const TripleStore& store, const Query& query, const QueryOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  PlannerOptions popts;
  popts.engine = options.engine;
  popts.merge_discount = options.merge_discount;
  LogicalPlan plan = plan_query(query, store, popts);
  apply_adapter_mode(*plan.root, options.adapters, options.adapter_seed);

  QueryResult out;
  out.plan = explain(*plan.root);
  ExecContext ctx(store, options.exec, plan.num_vars());
  std::vector<RowTuple> rows;
  {
    Executable exe = translate(plan, ctx, options.profile);
    out.adapters = exe.adapters;
    rows = exe.drain(plan.num_vars());
    exe.finalize();
    out.profile = std::move(exe.profile);
    out.rows_read = ctx.total_rows_read();
    for (const StorageReader* r : ctx.readers()) out.scans.push_back({r->reader_label(), r->rows_read()});
  }

  out.results.vars = plan.result_names;
  out.results.rows.reserve(rows.size());
  for (const auto& r : rows) {
    ResultRow row;
    row.reserve(plan.result_vars.size());
    for (VarId v : plan.result_vars) {
      TermId id = r[v.value];
      row.push_back(id.is_null() ? std::nullopt : std::optional<Term>(ctx.terms().decode(id)));
    }
    out.results.rows.push_back(std::move(row));
  }
  out.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return out;
}

QueryResult run_query(const TripleStore& store, std::string_view text, const QueryOptions& options) {
  return run_query(store, parse_query(text), options);
}

}  // namespace vqe
