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

#include "vqe/planner.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "vqe/errors.hpp"

namespace vqe {

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::kBarq: return "barq";
    case Engine::kLegacy: return "legacy";
    case Engine::kAuto: return "auto";
  }
  return "?";
}

std::string_view to_string(PlanKind k) {
  switch (k) {
    case PlanKind::kScan: return "Scan";
    case PlanKind::kMergeJoin: return "MergeJoin";
    case PlanKind::kHashJoin: return "HashJoin";
    case PlanKind::kFilter: return "Filter";
    case PlanKind::kGroup: return "Group";
    case PlanKind::kDistinct: return "Distinct";
    case PlanKind::kUnion: return "Union";
    case PlanKind::kSort: return "Sort";
    case PlanKind::kProject: return "Project";
    case PlanKind::kLimit: return "Limit";
  }
  return "?";
}

namespace {

bool contains(const std::vector<VarId>& vs, VarId v) { return std::find(vs.begin(), vs.end(), v) != vs.end(); }

void add_unique(std::vector<VarId>& vs, VarId v) {
  if (!contains(vs, v)) vs.push_back(v);
}

std::vector<VarId> all_vars(const PlanNode& n) {
  std::vector<VarId> out = n.bound_vars;
  for (VarId v : n.maybe_vars) add_unique(out, v);
  return out;
}

bool same_set(std::vector<VarId> a, std::vector<VarId> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

double distinct_of(const PlanNode& n, VarId v) {
  auto it = n.distinct.find(v.value);
  return it == n.distinct.end() ? n.est_rows : std::min(it->second, n.est_rows);
}

double selectivity(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kCompare:
      if (e.op == CmpOp::kEq) return 0.1;
      if (e.op == CmpOp::kNe) return 0.9;
      return 0.5;
    case Expr::Kind::kBound: return 0.9;
    case Expr::Kind::kAnd: return selectivity(e.args[0]) * selectivity(e.args[1]);
    case Expr::Kind::kOr: return std::min(1.0, selectivity(e.args[0]) + selectivity(e.args[1]));
    case Expr::Kind::kNot: return std::max(0.05, 1.0 - selectivity(e.args[0]));
    default: return 1.0;
  }
}

bool can_provide_sort(const PlanNode& n, VarId v, const TripleStore& store) {
  switch (n.kind) {
    case PlanKind::kScan:
      if (n.sort_var) return *n.sort_var == v;
      return n.pattern.has_var(v) && store.can_sort_by(n.pattern, v);
    case PlanKind::kFilter:
    case PlanKind::kLimit: return can_provide_sort(*n.children[0], v, store);
    case PlanKind::kProject: return contains(n.output_vars, v) && can_provide_sort(*n.children[0], v, store);
    case PlanKind::kUnion:
      return std::all_of(n.children.begin(), n.children.end(), [&](const auto& c) {
        return contains(c->bound_vars, v) && can_provide_sort(*c, v, store);
      });
    case PlanKind::kMergeJoin:
    case PlanKind::kSort: return n.key == v;
    case PlanKind::kGroup: return n.group_var && *n.group_var == v;
    default: return false;
  }
}

// Caller checked can_provide_sort.
void provide_sort(PlanNode& n, VarId v) {
  switch (n.kind) {
    case PlanKind::kFilter:
    case PlanKind::kLimit:
    case PlanKind::kProject:
    case PlanKind::kUnion:
      for (auto& c : n.children) provide_sort(*c, v);
      break;
    default: break;
  }
  n.sort_var = v;
}

std::string var_text(const std::vector<std::string>& names, VarId v) {
  const std::string& n = names[v.value];
  return n.rfind("_:", 0) == 0 ? n : "?" + n;
}

std::string var_list(const std::vector<std::string>& names, const std::vector<VarId>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i > 0) out += ", ";
    out += var_text(names, vs[i]);
  }
  return out;
}

std::string aggregate_label(const AggregateExpr& a) {
  std::string fn = a.kind == AggKind::kCountDistinct ? "COUNT" : std::string(to_string(a.kind));
  std::string arg = !a.arg ? "*" : (a.kind == AggKind::kCountDistinct ? "DISTINCT ?" : "?") + *a.arg;
  return "(" + fn + "(" + arg + ") AS ?" + a.alias + ")";
}

class Builder {
 public:
  Builder(const TripleStore& store, const PlannerOptions& opts) : store_(store), opts_(opts) {}

  VarId intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    VarId v{static_cast<std::uint32_t>(names_.size())};
    names_.push_back(name);
    ids_.emplace(name, v);
    return v;
  }

  void register_vars(const GroupPattern& g) {
    for (const auto& t : g.triples) {
      for (const QueryTerm* qt : {&t.s, &t.p, &t.o}) {
        if (qt->is_var) intern(qt->var);
      }
    }
    for (const auto& u : g.unions) {
      for (const auto& b : u.branches) register_vars(b);
    }
    for (const auto& f : g.filters) {
      for (const auto& n : f.vars()) intern(n);
    }
  }

  VarId id_of(const std::string& name) const { return ids_.at(name); }
  std::vector<std::string>& names() { return names_; }

  std::unique_ptr<PlanNode> scan(const QueryTriple& t) {
    auto n = std::make_unique<PlanNode>();
    n->kind = PlanKind::kScan;
    n->source = t;
    const QueryTerm* qts[3] = {&t.s, &t.p, &t.o};
    for (int i = 0; i < 3; ++i) {
      n->pattern.slots[i] = qts[i]->is_var ? PatternSlot::variable(id_of(qts[i]->var))
                                           : PatternSlot::constant(store_.dictionary().find(qts[i]->term));
    }
    n->bound_vars = n->pattern.vars();
    n->output_vars = n->bound_vars;
    n->est_rows = static_cast<double>(store_.count_range(n->pattern));
    for (VarId v : n->bound_vars) n->distinct[v.value] = static_cast<double>(store_.distinct_values(n->pattern, v));
    return n;
  }

  std::unique_ptr<PlanNode> union_node(const UnionPattern& u) {
    auto n = std::make_unique<PlanNode>();
    n->kind = PlanKind::kUnion;
    for (const auto& b : u.branches) n->children.push_back(group(b));
    n->bound_vars = n->children[0]->bound_vars;
    for (const auto& c : n->children) {
      std::erase_if(n->bound_vars, [&](VarId v) { return !contains(c->bound_vars, v); });
    }
    for (const auto& c : n->children) {
      for (VarId v : all_vars(*c)) {
        if (!contains(n->bound_vars, v)) add_unique(n->maybe_vars, v);
      }
      n->est_rows += c->est_rows;
      for (auto [k, d] : c->distinct) n->distinct[k] += d;
    }
    for (auto& [k, d] : n->distinct) d = std::min(d, n->est_rows);
    n->output_vars = all_vars(*n);
    return n;
  }

  std::unique_ptr<PlanNode> filter(std::unique_ptr<PlanNode> child, const Expr& e) {
    auto n = std::make_unique<PlanNode>();
    n->kind = PlanKind::kFilter;
    n->expr = e;
    n->filter = compile_filter(e, [this](const std::string& name) { return id_of(name); }, store_.dictionary());
    n->est_rows = child->est_rows * selectivity(e);
    for (auto [k, d] : child->distinct) n->distinct[k] = std::min(d, n->est_rows);
    n->bound_vars = child->bound_vars;
    n->maybe_vars = child->maybe_vars;
    n->output_vars = child->output_vars;
    n->sort_var = child->sort_var;
    n->children.push_back(std::move(child));
    return n;
  }

  std::unique_ptr<PlanNode> sort(std::unique_ptr<PlanNode> child, VarId key) {
    auto n = std::make_unique<PlanNode>();
    n->kind = PlanKind::kSort;
    n->key = key;
    n->sort_var = key;
    n->est_rows = child->est_rows;
    n->distinct = child->distinct;
    n->bound_vars = child->bound_vars;
    n->maybe_vars = child->maybe_vars;
    n->output_vars = child->output_vars;
    n->children.push_back(std::move(child));
    return n;
  }

  // Estimates and variable sets of a join of a and b (children not attached).
  std::unique_ptr<PlanNode> join_shell(const PlanNode& a, const PlanNode& b, const std::vector<VarId>& shared) {
    auto n = std::make_unique<PlanNode>();
    double est = a.est_rows * b.est_rows;
    for (VarId v : shared) est /= std::max(1.0, std::max(distinct_of(a, v), distinct_of(b, v)));
    n->est_rows = est;
    for (const PlanNode* side : {&a, &b}) {
      for (auto [k, d] : side->distinct) {
        auto it = n->distinct.find(k);
        n->distinct[k] = it == n->distinct.end() ? d : std::min(it->second, d);
      }
    }
    for (auto& [k, d] : n->distinct) d = std::min(d, est);
    n->bound_vars = a.bound_vars;
    for (VarId v : b.bound_vars) add_unique(n->bound_vars, v);
    n->maybe_vars = a.maybe_vars;
    for (VarId v : b.maybe_vars) add_unique(n->maybe_vars, v);
    n->join_vars = shared;
    return n;
  }

  std::unique_ptr<PlanNode> join(std::unique_ptr<PlanNode> a, std::unique_ptr<PlanNode> b) {
    std::vector<VarId> shared;
    for (VarId v : all_vars(*a)) {
      if (!contains(all_vars(*b), v)) continue;
      if (!contains(a->bound_vars, v) || !contains(b->bound_vars, v)) {
        throw UnsupportedFeature("join on ?" + names_[v.value] + ", which is unbound in some UNION branch");
      }
      shared.push_back(v);
    }

    std::unique_ptr<PlanNode> best;
    double best_cost = 0;
    auto consider = [&](std::unique_ptr<PlanNode> cand) {
      double c = plan_cost(*cand, opts_);
      if (!best || c < best_cost) {
        best = std::move(cand);
        best_cost = c;
      }
    };

    for (VarId v : shared) {
      auto l = a->clone();
      auto r = b->clone();
      if (can_provide_sort(*l, v, store_)) {
        provide_sort(*l, v);
      } else {
        l = sort(std::move(l), v);
      }
      if (can_provide_sort(*r, v, store_)) {
        provide_sort(*r, v);
      } else {
        r = sort(std::move(r), v);
      }
      if (r->est_rows < l->est_rows) std::swap(l, r);
      auto n = join_shell(*l, *r, shared);
      n->kind = PlanKind::kMergeJoin;
      n->key = v;
      n->sort_var = v;
      n->children.push_back(std::move(l));
      n->children.push_back(std::move(r));
      n->output_vars = all_vars(*n);
      consider(std::move(n));
    }

    {
      // Probe first, build (smaller) second.
      auto probe = a->clone();
      auto build = b->clone();
      if (probe->est_rows < build->est_rows) std::swap(probe, build);
      auto n = join_shell(*probe, *build, shared);
      n->kind = PlanKind::kHashJoin;
      n->children.push_back(std::move(probe));
      n->children.push_back(std::move(build));
      n->output_vars = all_vars(*n);
      consider(std::move(n));
    }
    return best;
  }

  std::unique_ptr<PlanNode> group(const GroupPattern& g) {
    struct Pending {
      const Expr* expr;
      std::vector<VarId> vars;
      bool done = false;
    };
    std::vector<Pending> filters;
    for (const auto& f : g.filters) {
      Pending p{&f, {}};
      for (const auto& name : f.vars()) add_unique(p.vars, id_of(name));
      filters.push_back(std::move(p));
    }
    auto attach = [&](std::unique_ptr<PlanNode> n, bool final_step) {
      for (auto& p : filters) {
        if (p.done) continue;
        bool ready = final_step || std::all_of(p.vars.begin(), p.vars.end(),
                                               [&](VarId v) { return contains(n->bound_vars, v); });
        if (ready) {
          n = filter(std::move(n), *p.expr);
          p.done = true;
        }
      }
      return n;
    };

    std::vector<std::unique_ptr<PlanNode>> items;
    for (const auto& t : g.triples) items.push_back(attach(scan(t), false));
    for (const auto& u : g.unions) items.push_back(attach(union_node(u), false));
    if (items.empty()) throw UnsupportedFeature("empty group pattern");

    auto take_min = [&](auto pred) -> std::unique_ptr<PlanNode> {
      std::optional<std::size_t> pick;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (!pred(*items[i])) continue;
        if (!pick || items[i]->est_rows < items[*pick]->est_rows) pick = i;
      }
      if (!pick) return nullptr;
      auto n = std::move(items[*pick]);
      items.erase(items.begin() + static_cast<std::ptrdiff_t>(*pick));
      return n;
    };
    auto any = [](const PlanNode&) { return true; };

    std::unique_ptr<PlanNode> cur = take_min(any);
    while (!items.empty()) {
      const auto cur_vars = all_vars(*cur);
      auto next = take_min([&](const PlanNode& n) {
        const auto vs = all_vars(n);
        return std::any_of(vs.begin(), vs.end(), [&](VarId v) { return contains(cur_vars, v); });
      });
      if (!next) next = take_min(any);
      cur = attach(join(std::move(cur), std::move(next)), false);
    }
    return attach(std::move(cur), true);
  }

  std::unique_ptr<PlanNode> wrap(PlanKind kind, std::unique_ptr<PlanNode> child) {
    auto n = std::make_unique<PlanNode>();
    n->kind = kind;
    n->est_rows = child->est_rows;
    n->distinct = child->distinct;
    n->bound_vars = child->bound_vars;
    n->maybe_vars = child->maybe_vars;
    n->output_vars = child->output_vars;
    n->sort_var = child->sort_var;
    n->children.push_back(std::move(child));
    return n;
  }

  const TripleStore& store() const { return store_; }

 private:
  const TripleStore& store_;
  const PlannerOptions& opts_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> ids_;
};

std::vector<VarId> ordered_subset(const std::vector<VarId>& order, const std::vector<VarId>& keep) {
  std::vector<VarId> out;
  for (VarId v : order) {
    if (contains(keep, v)) add_unique(out, v);
  }
  return out;
}

// Narrows every node's columns to what its ancestors read.
void prune(PlanNode& n, std::vector<VarId> needed) {
  switch (n.kind) {
    case PlanKind::kScan: {
      if (n.sort_var) add_unique(needed, *n.sort_var);
      auto out = ordered_subset(n.bound_vars, needed);
      if (out.empty() && !n.bound_vars.empty()) out.push_back(n.bound_vars[0]);
      n.output_vars = out;
      return;
    }
    case PlanKind::kFilter:
      for (VarId v : n.filter.vars()) add_unique(needed, v);
      prune(*n.children[0], needed);
      n.output_vars = n.children[0]->output_vars;
      return;
    case PlanKind::kSort:
      add_unique(needed, n.key);
      prune(*n.children[0], needed);
      n.output_vars = n.children[0]->output_vars;
      return;
    case PlanKind::kLimit:
    case PlanKind::kDistinct:
      for (VarId v : n.output_vars) add_unique(needed, v);
      prune(*n.children[0], needed);
      n.output_vars = n.children[0]->output_vars;
      return;
    case PlanKind::kProject: {
      auto& c = *n.children[0];
      prune(c, ordered_subset(all_vars(c), n.output_vars));
      return;
    }
    case PlanKind::kGroup: {
      std::vector<VarId> in;
      if (n.group_var) in.push_back(*n.group_var);
      for (const auto& a : n.aggregates) {
        if (a.arg) add_unique(in, *a.arg);
      }
      prune(*n.children[0], in);
      return;
    }
    case PlanKind::kMergeJoin:
    case PlanKind::kHashJoin: {
      std::vector<VarId> child_needed = needed;
      for (VarId v : n.join_vars) add_unique(child_needed, v);
      for (auto& c : n.children) prune(*c, ordered_subset(all_vars(*c), child_needed));
      std::vector<VarId> keep = needed;
      if (n.kind == PlanKind::kMergeJoin) add_unique(keep, n.key);
      std::vector<VarId> order = n.children[0]->output_vars;
      for (VarId v : n.children[1]->output_vars) add_unique(order, v);
      auto out = ordered_subset(order, keep);
      if (out.empty() && !order.empty()) out.push_back(order[0]);
      n.output_vars = out;
      return;
    }
    case PlanKind::kUnion: {
      if (n.sort_var) add_unique(needed, *n.sort_var);
      std::vector<VarId> out;
      for (auto& c : n.children) {
        prune(*c, ordered_subset(all_vars(*c), needed));
        for (VarId v : c->output_vars) add_unique(out, v);
      }
      n.output_vars = ordered_subset(all_vars(n), out);
      return;
    }
  }
}

void assign_labels(PlanNode& n, const std::vector<std::string>& names) {
  switch (n.kind) {
    case PlanKind::kScan: {
      auto text = [&](const QueryTerm& t) {
        if (!t.is_var) return display_term(t.term);
        return t.var.rfind("_:", 0) == 0 ? t.var : "?" + t.var;
      };
      n.label = "Scan(" + text(n.source.s) + ", " + text(n.source.p) + ", " + text(n.source.o) + ")";
      break;
    }
    case PlanKind::kMergeJoin: n.label = "MergeJoin(" + var_text(names, n.key) + ")"; break;
    case PlanKind::kHashJoin: n.label = "HashJoin(" + var_list(names, n.join_vars) + ")"; break;
    case PlanKind::kFilter: n.label = "Filter(" + to_string(n.expr) + ")"; break;
    case PlanKind::kGroup: {
      std::string aggs;
      for (std::size_t i = 0; i < n.aggregates.size(); ++i) {
        if (i > 0) aggs += ", ";
        aggs += n.aggregates[i].label;
      }
      n.label = n.group_var ? "Group(by=[" + var_text(names, *n.group_var) + "], aggregates=[" + aggs + "])"
                            : "Group(aggregates=[" + aggs + "])";
      break;
    }
    case PlanKind::kDistinct: n.label = "Distinct"; break;
    case PlanKind::kUnion: n.label = "Union"; break;
    case PlanKind::kSort: n.label = "Sort(" + var_text(names, n.key) + ")"; break;
    case PlanKind::kProject: n.label = "Project(" + var_list(names, n.output_vars) + ")"; break;
    case PlanKind::kLimit: n.label = "Limit(" + std::to_string(n.limit) + ")"; break;
  }
  for (auto& c : n.children) assign_labels(*c, names);
}

}  // namespace

std::unique_ptr<PlanNode> PlanNode::clone() const {
  auto n = std::make_unique<PlanNode>();
  n->kind = kind;
  for (const auto& c : children) n->children.push_back(c->clone());
  n->output_vars = output_vars;
  n->bound_vars = bound_vars;
  n->maybe_vars = maybe_vars;
  n->sort_var = sort_var;
  n->est_rows = est_rows;
  n->distinct = distinct;
  n->pattern = pattern;
  n->source = source;
  n->key = key;
  n->join_vars = join_vars;
  n->expr = expr;
  n->filter = filter;
  n->group_var = group_var;
  n->aggregates = aggregates;
  n->streaming = streaming;
  n->limit = limit;
  n->tag = tag;
  n->label = label;
  return n;
}

bool PlanNode::batch_capable() const {
  switch (kind) {
    case PlanKind::kHashJoin: return false;
    case PlanKind::kGroup: return streaming;
    case PlanKind::kDistinct:
      return output_vars.size() == 1 && children[0]->sort_var && *children[0]->sort_var == output_vars[0];
    case PlanKind::kProject:
      return std::all_of(output_vars.begin(), output_vars.end(),
                         [&](VarId v) { return contains(children[0]->output_vars, v); });
    default: return true;
  }
}

bool PlanNode::amplifying() const {
  if (kind != PlanKind::kMergeJoin) return false;
  double m = 0;
  for (const auto& c : children) m = std::max(m, c->est_rows);
  return est_rows > m;
}

double node_weight(PlanKind k) {
  switch (k) {
    case PlanKind::kScan:
    case PlanKind::kMergeJoin:
    case PlanKind::kHashJoin: return 1.0;
    case PlanKind::kSort: return 2.0;
    case PlanKind::kFilter:
    case PlanKind::kUnion: return 0.25;
    case PlanKind::kGroup:
    case PlanKind::kDistinct: return 0.5;
    case PlanKind::kProject: return 0.1;
    case PlanKind::kLimit: return 0.0;
  }
  return 1.0;
}

double plan_cost(const PlanNode& node, const PlannerOptions& opts) {
  double rows_in = 0;
  double sub = 0;
  if (node.kind == PlanKind::kScan) rows_in = node.est_rows;
  for (const auto& c : node.children) {
    rows_in += c->est_rows;
    sub += plan_cost(*c, opts);
  }
  double own = (rows_in + node.est_rows) * node_weight(node.kind);
  if (node.amplifying() && opts.engine != Engine::kLegacy) own *= opts.merge_discount;
  return own + sub;
}

LogicalPlan plan_query(const Query& q, const TripleStore& store, const PlannerOptions& opts) {
  Builder b(store, opts);
  b.register_vars(q.where);
  for (const auto& item : q.select) {
    if (!item.is_aggregate) continue;
    b.intern(item.aggregate.alias);
    // An argument the pattern never binds is simply unbound everywhere.
    if (item.aggregate.arg) b.intern(*item.aggregate.arg);
  }
  const auto result_names = q.result_vars();
  for (const auto& name : result_names) b.intern(name);

  std::unique_ptr<PlanNode> root = b.group(q.where);

  if (q.has_aggregates() || q.group_by) {
    auto g = std::make_unique<PlanNode>();
    g->kind = PlanKind::kGroup;
    if (q.group_by) {
      VarId gv = b.id_of(*q.group_by);
      g->group_var = gv;
      if (can_provide_sort(*root, gv, store)) {
        provide_sort(*root, gv);
        g->streaming = true;
      }
      g->est_rows = distinct_of(*root, gv);
      g->distinct[gv.value] = g->est_rows;
      g->sort_var = gv;
      g->bound_vars.push_back(gv);
    } else {
      g->streaming = true;
      g->est_rows = 1;
    }
    for (const auto& item : q.select) {
      if (!item.is_aggregate) continue;
      AggregateSpec spec;
      spec.kind = item.aggregate.kind;
      if (item.aggregate.arg) spec.arg = b.id_of(*item.aggregate.arg);
      spec.out = b.id_of(item.aggregate.alias);
      spec.label = aggregate_label(item.aggregate);
      g->maybe_vars.push_back(spec.out);
      g->aggregates.push_back(std::move(spec));
    }
    g->output_vars = all_vars(*g);
    g->children.push_back(std::move(root));
    root = std::move(g);
  }

  std::vector<VarId> result_vars;
  for (const auto& name : result_names) result_vars.push_back(b.id_of(name));

  // Aggregates already emit exactly the projection when the sets agree.
  bool aggregated = root->kind == PlanKind::kGroup;
  if (!aggregated || !same_set(root->output_vars, result_vars)) {
    root = b.wrap(PlanKind::kProject, std::move(root));
    root->output_vars = result_vars;
    if (root->sort_var && !contains(result_vars, *root->sort_var)) root->sort_var.reset();
  }
  if (q.distinct) {
    if (result_vars.size() == 1 && can_provide_sort(*root, result_vars[0], store)) provide_sort(*root, result_vars[0]);
    root = b.wrap(PlanKind::kDistinct, std::move(root));
    if (result_vars.size() == 1) root->est_rows = distinct_of(*root, result_vars[0]);
  }
  if (q.limit) {
    root = b.wrap(PlanKind::kLimit, std::move(root));
    root->limit = *q.limit;
    root->est_rows = std::min(root->est_rows, static_cast<double>(*q.limit));
  }

  prune(*root, result_vars);
  assign_labels(*root, b.names());

  LogicalPlan plan;
  plan.root = std::move(root);
  plan.var_names = b.names();
  plan.result_names = result_names;
  plan.result_vars = result_vars;
  choose_executors(*plan.root, opts.engine);
  return plan;
}

void choose_executors(PlanNode& n, Engine engine) {
  bool children_batch = true;
  for (auto& c : n.children) {
    choose_executors(*c, engine);
    children_batch = children_batch && c->tag == ExecTag::kBatch;
  }
  bool batch = false;
  switch (engine) {
    case Engine::kLegacy: batch = false; break;
    case Engine::kBarq: batch = n.batch_capable(); break;
    case Engine::kAuto: batch = n.batch_capable() && (children_batch || n.amplifying()); break;
  }
  n.tag = batch ? ExecTag::kBatch : ExecTag::kRow;
}

std::size_t count_boundaries(const PlanNode& n) {
  std::size_t k = 0;
  for (const auto& c : n.children) k += (c->tag != n.tag ? 1 : 0) + count_boundaries(*c);
  return k;
}

namespace {

void explain_into(const PlanNode& n, const std::string& prefix, const std::string& child_prefix, std::string& out) {
  out += prefix + n.label +
         fmt::format(" [est: {:.0f}, {}]\n", n.est_rows, n.tag == ExecTag::kBatch ? "batch" : "row");
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    bool last = i + 1 == n.children.size();
    explain_into(*n.children[i], child_prefix + (last ? "`- " : "+- "), child_prefix + (last ? "   " : "|  "), out);
  }
}

}  // namespace

std::string explain(const PlanNode& root) {
  std::string out;
  explain_into(root, "", "", out);
  return out;
}

}  // namespace vqe
