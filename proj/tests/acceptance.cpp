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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "test_support.hpp"
#include "vqe/batch_ops.hpp"
#include "vqe/bench_suite.hpp"
#include "vqe/generators.hpp"
#include "vqe/oracle.hpp"
#include "vqe/planner.hpp"
#include "vqe/profiler.hpp"
#include "vqe/query.hpp"
#include "vqe/row_ops.hpp"
#include "vqe/session.hpp"

namespace vqe {
namespace {

using test::row;
using test::ScriptedBatchOp;
using test::ScriptedRowOp;
using test::term;
using test::vars;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

constexpr std::uint64_t kSeeds = 200;

struct Instance {
  TripleStore store;
  Query query;
  std::string text;
};

Instance instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TripleStore s = test::random_graph(rng, 500, 40);
  std::string text = test::random_query(rng);
  return Instance{std::move(s), parse_query(text), text};
}

QueryOptions engine(Engine e) {
  QueryOptions o;
  o.engine = e;
  return o;
}

// 1
Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::size_t mismatches = 0;
  std::size_t max_triples = 0;
  std::size_t max_terms = 0;
  std::string first_bad;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    Instance in = instance(seed);
    max_triples = std::max(max_triples, in.store.size());
    max_terms = std::max(max_terms, in.store.dictionary().size());
    ResultSet want = evaluate_naive(in.store, in.query);
    bool ok = run_query(in.store, in.query, engine(Engine::kBarq)).results.same_multiset(want) &&
              run_query(in.store, in.query, engine(Engine::kLegacy)).results.same_multiset(want);
    if (!ok) {
      ++mismatches;
      if (first_bad.empty()) first_bad = fmt::format(" first seed {}", seed);
    }
  }
  const double secs = seconds_since(start);
  bool bounds = max_triples <= 500 && max_terms <= 40;
  return {mismatches == 0 && bounds && secs < 120,
          fmt::format("{} seeds, {} mismatches{}, max {} triples / {} terms, {:.1f} s", kSeeds, mismatches, first_bad,
                      max_triples, max_terms, secs)};
}

// 2
Outcome merge_two_by_three() {
  TripleStore s;
  s.freeze();
  ExecContext c(s, ExecOptions{}, 3);
  std::vector<RowTuple> l = {row(3, {{0, 1}, {1, 11}}), row(3, {{0, 2}, {1, 12}}), row(3, {{0, 2}, {1, 13}})};
  std::vector<RowTuple> r = {row(3, {{0, 2}, {2, 21}}), row(3, {{0, 2}, {2, 22}}), row(3, {{0, 2}, {2, 23}})};
  VMergeJoin j(c, std::make_unique<ScriptedBatchOp>(c, vars({0, 1}), VarId{0}, l, 3),
               std::make_unique<ScriptedBatchOp>(c, vars({0, 2}), VarId{0}, r, 3), VarId{0}, vars({0, 1, 2}));
  auto out = drain_rows(j, 3);
  std::vector<std::uint64_t> left, right;
  for (const auto& t : out) {
    left.push_back(t[1].value);
    right.push_back(t[2].value);
  }
  bool ok = out.size() == 6 && left == std::vector<std::uint64_t>{12, 12, 12, 13, 13, 13} &&
            right == std::vector<std::uint64_t>{21, 22, 23, 21, 22, 23};
  return {ok, fmt::format("{} rows", out.size())};
}

std::uint64_t rows_out_of(const ProfileNode& n, const std::string& label) {
  if (n.label == label) return n.stats.rows_out;
  for (const auto& c : n.children) {
    if (auto v = rows_out_of(*c, label)) return v;
  }
  return 0;
}

// 3
Outcome two_hop_speedup() {
  const auto start = Clock::now();
  TripleStore s = make_two_hop(42);
  std::size_t nodes = s.distinct_values(
      TriplePattern{{PatternSlot::variable(VarId{0}), PatternSlot::constant(s.dictionary().find(term("knows"))),
                     PatternSlot::variable(VarId{1})}},
      VarId{0});
  std::size_t edges = s.count_range(TriplePattern{{PatternSlot::variable(VarId{0}),
                                                   PatternSlot::constant(s.dictionary().find(term("knows"))),
                                                   PatternSlot::variable(VarId{1})}});
  QueryOptions po = engine(Engine::kBarq);
  po.profile = true;
  QueryResult prof = run_query(s, kTwoHopQuery, po);
  std::uint64_t intermediate = rows_out_of(*prof.profile, "MergeJoin(?person2)");

  BenchConfig cfg;
  cfg.seed = 42;
  cfg.warmups = 2;
  cfg.runs = 5;
  BenchReport rep = run_bench("two_hop", cfg);
  double barq = rep.run("barq/adaptive").median_ms;
  double legacy = rep.run("legacy").median_ms;
  const double secs = seconds_since(start);
  bool ok = intermediate >= 10'000'000 && barq <= 0.5 * legacy && secs < 300;
  return {ok, fmt::format("{} nodes, mean degree {:.1f}, {} join rows, barq {:.1f} ms vs legacy {:.1f} ms ({:.2f}x), "
                          "{:.0f} s",
                          nodes, static_cast<double>(edges) / static_cast<double>(nodes), intermediate, barq, legacy,
                          legacy / barq, secs)};
}

// 4
Outcome selective_join_overfetch() {
  BenchConfig cfg;
  cfg.warmups = 0;
  cfg.runs = 1;
  BenchReport rep = run_bench("selective_join", cfg);
  std::uint64_t adaptive = rep.run("barq/adaptive").rows_read;
  std::uint64_t fixed = rep.run("barq/fixed").rows_read;
  std::uint64_t legacy = rep.run("legacy").rows_read;
  bool ok = adaptive <= 3 * legacy && fixed >= 3 * adaptive;
  return {ok, fmt::format("rows read legacy {}, adaptive {}, fixed {}", legacy, adaptive, fixed)};
}

// 5
Outcome sizer_behaviour() {
  TripleStore s;
  for (int i = 0; i < 40; ++i) {
    for (int o = 0; o < 100; ++o) s.insert(term("s" + std::to_string(i)), term("p"), Term::integer(o));
  }
  s.freeze();
  ExecContext c(s, ExecOptions{}, 2);
  TriplePattern p{{PatternSlot::variable(VarId{0}), PatternSlot::constant(s.dictionary().find(term("p"))),
                   PatternSlot::variable(VarId{1})}};
  ScanSpec spec{p, VarId{0}, vars({0, 1}), "Scan(?s, :p, ?o)"};

  VScan pure(c, spec);
  while (pure.next()) {
  }
  const auto& sizes = pure.batch_sizes();
  auto cap_at = std::find(sizes.begin(), sizes.end(), 512u);
  bool reaches = cap_at != sizes.end() && cap_at - sizes.begin() < 6;
  // The final batch is whatever is left in the range.
  bool stays = reaches && std::all_of(cap_at, sizes.end() - 1, [](std::size_t n) { return n == 512; });

  VScan skippy(c, spec);
  std::size_t largest = 0;
  while (auto b = skippy.next()) {
    largest = std::max(largest, b->active_count());
    const TermId* keys = b->column(0);
    skippy.skip(TermId{keys[b->sv()[b->active_count() - 1]].value + 1});
  }
  for (std::size_t n : skippy.batch_sizes()) largest = std::max(largest, n);

  AdaptiveSizer direct(16, 512, true);
  std::size_t direct_max = 0;
  for (int i = 0; i < 100; ++i) {
    direct_max = std::max(direct_max, direct.on_next());
    direct.on_skip();
  }
  bool ok = reaches && stays && largest <= 32 && direct_max <= 32;
  return {ok, fmt::format("pure-next cap at call {}, skip-heavy largest batch {}",
                          reaches ? cap_at - sizes.begin() + 1 : -1, largest)};
}

// 6
Outcome stream_vs_hash_group() {
  TripleStore s;
  for (int i = 1; i <= 60; ++i) s.dictionary().encode(Term::integer(i));
  for (int i = 1; i <= 60; ++i) s.insert(Term::integer(i), term("p"), term("o"));
  s.freeze();
  std::vector<AggregateSpec> aggs;
  std::uint32_t out = 2;
  for (AggKind k : {AggKind::kCount, AggKind::kCountDistinct, AggKind::kMin, AggKind::kMax, AggKind::kSum,
                    AggKind::kAvg}) {
    aggs.push_back(AggregateSpec{k, VarId{1}, VarId{out++}, ""});
  }
  aggs.push_back(AggregateSpec{AggKind::kCount, std::nullopt, VarId{out++}, ""});
  const std::size_t width = out;

  std::mt19937_64 rng(2024);
  std::size_t mismatches = 0;
  bool empty_global_ok = false;
  for (int trial = 0; trial < 100; ++trial) {
    ExecContext c(s, ExecOptions{}, width);
    std::vector<RowTuple> rows;
    // Every tenth input is empty.
    std::size_t n = trial % 10 == 0 ? 0 : 1 + rng() % 300;
    for (std::size_t i = 0; i < n; ++i) rows.push_back(row(width, {{0, 1 + rng() % 10}, {1, rng() % 63}}));
    std::stable_sort(rows.begin(), rows.end(), [](const RowTuple& a, const RowTuple& b) { return a[0] < b[0]; });
    const bool global = trial % 2 == 0;
    std::optional<VarId> gv = global ? std::nullopt : std::optional<VarId>(VarId{0});
    VStreamGroup sg(c, std::make_unique<ScriptedBatchOp>(c, vars({0, 1}), VarId{0}, rows, 1 + rng() % 40), gv, aggs);
    HashGroup hg(c, std::make_unique<ScriptedRowOp>(vars({0, 1}), VarId{0}, rows), gv, aggs);
    auto a = drain_rows(sg, width);
    auto b = drain_rows(hg);
    if (a != b) ++mismatches;
    if (global && rows.empty()) {
      empty_global_ok = a.size() == 1 && c.terms().decode(a[0][2]) == Term::integer(0) &&
                        c.terms().decode(a[0][out - 1]) == Term::integer(0) && a[0][4].is_null() && a == b;
    }
  }
  return {mismatches == 0 && empty_global_ok,
          fmt::format("100 inputs, {} mismatches, empty global row {}", mismatches, empty_global_ok ? "ok" : "wrong")};
}

// 7
Outcome distinct_skips() {
  TripleStore s;
  for (int k = 1; k <= 3; ++k) {
    for (int i = 0; i < 10000; ++i) s.insert(term("k" + std::to_string(k)), term("p"), Term::integer(i));
  }
  s.freeze();
  ExecContext c(s, ExecOptions{}, 2);
  TriplePattern p{{PatternSlot::variable(VarId{0}), PatternSlot::constant(s.dictionary().find(term("p"))),
                   PatternSlot::variable(VarId{1})}};
  auto scan = std::make_unique<VScan>(c, ScanSpec{p, VarId{0}, vars({0}), "Scan(?k, :p, ?v)"});
  VScan* raw = scan.get();
  VDistinct d(c, std::move(scan), VarId{0});
  auto got = drain_rows(d, 2);
  std::vector<RowTuple> want;
  for (int k = 1; k <= 3; ++k) want.push_back(row(2, {{0, s.dictionary().find(term("k" + std::to_string(k))).value}}));
  std::sort(want.begin(), want.end());
  const std::uint64_t duplicates = 3 * 10000 - 3;
  const std::uint64_t pulled = raw->rows_read();
  bool ok = got == want && pulled * 100 < duplicates;
  return {ok, fmt::format("{} rows pulled of {} duplicates ({:.2f}%), {} keys out", pulled, duplicates,
                          100.0 * static_cast<double>(pulled) / static_cast<double>(duplicates), got.size())};
}

// 8
Outcome adapter_transparency() {
  std::size_t plans = 0;
  std::size_t mismatches = 0;
  std::size_t adapters = 0;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    Instance in = instance(seed);
    ResultSet want = evaluate_naive(in.store, in.query);
    for (Engine e : {Engine::kBarq, Engine::kLegacy}) {
      QueryOptions o = engine(e);
      o.adapters = AdapterMode::kEveryBoundary;
      QueryResult r = run_query(in.store, in.query, o);
      adapters += r.adapters;
      ++plans;
      if (!r.results.same_multiset(want)) ++mismatches;
      o.adapters = AdapterMode::kRandom;
      o.adapter_seed = seed;
      ++plans;
      if (!run_query(in.store, in.query, o).results.same_multiset(want)) ++mismatches;
    }
  }
  return {mismatches == 0,
          fmt::format("{} forced-adapter plans, {} adapters inserted, {} mismatches", plans, adapters, mismatches)};
}

std::string topology(const std::string& rendered) {
  // Keep tree glyphs and labels, drop counters.
  static const std::regex counters(", results: .*");
  std::string out;
  std::istringstream in(rendered);
  for (std::string line; std::getline(in, line);) out += std::regex_replace(line, counters, "") + "\n";
  return out;
}

// 9
Outcome profiler_fidelity() {
  TripleStore s = test::make_store({{"a", "knows", "b"},
                                    {"a", "knows", "c"},
                                    {"b", "knows", "c"},
                                    {"c", "knows", "a"},
                                    {"d", "knows", "a"},
                                    {"a", "likes", "x"},
                                    {"b", "likes", "y"},
                                    {"c", "likes", "x"},
                                    {"e", "likes", "z"},
                                    {"f", "likes", "x"}});
  QueryOptions o = engine(Engine::kBarq);
  o.profile = true;
  QueryResult r = run_query(s, "SELECT ?p ?t WHERE { ?p :knows ?q . ?p :likes ?t . FILTER(?t != :y) }", o);

  struct Expect {
    std::string label;
    std::uint64_t results, next, skip;
  };
  // Hand trace. Scan(likes) is the smaller side (est 4 after the filter) so it
  // drives; it yields a,b,c,e,f in one batch, the filter drops b. The knows
  // scan yields a,a,b,c,d; after matching a and c the join skips knows to e,
  // which ends it.
  const std::vector<Expect> trace = {{"Project(?p, ?t)", 3, 2, 0},
                                     {"MergeJoin(?p)", 3, 2, 0},
                                     {"Filter(?t != :y)", 4, 1, 0},
                                     {"Scan(?p, :likes, ?t)", 5, 1, 0},
                                     {"Scan(?p, :knows, ?q)", 5, 2, 1}};
  std::vector<const ProfileNode*> flat;
  std::function<void(const ProfileNode&)> visit = [&](const ProfileNode& n) {
    flat.push_back(&n);
    for (const auto& c : n.children) visit(*c);
  };
  visit(*r.profile);
  bool counters = flat.size() == trace.size();
  for (std::size_t i = 0; counters && i < trace.size(); ++i) {
    const ProfileNode& n = *flat[i];
    counters = n.label == trace[i].label && n.stats.rows_out == trace[i].results &&
               n.stats.next_calls == trace[i].next && n.stats.skip_calls == trace[i].skip;
  }

  TripleStore big = make_two_hop(42);
  QueryResult hop = run_query(big, kTwoHopQuery, o);
  const std::string want_topology =
      "Group(aggregates=[(COUNT(*) AS ?count)])\n"
      "`- Filter(?person1 != ?person3)\n"
      "   `- MergeJoin(?person2)\n"
      "      +- Scan(?person1, :knows, ?person2)\n"
      "      `- Sort(?person2)\n"
      "         `- MergeJoin(?person3)\n"
      "            +- Scan(?person3, :interest, ?tag)\n"
      "            `- Scan(?person2, :knows, ?person3)\n";
  bool shape = topology(render_profile(*hop.profile)) == want_topology;
  return {counters && shape,
          fmt::format("hand trace counters {}, two-hop profile topology {}", counters ? "match" : "differ",
                      shape ? "matches" : "differs")};
}

double own_cost(const PlanNode& n, const PlannerOptions& o) {
  double c = plan_cost(n, o);
  for (const auto& ch : n.children) c -= plan_cost(*ch, o);
  return c;
}

const PlanNode* find_kind(const PlanNode& n, PlanKind k) {
  if (n.kind == k) return &n;
  for (const auto& c : n.children) {
    if (const PlanNode* f = find_kind(*c, k)) return f;
  }
  return nullptr;
}

bool merge_only(const PlanNode& n) {
  if (n.kind == PlanKind::kHashJoin) return false;
  return std::all_of(n.children.begin(), n.children.end(), [](const auto& c) { return merge_only(*c); });
}

// 10
Outcome cost_plan_flip() {
  TripleStore s = make_two_hop(42);
  Query q = parse_query(kTwoHopQuery);
  PlannerOptions on{Engine::kBarq, 0.5};
  PlannerOptions off{Engine::kBarq, 1.0};
  LogicalPlan with = plan_query(q, s, on);
  LogicalPlan without = plan_query(q, s, off);
  const PlanNode* top_merge = find_kind(*with.root, PlanKind::kMergeJoin);
  const PlanNode* alt = find_kind(*without.root, PlanKind::kHashJoin);
  if (!top_merge || !alt) return {false, "expected a merge-join tree with the discount and a hash join without"};

  const double merge_on = plan_cost(*with.root, on);
  const double merge_off = plan_cost(*with.root, off);
  const double alt_on = own_cost(*alt, on);
  const double alt_off = own_cost(*alt, off);
  bool ok = merge_only(*with.root) && merge_on < merge_off && alt_on == alt_off &&
            merge_on < plan_cost(*without.root, on) && plan_cost(*without.root, off) <= merge_off;
  return {ok, fmt::format("merge tree {:.4g} -> {:.4g} with discount, hash alternative {:.4g} -> {:.4g}; "
                          "planner picks {} without the discount",
                          merge_off, merge_on, alt_off, alt_on, alt->label)};
}

}  // namespace
}  // namespace vqe

int main() {
  using namespace vqe;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"merge join 2x3 group", merge_two_by_three},
      {"two_hop speedup", two_hop_speedup},
      {"selective_join overfetching", selective_join_overfetch},
      {"adaptive sizer", sizer_behaviour},
      {"streaming vs hash aggregation", stream_vs_hash_group},
      {"skip-based distinct", distinct_skips},
      {"adapter transparency", adapter_transparency},
      {"profiler fidelity", profiler_fidelity},
      {"cost model plan flip", cost_plan_flip},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << fmt::format("{} {:2} {}: {}", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail)
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
