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

#include <functional>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vqe/errors.hpp"
#include "vqe/generators.hpp"
#include "vqe/oracle.hpp"
#include "vqe/planner.hpp"
#include "vqe/query.hpp"
#include "vqe/session.hpp"

namespace vqe {
namespace {

// Compact shape: Label[child;child]
std::string shape(const PlanNode& n) {
  std::string out = n.label;
  if (n.children.empty()) return out;
  out += "[";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ";";
    out += shape(*n.children[i]);
  }
  return out + "]";
}

const PlanNode* find(const PlanNode& n, PlanKind k) {
  if (n.kind == k) return &n;
  for (const auto& c : n.children) {
    if (const PlanNode* f = find(*c, k)) return f;
  }
  return nullptr;
}

void walk(const PlanNode& n, const std::function<void(const PlanNode&)>& f) {
  f(n);
  for (const auto& c : n.children) walk(*c, f);
}

double own_cost(const PlanNode& n, const PlannerOptions& o) {
  double c = plan_cost(n, o);
  for (const auto& ch : n.children) c -= plan_cost(*ch, o);
  return c;
}

PlannerOptions popts(Engine e, double d = 0.5) {
  PlannerOptions o;
  o.engine = e;
  o.merge_discount = d;
  return o;
}

// ---- parser ----

TEST(Parse, TwoHopQuery) {
  Query q = parse_query(kTwoHopQuery);
  EXPECT_EQ(q.where.triples.size(), 3u);
  EXPECT_EQ(q.where.filters.size(), 1u);
  ASSERT_EQ(q.select.size(), 1u);
  EXPECT_TRUE(q.select[0].is_aggregate);
  EXPECT_EQ(q.select[0].aggregate.kind, AggKind::kCount);
  EXPECT_FALSE(q.select[0].aggregate.arg);
  EXPECT_FALSE(q.group_by);
}

TEST(Parse, SelectStarSinglePattern) {
  Query q = parse_query("SELECT * { ?s ?p ?o }");
  EXPECT_TRUE(q.select_all);
  ASSERT_EQ(q.where.triples.size(), 1u);
  EXPECT_TRUE(q.where.triples[0].p.is_var);
  EXPECT_EQ(q.result_vars(), (std::vector<std::string>{"s", "p", "o"}));
}

TEST(Parse, UnsupportedKeywords) {
  for (const char* text : {"SELECT * { ?s ?p ?o OPTIONAL { ?o ?p ?s } }",
                           "SELECT * { ?s ?p ?o } ORDER BY ?s",
                           "ASK { ?s ?p ?o }",
                           "SELECT * { ?s ?p ?o MINUS { ?s :q ?o } }",
                           "SELECT * { ?s :a/:b ?o }"}) {
    EXPECT_THROW(parse_query(text), UnsupportedFeature) << text;
  }
}

TEST(Parse, ErrorCarriesPosition) {
  try {
    parse_query("SELECT ?x WHERE {\n  ?x :p \n}");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GE(e.column(), 1u);
  }
}

TEST(Parse, AggregatesAndGroupBy) {
  Query q = parse_query(kGroupDistinctQuery);
  ASSERT_TRUE(q.group_by);
  EXPECT_EQ(*q.group_by, "person");
  ASSERT_EQ(q.select.size(), 3u);
  EXPECT_EQ(q.select[1].aggregate.kind, AggKind::kCountDistinct);
  EXPECT_EQ(q.result_vars(), (std::vector<std::string>{"person", "friends", "interests"}));
}

TEST(Parse, FilterAndGroupMayFollowTripleWithoutDot) {
  Query q = parse_query("SELECT * { ?x :p ?o FILTER(?o != :b) ?o :q ?z { ?z :r ?w } }");
  EXPECT_EQ(q.where.triples.size(), 3u);
  EXPECT_EQ(q.where.filters.size(), 1u);
  EXPECT_THROW(parse_query("SELECT * { ?x :p ?o ?y :q ?z }"), ParseError);
}

TEST(Parse, UngroupedVariableRejected) {
  EXPECT_THROW(parse_query("SELECT ?x (COUNT(*) AS ?c) { ?x :p ?y }"), Error);
}

// ---- plans ----

TEST(Plan, SinglePatternIsScanAndProject) {
  TripleStore s = test::example_graph();
  LogicalPlan p = plan_query(parse_query("SELECT ?x { ?x :knows ?y }"), s, popts(Engine::kBarq));
  EXPECT_EQ(shape(*p.root), "Project(?x)[Scan(?x, :knows, ?y)]");
  EXPECT_EQ(p.root->tag, ExecTag::kBatch);
}

TEST(Plan, SeedIsMostSelectivePattern) {
  TripleStore s = make_selective_join(42);
  LogicalPlan p = plan_query(parse_query(kSelectiveJoinQuery), s, popts(Engine::kBarq));
  // The deepest left leaf is the type pattern.
  const PlanNode* n = p.root.get();
  while (!n->children.empty()) n = n->children[0].get();
  EXPECT_NE(n->label.find("ProductType22"), std::string::npos) << explain(*p.root);
}

TEST(Plan, TwoHopShapeUnderBarq) {
  TripleStore s = make_two_hop(42);
  LogicalPlan p = plan_query(parse_query(kTwoHopQuery), s, popts(Engine::kBarq));
  EXPECT_EQ(shape(*p.root),
            "Group(aggregates=[(COUNT(*) AS ?count)])[Filter(?person1 != ?person3)[MergeJoin(?person2)["
            "Scan(?person1, :knows, ?person2);Sort(?person2)[MergeJoin(?person3)[Scan(?person3, :interest, "
            "?tag);Scan(?person2, :knows, ?person3)]]]]]")
      << explain(*p.root);
  walk(*p.root, [](const PlanNode& n) { EXPECT_EQ(n.tag, ExecTag::kBatch) << n.label; });
}

TEST(Plan, TwoHopLegacyUsesHashJoinAndRows) {
  TripleStore s = make_two_hop(42);
  LogicalPlan p = plan_query(parse_query(kTwoHopQuery), s, popts(Engine::kLegacy));
  ASSERT_NE(find(*p.root, PlanKind::kHashJoin), nullptr) << explain(*p.root);
  walk(*p.root, [](const PlanNode& n) { EXPECT_EQ(n.tag, ExecTag::kRow) << n.label; });
}

TEST(Plan, MergeJoinSmallerSideLeft) {
  TripleStore s = make_two_hop(42);
  LogicalPlan p = plan_query(parse_query(kTwoHopQuery), s, popts(Engine::kBarq));
  walk(*p.root, [](const PlanNode& n) {
    if (n.kind == PlanKind::kMergeJoin) {
      EXPECT_LE(n.children[0]->est_rows, n.children[1]->est_rows) << n.label;
    }
  });
}

TEST(Plan, FilterPushedToLowestBindingNode) {
  TripleStore s = test::make_store({{"a", "knows", "b"}, {"a", "likes", "x"}, {"b", "likes", "y"}});
  LogicalPlan p = plan_query(parse_query("SELECT ?p ?t WHERE { ?p :knows ?q . ?p :likes ?t . FILTER(?t != :y) }"),
                             s, popts(Engine::kBarq));
  const PlanNode* f = find(*p.root, PlanKind::kFilter);
  ASSERT_NE(f, nullptr);
  ASSERT_EQ(f->children.size(), 1u);
  EXPECT_EQ(f->children[0]->kind, PlanKind::kScan);
  EXPECT_NE(f->children[0]->label.find(":likes"), std::string::npos);
}

TEST(Plan, ProjectOmittedWhenAggregateOutputMatches) {
  TripleStore s = make_two_hop(42);
  LogicalPlan p = plan_query(parse_query(kTwoHopQuery), s, popts(Engine::kBarq));
  EXPECT_EQ(p.root->kind, PlanKind::kGroup);
}

TEST(Executors, AllScanMergeHasNoAdapters) {
  TripleStore s = test::example_graph();
  QueryOptions o;
  o.engine = Engine::kBarq;
  QueryResult r = run_query(s, "SELECT ?x ?z { ?x :knows ?y . ?y :worksAt ?z }", o);
  EXPECT_EQ(r.adapters, 0u);
  ASSERT_EQ(r.results.rows.size(), 1u);
}

TEST(Executors, HashGroupOverBatchJoinNeedsOneAdapter) {
  TripleStore s = make_two_hop(42, 1);
  LogicalPlan p = plan_query(parse_query("SELECT ?t (COUNT(*) AS ?c) { ?a :knows ?b . ?b :interest ?t } GROUP BY ?t"),
                             s, popts(Engine::kBarq));
  // Grouping on a variable the join is not sorted by cannot stream.
  ASSERT_EQ(p.root->kind, PlanKind::kGroup) << explain(*p.root);
  EXPECT_FALSE(p.root->streaming);
  EXPECT_EQ(p.root->tag, ExecTag::kRow);
  EXPECT_EQ(count_boundaries(*p.root), 1u);
  ExecContext ctx(s, ExecOptions{}, p.num_vars());
  Executable exe = translate(p, ctx, false);
  EXPECT_EQ(exe.adapters, 1u);
}

TEST(Executors, AmplifyingMergeJoinRunsBatched) {
  TripleStore s = make_two_hop(42);
  for (Engine e : {Engine::kBarq, Engine::kAuto}) {
    LogicalPlan p = plan_query(parse_query(kTwoHopQuery), s, popts(e));
    walk(*p.root, [](const PlanNode& n) {
      if (n.amplifying()) {
        EXPECT_EQ(n.tag, ExecTag::kBatch) << n.label;
      }
    });
  }
}

TEST(Executors, BoundaryCountMatchesTranslatedAdapters) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    TripleStore s = test::random_graph(rng);
    Query q = parse_query(test::random_query(rng));
    for (Engine e : {Engine::kBarq, Engine::kLegacy, Engine::kAuto}) {
      LogicalPlan p = plan_query(q, s, popts(e));
      ExecContext ctx(s, ExecOptions{}, p.num_vars());
      Executable exe = translate(p, ctx, false);
      EXPECT_EQ(exe.adapters, count_boundaries(*p.root)) << explain(*p.root);
    }
  }
}

TEST(Cost, WeightsAndLeafCost) {
  EXPECT_EQ(node_weight(PlanKind::kSort), 2.0);
  EXPECT_EQ(node_weight(PlanKind::kLimit), 0.0);
  TripleStore s = test::example_graph();
  LogicalPlan p = plan_query(parse_query("SELECT * { ?x :knows ?y }"), s, popts(Engine::kBarq));
  const PlanNode* scan = find(*p.root, PlanKind::kScan);
  ASSERT_NE(scan, nullptr);
  EXPECT_DOUBLE_EQ(plan_cost(*scan, popts(Engine::kBarq)), 4.0);
}

TEST(Cost, MergeDiscountLowersMergeTreeOnly) {
  TripleStore s = make_two_hop(42);
  Query q = parse_query(kTwoHopQuery);
  LogicalPlan merge = plan_query(q, s, popts(Engine::kBarq, 0.5));
  LogicalPlan hash = plan_query(q, s, popts(Engine::kBarq, 1.0));
  const PlanNode* mj = find(*merge.root, PlanKind::kMergeJoin);
  const PlanNode* hj = find(*hash.root, PlanKind::kHashJoin);
  ASSERT_TRUE(mj && hj) << explain(*merge.root) << explain(*hash.root);
  const auto on = popts(Engine::kBarq, 0.5);
  const auto off = popts(Engine::kBarq, 1.0);
  EXPECT_LT(plan_cost(*merge.root, on), plan_cost(*merge.root, off));
  EXPECT_LT(own_cost(*mj, on), own_cost(*mj, off));
  EXPECT_DOUBLE_EQ(own_cost(*hj, on), own_cost(*hj, off));
  // Without the discount the hash alternative ranks first; with it, the merge tree does.
  EXPECT_LT(plan_cost(*merge.root, on), plan_cost(*hash.root, on));
  EXPECT_LE(plan_cost(*hash.root, off), plan_cost(*merge.root, off));
}

TEST(Cost, LegacyIgnoresDiscount) {
  TripleStore s = make_two_hop(42);
  LogicalPlan p = plan_query(parse_query(kTwoHopQuery), s, popts(Engine::kBarq));
  EXPECT_DOUBLE_EQ(plan_cost(*p.root, popts(Engine::kLegacy, 0.5)), plan_cost(*p.root, popts(Engine::kLegacy, 1.0)));
}

TEST(Plan, ResultsInvariantUnderEngine) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    TripleStore s = test::random_graph(rng);
    Query q = parse_query(test::random_query(rng));
    ResultSet want = evaluate_naive(s, q);
    for (Engine e : {Engine::kBarq, Engine::kLegacy, Engine::kAuto}) {
      QueryOptions o;
      o.engine = e;
      EXPECT_TRUE(run_query(s, q, o).results.same_multiset(want)) << to_string(e);
    }
  }
}

TEST(Plan, AggregateOverUnboundVariable) {
  TripleStore s = test::example_graph();
  Query q = parse_query("SELECT ?x (MAX(?nope) AS ?m) (COUNT(?nope) AS ?c) { ?x :knows ?y } GROUP BY ?x");
  ResultSet want = evaluate_naive(s, q);
  ASSERT_EQ(want.rows.size(), 1u);
  EXPECT_FALSE(want.rows[0][1]);
  EXPECT_EQ(want.rows[0][2], Term::integer(0));
  for (Engine e : {Engine::kBarq, Engine::kLegacy}) {
    QueryOptions o;
    o.engine = e;
    EXPECT_TRUE(run_query(s, q, o).results.same_multiset(want)) << to_string(e);
  }
}

TEST(Plan, ExplainIsDeterministic) {
  TripleStore s = make_two_hop(42);
  Query q = parse_query(kTwoHopQuery);
  EXPECT_EQ(explain(*plan_query(q, s).root), explain(*plan_query(q, s).root));
}

}  // namespace
}  // namespace vqe
