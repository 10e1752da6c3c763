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

#include <algorithm>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vqe/oracle.hpp"
#include "vqe/query.hpp"
#include "vqe/session.hpp"

namespace vqe {
namespace {

struct Instance {
  TripleStore store;
  Query query;
  std::string text;
};

Instance instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TripleStore s = test::random_graph(rng);
  std::string text = test::random_query(rng);
  return Instance{std::move(s), parse_query(text), text};
}

QueryOptions engine(Engine e) {
  QueryOptions o;
  o.engine = e;
  return o;
}

class Seeded : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(Seeded, EnginesAgreeWithOracle) {
  for (std::uint64_t seed = GetParam(); seed < GetParam() + 50; ++seed) {
    Instance in = instance(seed);
    ResultSet want = evaluate_naive(in.store, in.query);
    for (Engine e : {Engine::kBarq, Engine::kLegacy, Engine::kAuto}) {
      ResultSet got = run_query(in.store, in.query, engine(e)).results;
      EXPECT_EQ(got.vars, want.vars);
      EXPECT_TRUE(got.same_multiset(want)) << "seed " << seed << " " << to_string(e) << "\n" << in.text;
    }
  }
}

TEST_P(Seeded, AdaptersAreTransparent) {
  for (std::uint64_t seed = GetParam(); seed < GetParam() + 50; ++seed) {
    Instance in = instance(seed);
    ResultSet want = evaluate_naive(in.store, in.query);
    for (Engine e : {Engine::kBarq, Engine::kLegacy}) {
      QueryOptions o = engine(e);
      o.adapters = AdapterMode::kEveryBoundary;
      EXPECT_TRUE(run_query(in.store, in.query, o).results.same_multiset(want)) << "seed " << seed << "\n" << in.text;
      o.adapters = AdapterMode::kRandom;
      for (std::uint64_t a = 0; a < 3; ++a) {
        o.adapter_seed = a;
        EXPECT_TRUE(run_query(in.store, in.query, o).results.same_multiset(want))
            << "seed " << seed << " adapter seed " << a << "\n" << in.text;
      }
    }
  }
}

TEST_P(Seeded, BatchSizingDoesNotChangeResults) {
  for (std::uint64_t seed = GetParam(); seed < GetParam() + 50; ++seed) {
    Instance in = instance(seed);
    ResultSet want = evaluate_naive(in.store, in.query);
    QueryOptions o = engine(Engine::kBarq);
    o.exec.adaptive = false;
    EXPECT_TRUE(run_query(in.store, in.query, o).results.same_multiset(want)) << "seed " << seed;
    o.exec.adaptive = true;
    o.exec.batch_max = 16;
    EXPECT_TRUE(run_query(in.store, in.query, o).results.same_multiset(want)) << "seed " << seed;
    o.profile = true;
    EXPECT_TRUE(run_query(in.store, in.query, o).results.same_multiset(want)) << "seed " << seed;
  }
}

TEST_P(Seeded, MergeDiscountDoesNotChangeResults) {
  for (std::uint64_t seed = GetParam(); seed < GetParam() + 50; ++seed) {
    Instance in = instance(seed);
    ResultSet want = evaluate_naive(in.store, in.query);
    for (double d : {0.1, 1.0, 4.0}) {
      QueryOptions o = engine(Engine::kAuto);
      o.merge_discount = d;
      EXPECT_TRUE(run_query(in.store, in.query, o).results.same_multiset(want)) << "seed " << seed << " d " << d;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Graphs, Seeded, ::testing::Values(1000, 2000, 3000, 4000));

TEST(Properties, ScanCountsMatchRowsRead) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Instance in = instance(seed);
    for (Engine e : {Engine::kBarq, Engine::kLegacy}) {
      QueryResult r = run_query(in.store, in.query, engine(e));
      std::uint64_t total = 0;
      for (const auto& s : r.scans) total += s.rows_read;
      EXPECT_EQ(total, r.rows_read);
    }
  }
}

TEST(Properties, UnionAndBoundFilters) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    TripleStore s = test::random_graph(rng);
    const std::string q =
        "SELECT * { { ?a :p0 ?b } UNION { ?a :p1 ?b } UNION { ?a :p2 ?c } . FILTER(BOUND(?b) || ?a != :e1) }";
    Query query = parse_query(q);
    ResultSet want = evaluate_naive(s, query);
    for (Engine e : {Engine::kBarq, Engine::kLegacy}) {
      EXPECT_TRUE(run_query(s, query, engine(e)).results.same_multiset(want)) << trial;
    }
  }
}

TEST(Properties, LimitReturnsPrefixSizedSubset) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    TripleStore s = test::random_graph(rng);
    Query full = parse_query("SELECT ?x ?y { ?x :p0 ?y . ?y :p1 ?z }");
    Query lim = parse_query("SELECT ?x ?y { ?x :p0 ?y . ?y :p1 ?z } LIMIT 7");
    ResultSet all = evaluate_naive(s, full);
    for (Engine e : {Engine::kBarq, Engine::kLegacy}) {
      ResultSet got = run_query(s, lim, engine(e)).results;
      EXPECT_EQ(got.rows.size(), std::min<std::size_t>(7, all.rows.size()));
      auto pool = all.sorted_rows();
      for (const auto& r : got.rows) {
        auto it = std::find(pool.begin(), pool.end(), r);
        ASSERT_NE(it, pool.end());
        pool.erase(it);
      }
    }
  }
}

}  // namespace
}  // namespace vqe
