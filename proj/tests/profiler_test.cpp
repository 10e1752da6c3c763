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
#include <regex>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_support.hpp"
#include "vqe/profiler.hpp"
#include "vqe/session.hpp"

namespace vqe {
namespace {

using test::row;
using test::ScriptedBatchOp;
using test::ScriptedRowOp;
using test::vars;

std::string strip_times(const std::string& s) {
  return std::regex_replace(s, std::regex(", wall time: [0-9.]+%"), "");
}

TripleStore ten_triples() {
  return test::make_store({{"a", "knows", "b"},
                           {"a", "knows", "c"},
                           {"b", "knows", "c"},
                           {"c", "knows", "a"},
                           {"d", "knows", "a"},
                           {"a", "likes", "x"},
                           {"b", "likes", "y"},
                           {"c", "likes", "x"},
                           {"e", "likes", "z"},
                           {"f", "likes", "x"}});
}

constexpr const char* kTraceQuery = "SELECT ?p ?t WHERE { ?p :knows ?q . ?p :likes ?t . FILTER(?t != :y) }";

class ProfilerWrap : public ::testing::Test {
 protected:
  ProfilerWrap() { store_.freeze(); }
  TripleStore store_;
  ExecContext ctx_{store_, ExecOptions{}, 2};
};

TEST_F(ProfilerWrap, BatchWrapperCountsCalls) {
  std::vector<RowTuple> rows;
  for (std::uint64_t i = 1; i <= 250; ++i) rows.push_back(row(2, {{0, i}}));
  ProfileNode node;
  node.label = "src";
  ProfileTimer timer;
  ProfiledBatch p(std::make_unique<ScriptedBatchOp>(ctx_, vars({0}), VarId{0}, rows, 100), &node, &timer);
  EXPECT_EQ(drain_rows(p, 2).size(), 250u);
  EXPECT_EQ(node.stats.rows_out, 250u);
  EXPECT_EQ(node.stats.next_calls, 4u);
  EXPECT_EQ(node.stats.skip_calls, 0u);
  p.reset();
  p.skip(TermId{10});
  p.skip(TermId{20});
  EXPECT_EQ(node.stats.skip_calls, 2u);
  EXPECT_EQ(node.stats.reset_calls, 1u);
  EXPECT_GE(node.inclusive.count(), node.exclusive.count());
}

TEST_F(ProfilerWrap, RowWrapperCountsCalls) {
  std::vector<RowTuple> rows = {row(2, {{0, 1}}), row(2, {{0, 2}}), row(2, {{0, 3}})};
  ProfileNode node;
  node.label = "src";
  ProfileTimer timer;
  ProfiledRow p(std::make_unique<ScriptedRowOp>(vars({0}), VarId{0}, rows), &node, &timer);
  p.skip(TermId{2});
  EXPECT_EQ(drain_rows(p).size(), 2u);
  EXPECT_EQ(node.stats.rows_out, 2u);
  EXPECT_EQ(node.stats.next_calls, 3u);
  EXPECT_EQ(node.stats.skip_calls, 1u);
}

TEST(Profiler, AbbreviateCount) {
  EXPECT_EQ(abbreviate_count(0), "0");
  EXPECT_EQ(abbreviate_count(999), "999");
  EXPECT_EQ(abbreviate_count(1000), "1.0K");
  EXPECT_EQ(abbreviate_count(12345), "12.3K");
  EXPECT_EQ(abbreviate_count(123456), "123K");
  EXPECT_EQ(abbreviate_count(999999), "1.0M");
  EXPECT_EQ(abbreviate_count(2500000), "2.5M");
  EXPECT_EQ(abbreviate_count(3000000000ULL), "3.0B");
}

TEST(Profiler, HandTracedProfile) {
  TripleStore s = ten_triples();
  QueryOptions o;
  o.engine = Engine::kBarq;
  o.profile = true;
  QueryResult r = run_query(s, kTraceQuery, o);
  ASSERT_TRUE(r.profile);
  EXPECT_EQ(strip_times(render_profile(*r.profile)),
            "Project(?p, ?t), results: 3 (next: 2), batched\n"
            "`- MergeJoin(?p), results: 3 (next: 2), batched\n"
            "   +- Filter(?t != :y), results: 4 (next: 1), batched\n"
            "   |  `- Scan(?p, :likes, ?t), results: 5 (next: 1), rows read: 5, batched\n"
            "   `- Scan(?p, :knows, ?q), results: 5 (next: 2, skip: 1), rows read: 5, batched\n");
}

TEST(Profiler, LegacyProfileHasNoBatchedMarker) {
  TripleStore s = ten_triples();
  QueryOptions o;
  o.engine = Engine::kLegacy;
  o.profile = true;
  QueryResult r = run_query(s, kTraceQuery, o);
  ASSERT_TRUE(r.profile);
  std::string text = render_profile(*r.profile);
  EXPECT_EQ(text.find("batched"), std::string::npos) << text;
  EXPECT_EQ(r.results.rows.size(), 3u);
}

TEST(Profiler, RenderIsDeterministicApartFromTimes) {
  TripleStore s = ten_triples();
  QueryOptions o;
  o.profile = true;
  std::string a = strip_times(render_profile(*run_query(s, kTraceQuery, o).profile));
  std::string b = strip_times(render_profile(*run_query(s, kTraceQuery, o).profile));
  EXPECT_EQ(a, b);
}

TEST(Profiler, SingleScanIsOneLine) {
  TripleStore s = ten_triples();
  QueryOptions o;
  o.profile = true;
  QueryResult r = run_query(s, "SELECT * { ?x :likes ?y }", o);
  std::string text = render_profile(*r.profile);
  // SELECT * keeps every variable, the scan alone carries the query.
  EXPECT_NE(text.find("Scan(?x, :likes, ?y), results: 5"), std::string::npos) << text;
  EXPECT_NE(text.find("wall time: "), std::string::npos);
}

TEST(Profiler, NoProfileWithoutFlag) {
  TripleStore s = ten_triples();
  EXPECT_FALSE(run_query(s, kTraceQuery).profile);
}

TEST(Profiler, JsonMirrorsTree) {
  TripleStore s = ten_triples();
  QueryOptions o;
  o.engine = Engine::kBarq;
  o.profile = true;
  QueryResult r = run_query(s, kTraceQuery, o);
  auto j = nlohmann::json::parse(profile_to_json(*r.profile));
  EXPECT_EQ(j["label"], "Project(?p, ?t)");
  EXPECT_EQ(j["results"], 3);
  ASSERT_EQ(j["children"].size(), 1u);
  const auto& join = j["children"][0];
  ASSERT_EQ(join["children"].size(), 2u);
  EXPECT_EQ(join["children"][1]["skip"], 1);
  EXPECT_EQ(join["children"][1]["rows_read"], 5);
  double share = 0;
  std::function<void(const nlohmann::json&)> sum = [&](const nlohmann::json& n) {
    share += n["share"].get<double>();
    for (const auto& c : n["children"]) sum(c);
  };
  sum(j);
  EXPECT_NEAR(share, 100.0, 1.0);
}

}  // namespace
}  // namespace vqe
