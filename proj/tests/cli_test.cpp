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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_support.hpp"
#include "vqe/bench_suite.hpp"
#include "vqe/errors.hpp"
#include "vqe/generators.hpp"
#include "vqe/ntriples.hpp"
#include "vqe/result.hpp"
#include "vqe/session.hpp"

namespace vqe {
namespace {

namespace fs = std::filesystem;

constexpr const char* kSmallNt =
    "# people\n"
    "<http://example.org/Alice> <http://example.org/knows> <http://example.org/Bob> .\n"
    "\n"
    "<http://example.org/Alice> <http://example.org/knows> <http://example.org/Charlie> .\n"
    "<http://example.org/Bob> <http://example.org/worksAt> <http://example.org/ACME> .\n"
    "<http://example.org/Bob> <http://example.org/age> \"42\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n"
    "<http://example.org/Bob> <http://example.org/name> \"Bob \\\"B\\\"\"@en .\n"
    "_:b1 <http://example.org/knows> <http://example.org/Alice> .\n";

struct CliRun {
  int code = -1;
  std::string out;
};

fs::path temp_file(const std::string& name, const std::string& body) {
  fs::path p = fs::temp_directory_path() / ("vqe_cli_test_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << body;
  return p;
}

CliRun run_cli(const std::string& args) {
  CliRun r;
  std::string cmd = std::string(VQE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* f = ::popen(cmd.c_str(), "r");
  if (!f) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
  int status = ::pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

TEST(NTriples, LoadsSmallFile) {
  TripleStore s = load_ntriples(std::string_view(kSmallNt));
  EXPECT_EQ(s.size(), 6u);
  EXPECT_TRUE(s.frozen());
}

TEST(NTriples, DumpRoundTrip) {
  TripleStore a = load_ntriples(std::string_view(kSmallNt));
  std::ostringstream out;
  dump_ntriples(a, out);
  TripleStore b = load_ntriples(std::string_view(out.str()));
  ASSERT_EQ(a.size(), b.size());
  std::ostringstream again;
  dump_ntriples(b, again);
  EXPECT_EQ(out.str(), again.str());
}

TEST(NTriples, EmptyInputIsEmptyStore) {
  TripleStore s = load_ntriples(std::string_view("\n# nothing\n"));
  EXPECT_EQ(s.size(), 0u);
}

TEST(NTriples, SyntaxErrorReportsLine) {
  const std::string bad =
      "<http://example.org/a> <http://example.org/p> <http://example.org/b> .\n"
      "<http://example.org/a> <http://example.org/p> .\n";
  try {
    load_ntriples(std::string_view(bad));
    FAIL() << "no error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load_ntriples(std::string_view("<a> <b> <c>\n")), SyntaxError);
  EXPECT_THROW(load_ntriples(std::string_view("\"lit\" <http://x/p> <http://x/o> .\n")), SyntaxError);
}

TEST(Results, TsvFormat) {
  TripleStore s = test::example_graph();
  QueryResult r = run_query(s, "SELECT ?y { :Alice :knows ?y }");
  EXPECT_EQ(to_tsv(r.results), "?y\n<http://example.org/Bob>\n<http://example.org/Charlie>\n");
}

TEST(Results, JsonFormat) {
  TripleStore s = test::example_graph();
  QueryResult r = run_query(s, "SELECT ?y (COUNT(*) AS ?n) { :Alice :knows ?y } GROUP BY ?y");
  auto j = nlohmann::json::parse(to_json(r.results));
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["y"]["type"], "uri");
  EXPECT_EQ(j[0]["y"]["value"], "http://example.org/Bob");
  EXPECT_EQ(j[0]["n"]["type"], "literal");
  EXPECT_EQ(j[0]["n"]["value"], "1");
}

TEST(Results, NonNumericSumIsUnbound) {
  TripleStore s = test::make_store({{"a", "p", "b"}});
  QueryResult r = run_query(s, "SELECT (SUM(?o) AS ?s) { ?x :p ?o }");
  ASSERT_EQ(r.results.rows.size(), 1u);
  EXPECT_FALSE(r.results.rows[0][0]);
  EXPECT_EQ(to_tsv(r.results), "?s\n\n");
  EXPECT_THROW(run_query(s, "SELECT ?o { ?x :p ?o FILTER(?o < :b) }"), TypeError);
}

TEST(Generators, Deterministic) {
  for (std::string_view suite : {"two_hop", "selective_join", "group_distinct"}) {
    TripleStore a = make_suite_store(suite, 7);
    TripleStore b = make_suite_store(suite, 7);
    EXPECT_EQ(a.triples(), b.triples()) << suite;
    EXPECT_GT(a.size(), 0u);
    TripleStore c = make_suite_store(suite, 8);
    EXPECT_NE(a.triples(), c.triples()) << suite;
  }
}

TEST(Bench, ReportShape) {
  BenchConfig cfg;
  cfg.runs = 1;
  cfg.warmups = 0;
  BenchReport rep = run_bench("group_distinct", cfg);
  for (const char* name : {"barq/adaptive", "barq/fixed", "legacy"}) {
    const BenchRun& run = rep.run(name);
    EXPECT_EQ(run.times_ms.size(), 1u);
    EXPECT_GT(run.rows_read, 0u);
  }
  EXPECT_EQ(rep.run("legacy").result_rows, rep.run("barq/adaptive").result_rows);
  auto j = nlohmann::json::parse(rep.to_json());
  EXPECT_EQ(j["suite"], "group_distinct");
  EXPECT_NE(rep.to_text().find("legacy"), std::string::npos);
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
}

TEST(Cli, QueryPrintsTsv) {
  fs::path data = temp_file("ok.nt", kSmallNt);
  CliRun r = run_cli("query --data " + data.string() + " 'SELECT ?y { :Alice :knows ?y }'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "?y\n<http://example.org/Bob>\n<http://example.org/Charlie>\n");
  fs::path qf = temp_file("q.rq", "SELECT ?y { :Alice :knows ?y }");
  CliRun j = run_cli("query --output json --engine legacy --data " + data.string() + " " + qf.string());
  EXPECT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out).size(), 2u);
  fs::remove(data);
  fs::remove(qf);
}

TEST(Cli, ExitCodes) {
  fs::path data = temp_file("codes.nt", kSmallNt);
  EXPECT_EQ(run_cli("load " + data.string()).code, 0);
  EXPECT_EQ(run_cli("query --data " + data.string() + " 'SELECT ?y { :Alice :knows }'").code, 2);
  EXPECT_EQ(run_cli("query --data " + data.string() + " 'SELECT * { ?s ?p ?o OPTIONAL { ?o ?p ?s } }'").code, 3);
  fs::path bad = temp_file("bad.nt", "<http://x/a> <http://x/b> .\n");
  EXPECT_EQ(run_cli("load " + bad.string()).code, 2);
  fs::remove(bad);
  fs::remove(data);
}

TEST(Cli, MemoryCapExitCode) {
  fs::path data = temp_file("mem.nt", kSmallNt);
  CliRun r = run_cli("query --engine legacy --data " + data.string() +
                  " 'SELECT ?a ?b { ?a ?p ?x . ?b ?q ?y }'");
  EXPECT_EQ(r.code, 0);
  std::string cmd = "env VQE_MEMORY_CAP=1 " + std::string(VQE_CLI_PATH) + " query --engine legacy --data " +
                    data.string() + " 'SELECT ?a ?b { ?a ?p ?x . ?b ?q ?y }' >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 4);
  fs::remove(data);
}

TEST(Cli, EmptyStoreSelectStar) {
  fs::path data = temp_file("empty.nt", "");
  CliRun r = run_cli("query --data " + data.string() + " 'SELECT * { ?s ?p ?o }'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "?s\t?p\t?o\n");
  fs::remove(data);
}

TEST(Cli, BenchJson) {
  CliRun r = run_cli("bench group_distinct --runs 1 --warmups 0 --json");
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["suite"], "group_distinct");
}

}  // namespace
}  // namespace vqe
