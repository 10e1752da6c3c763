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

#include "vqe/bench_suite.hpp"

#include <algorithm>

#include <fmt/format.h>

#include <nlohmann/json.hpp>

#include "vqe/errors.hpp"
#include "vqe/generators.hpp"

namespace vqe {

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : (v[m - 1] + v[m]) / 2;
}

const BenchRun& BenchReport::run(const std::string& name) const {
  for (const auto& r : runs) {
    if (r.name == name) return r;
  }
  throw Error("no bench run named " + name);
}

double BenchReport::speedup() const {
  const double barq = run("barq/adaptive").median_ms;
  return barq > 0 ? run("legacy").median_ms / barq : 0;
}

std::string BenchReport::to_text() const {
  std::string out = fmt::format("suite {} ({} triples)\n", suite, triples);
  for (const auto& r : runs) {
    out += fmt::format("  {:<14} median {:>9.2f} ms  rows read {:>9}  results {}\n", r.name, r.median_ms,
                       r.rows_read, r.result_rows);
    for (const auto& s : r.scans) out += fmt::format("    {:<50} rows read {}\n", s.label, s.rows_read);
  }
  const auto& adaptive = run("barq/adaptive");
  const auto& fixed = run("barq/fixed");
  const auto& legacy = run("legacy");
  out += fmt::format("  speedup barq/legacy: {:.2f}x\n", speedup());
  if (adaptive.rows_read > 0) {
    out += fmt::format("  rows read fixed/adaptive: {:.2f}\n",
                       static_cast<double>(fixed.rows_read) / static_cast<double>(adaptive.rows_read));
  }
  if (legacy.rows_read > 0) {
    out += fmt::format("  rows read adaptive/legacy: {:.2f}\n",
                       static_cast<double>(adaptive.rows_read) / static_cast<double>(legacy.rows_read));
  }
  return out;
}

std::string BenchReport::to_json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["triples"] = triples;
  j["speedup"] = speedup();
  j["runs"] = nlohmann::json::array();
  for (const auto& r : runs) {
    nlohmann::json jr;
    jr["name"] = r.name;
    jr["times_ms"] = r.times_ms;
    jr["median_ms"] = r.median_ms;
    jr["rows_read"] = r.rows_read;
    jr["result_rows"] = r.result_rows;
    jr["scans"] = nlohmann::json::array();
    for (const auto& s : r.scans) jr["scans"].push_back({{"label", s.label}, {"rows_read", s.rows_read}});
    j["runs"].push_back(std::move(jr));
  }
  return j.dump(2);
}

BenchReport run_bench(const std::string& suite, const BenchConfig& config) {
  BenchReport report;
  report.suite = suite;
  const TripleStore store = make_suite_store(suite, config.seed, config.scale);
  report.triples = store.size();
  const Query query = parse_query(suite_query(suite));

  struct Setup {
    const char* name;
    Engine engine;
    bool adaptive;
  };
  const Setup setups[] = {{"barq/adaptive", Engine::kBarq, true},
                          {"barq/fixed", Engine::kBarq, false},
                          {"legacy", Engine::kLegacy, true}};
  std::optional<ResultSet> reference;
  for (const auto& s : setups) {
    BenchRun run;
    run.name = s.name;
    run.engine = s.engine;
    run.adaptive = s.adaptive;
    QueryOptions opts;
    opts.engine = s.engine;
    opts.exec = config.exec;
    opts.exec.adaptive = s.adaptive;
    for (int i = 0; i < config.warmups; ++i) run_query(store, query, opts);
    for (int i = 0; i < std::max(1, config.runs); ++i) {
      QueryResult r = run_query(store, query, opts);
      run.times_ms.push_back(static_cast<double>(r.elapsed.count()) / 1e6);
      run.rows_read = r.rows_read;
      run.scans = r.scans;
      run.result_rows = r.results.rows.size();
      if (!reference) {
        reference = std::move(r.results);
      } else if (!reference->same_multiset(r.results)) {
        throw Error(fmt::format("{}: results differ between configurations", suite));
      }
    }
    run.median_ms = median(run.times_ms);
    report.runs.push_back(std::move(run));
  }
  return report;
}

}  // namespace vqe
