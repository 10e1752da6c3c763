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

// vqe command line: load data, run queries under either engine, benchmarks.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vqe/bench_suite.hpp"
#include "vqe/errors.hpp"
#include "vqe/ntriples.hpp"
#include "vqe/session.hpp"

namespace {

enum ExitCode { kOk = 0, kOther = 1, kParse = 2, kUnsupported = 3, kMemory = 4 };

// VQE_MEMORY_CAP: bytes, optional K/M/G suffix.
std::optional<std::size_t> memory_cap_from_env() {
  const char* v = std::getenv("VQE_MEMORY_CAP");
  if (!v || !*v) return std::nullopt;
  std::string s = v;
  std::size_t mult = 1;
  switch (std::toupper(static_cast<unsigned char>(s.back()))) {
    case 'K': mult = 1ULL << 10; break;
    case 'M': mult = 1ULL << 20; break;
    case 'G': mult = 1ULL << 30; break;
    default: break;
  }
  if (mult != 1) s.pop_back();
  std::size_t pos = 0;
  unsigned long long n = std::stoull(s, &pos);
  if (pos != s.size()) throw vqe::Error("VQE_MEMORY_CAP: not a byte count: " + std::string(v));
  return static_cast<std::size_t>(n) * mult;
}

std::string read_query_arg(const std::string& arg) {
  std::error_code ec;
  if (arg.find('{') == std::string::npos && std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return arg;
}

vqe::Engine parse_engine(const std::string& s) {
  if (s == "barq") return vqe::Engine::kBarq;
  if (s == "legacy") return vqe::Engine::kLegacy;
  return vqe::Engine::kAuto;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vqe: vectorized and row-at-a-time RDF query engine"};
  app.require_subcommand(1);

  std::string load_path;
  auto* load = app.add_subcommand("load", "Parse an N-Triples file and report its size");
  load->add_option("file", load_path, "N-Triples file")->required();

  std::string data_path, query_arg, engine = "auto", output = "tsv";
  bool profile = false, no_adaptive = false, explain_plan = false;
  std::size_t batch_max = vqe::kDefaultBatchMax;
  auto* query = app.add_subcommand("query", "Run a query over an N-Triples file");
  query->add_option("--data", data_path, "N-Triples file to load")->required();
  query->add_option("query", query_arg, "Query text or a file holding it")->required();
  query->add_option("--engine", engine, "barq, legacy or auto")->check(CLI::IsMember({"barq", "legacy", "auto"}));
  query->add_flag("--profile", profile, "Print the operator profile to stderr");
  query->add_flag("--explain", explain_plan, "Print the plan to stderr");
  query->add_option("--batch-max", batch_max, "Largest batch size")->check(CLI::Range(16, 1 << 20));
  query->add_flag("--no-adaptive", no_adaptive, "Fixed-size scan batches");
  query->add_option("--output", output, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));

  std::string suite;
  vqe::BenchConfig bench_cfg;
  bool bench_json = false;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  bench->add_option("suite", suite, "two_hop, selective_join or group_distinct")
      ->required()
      ->check(CLI::IsMember({"two_hop", "selective_join", "group_distinct"}));
  bench->add_option("--seed", bench_cfg.seed, "Generator seed");
  bench->add_option("--scale", bench_cfg.scale, "Dataset scale factor")->check(CLI::Range(1U, 1000U));
  bench->add_option("--runs", bench_cfg.runs, "Timed runs per configuration")->check(CLI::Range(1, 1000));
  bench->add_option("--warmups", bench_cfg.warmups, "Warm-up runs per configuration")->check(CLI::Range(0, 1000));
  bench->add_flag("--json", bench_json, "Print the report as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    vqe::ExecOptions exec;
    if (auto cap = memory_cap_from_env()) exec.memory_cap = *cap;

    if (*load) {
      auto start = std::chrono::steady_clock::now();
      vqe::TripleStore store = vqe::load_ntriples_file(load_path);
      auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      std::cout << fmt::format("{} triples, {} terms, loaded in {:.1f} ms\n", store.size(), store.dictionary().size(),
                               ms);
      return kOk;
    }
    if (*query) {
      vqe::TripleStore store = vqe::load_ntriples_file(data_path);
      vqe::QueryOptions opts;
      opts.engine = parse_engine(engine);
      opts.profile = profile;
      opts.exec = exec;
      opts.exec.batch_max = batch_max;
      opts.exec.adaptive = !no_adaptive;
      vqe::QueryResult r = vqe::run_query(store, read_query_arg(query_arg), opts);
      std::cout << (output == "json" ? vqe::to_json(r.results) : vqe::to_tsv(r.results));
      if (explain_plan) std::cerr << r.plan;
      if (r.profile) std::cerr << vqe::render_profile(*r.profile);
      return kOk;
    }
    if (*bench) {
      bench_cfg.exec = exec;
      vqe::BenchReport report = vqe::run_bench(suite, bench_cfg);
      std::cout << (bench_json ? report.to_json() + "\n" : report.to_text());
      return kOk;
    }
  } catch (const vqe::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const vqe::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kParse;
  } catch (const vqe::TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return kParse;
  } catch (const vqe::UnsupportedFeature& e) {
    std::cerr << e.what() << "\n";
    return kUnsupported;
  } catch (const vqe::QueryMemoryExceeded& e) {
    std::cerr << e.what() << "\n";
    return kMemory;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOk;
}
