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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vqe/operator.hpp"
#include "vqe/session.hpp"

namespace vqe {

struct BenchConfig {
  std::uint64_t seed = 42;
  unsigned scale = 1;
  int warmups = 2;
  int runs = 5;
  ExecOptions exec;
};

/// One engine/sizing configuration of a suite.
struct BenchRun {
  std::string name;  // "barq/adaptive", "barq/fixed", "legacy"
  Engine engine = Engine::kBarq;
  bool adaptive = true;
  std::vector<double> times_ms;
  double median_ms = 0;
  std::uint64_t rows_read = 0;
  std::vector<ScanReadCount> scans;
  std::size_t result_rows = 0;
};

struct BenchReport {
  std::string suite;
  std::size_t triples = 0;
  std::vector<BenchRun> runs;

  const BenchRun& run(const std::string& name) const;
  /// legacy median / barq-adaptive median.
  double speedup() const;
  std::string to_text() const;
  std::string to_json() const;
};

/// Generates the suite's data, then runs warm-ups and timed runs of its query
/// under barq with adaptive sizing, barq with fixed batches, and legacy.
/// Throws Error if the configurations disagree on the result.
BenchReport run_bench(const std::string& suite, const BenchConfig& config);

double median(std::vector<double> v);

}  // namespace vqe
