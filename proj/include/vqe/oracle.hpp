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

#include "vqe/query.hpp"
#include "vqe/result.hpp"
#include "vqe/storage.hpp"

namespace vqe {

/// Reference evaluator: enumerates every homomorphism of the pattern into the
/// decoded triple set by nested loops, then applies unions, filters,
/// grouping, projection and DISTINCT on decoded terms. Shares no code with
/// the operators; intended for small stores in tests. A LIMIT truncates an
/// unordered result, so only the row count is comparable in that case.
ResultSet evaluate_naive(const TripleStore& store, const Query& query);

}  // namespace vqe
