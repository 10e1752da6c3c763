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
#include <string_view>

#include "vqe/storage.hpp"

namespace vqe {

/// Friend-of-friend count with an interest hop and a reflexivity filter.
inline constexpr std::string_view kTwoHopQuery =
    "SELECT (COUNT(*) AS ?count) WHERE {\n"
    "  ?person1 :knows ?person2 .\n"
    "  ?person2 :knows ?person3 .\n"
    "  ?person3 :interest ?tag .\n"
    "  FILTER(?person1 != ?person3)\n"
    "}\n";

/// Star join seeded by a rare product type.
inline constexpr std::string_view kSelectiveJoinQuery =
    "SELECT * {\n"
    "  ?product rdf:type :ProductType22 .\n"
    "  ?product :productFeature ?feature .\n"
    "  ?product :producer ?producer .\n"
    "  ?offer :product ?product .\n"
    "}\n";

/// Per-person distinct friends and interests.
inline constexpr std::string_view kGroupDistinctQuery =
    "SELECT ?person (COUNT(DISTINCT ?friend) AS ?friends) (COUNT(DISTINCT ?interest) AS ?interests) {\n"
    "  ?person :knows ?friend .\n"
    "  ?person :interest ?interest .\n"
    "} GROUP BY ?person\n";

/// Random :knows graph over 5000×scale people with out-degree uniform in
/// [10, 30] (mean 20, no self loops), plus 6 distinct :interest tags per
/// person drawn from 1000 tags.
TripleStore make_two_hop(std::uint64_t seed, unsigned scale = 1);

/// 20000×scale products, each with one rdf:type out of 50 (ProductType22
/// has probability 2%, the rest share the remainder), one :producer out of
/// 100, 10 to 20 :productFeature values and 5 to 10 offers pointing back via
/// :product. Product ids are shuffled so rare products are spread out.
TripleStore make_selective_join(std::uint64_t seed, unsigned scale = 1);

/// Store for a suite name: two_hop and group_distinct share the social
/// graph. Throws Error for unknown names.
TripleStore make_suite_store(std::string_view suite, std::uint64_t seed, unsigned scale = 1);
std::string_view suite_query(std::string_view suite);

}  // namespace vqe
