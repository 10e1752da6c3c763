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

#include "vqe/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "vqe/errors.hpp"
#include "vqe/query.hpp"

namespace vqe {

namespace {

Term ex(const std::string& local) { return Term::iri(std::string(kDefaultPrefix) + local); }

}  // namespace

TripleStore make_two_hop(std::uint64_t seed, unsigned scale) {
  std::mt19937_64 rng(seed);
  const std::size_t people = 5000 * std::max(1U, scale);
  const std::size_t tags = 1000;
  TripleStore store;
  std::vector<Term> person(people);
  for (std::size_t i = 0; i < people; ++i) person[i] = ex("person" + std::to_string(i));
  const Term knows = ex("knows");
  const Term interest = ex("interest");

  std::uniform_int_distribution<std::size_t> degree(10, 30);
  std::uniform_int_distribution<std::size_t> pick_person(0, people - 1);
  std::uniform_int_distribution<std::size_t> pick_tag(0, tags - 1);
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < people; ++i) {
    const std::size_t d = degree(rng);
    chosen.clear();
    while (chosen.size() < d) {
      std::size_t j = pick_person(rng);
      if (j == i || std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
      chosen.push_back(j);
    }
    for (std::size_t j : chosen) store.insert(person[i], knows, person[j]);
    chosen.clear();
    while (chosen.size() < 6) {
      std::size_t t = pick_tag(rng);
      if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) continue;
      chosen.push_back(t);
    }
    for (std::size_t t : chosen) store.insert(person[i], interest, ex("tag" + std::to_string(t)));
  }
  store.freeze();
  return store;
}

TripleStore make_selective_join(std::uint64_t seed, unsigned scale) {
  std::mt19937_64 rng(seed);
  const std::size_t products = 20000 * std::max(1U, scale);
  TripleStore store;
  const Term type = Term::iri(kRdfType);
  const Term producer = ex("producer");
  const Term feature = ex("productFeature");
  const Term product_of = ex("product");

  // Encode products first, in shuffled order, so id order is random with
  // respect to generation order.
  std::vector<std::size_t> order(products);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i : order) store.dictionary().encode(ex("product" + std::to_string(i)));

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> other_type(0, 48);
  std::uniform_int_distribution<int> pick_producer(0, 99);
  std::uniform_int_distribution<int> n_features(10, 20);
  std::uniform_int_distribution<int> pick_feature(0, 999);
  std::uniform_int_distribution<int> n_offers(5, 10);
  std::size_t offer = 0;
  for (std::size_t i = 0; i < products; ++i) {
    const Term p = ex("product" + std::to_string(i));
    int t = 22;
    if (unit(rng) >= 0.02) {
      t = other_type(rng);
      if (t >= 22) ++t;
    }
    store.insert(p, type, ex("ProductType" + std::to_string(t)));
    store.insert(p, producer, ex("producer" + std::to_string(pick_producer(rng))));
    const int nf = n_features(rng);
    for (int f = 0; f < nf; ++f) store.insert(p, feature, ex("feature" + std::to_string(pick_feature(rng))));
    const int no = n_offers(rng);
    for (int o = 0; o < no; ++o) store.insert(ex("offer" + std::to_string(offer++)), product_of, p);
  }
  store.freeze();
  return store;
}

TripleStore make_suite_store(std::string_view suite, std::uint64_t seed, unsigned scale) {
  if (suite == "two_hop" || suite == "group_distinct") return make_two_hop(seed, scale);
  if (suite == "selective_join") return make_selective_join(seed, scale);
  throw Error("unknown benchmark suite: " + std::string(suite));
}

std::string_view suite_query(std::string_view suite) {
  if (suite == "two_hop") return kTwoHopQuery;
  if (suite == "selective_join") return kSelectiveJoinQuery;
  if (suite == "group_distinct") return kGroupDistinctQuery;
  throw Error("unknown benchmark suite: " + std::string(suite));
}

}  // namespace vqe
