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

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

namespace vqe {

inline constexpr const char* kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr const char* kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

enum class TermKind : unsigned char { kIri, kLiteral, kBlankNode };

/// An RDF term. Only literals carry a datatype or a language tag, never both.
struct Term {
  TermKind kind = TermKind::kIri;
  std::string lexical;
  std::optional<std::string> datatype;
  std::optional<std::string> langtag;

  static Term iri(std::string value);
  static Term blank(std::string label);
  static Term literal(std::string lexical);
  static Term typed(std::string lexical, std::string datatype);
  static Term lang(std::string lexical, std::string tag);
  static Term integer(long long value);

  /// Checks the structural invariants; throws Error when violated.
  void validate() const;

  /// N-Triples rendering, e.g. `<http://x>`, `_:b0`, `"5"^^<...#integer>`.
  std::string to_ntriples() const;

  bool operator==(const Term&) const = default;
};

/// Integer value of a literal with an XSD integer-family datatype.
std::optional<long long> integer_value(const Term& term);

/// Escapes a literal lexical form for N-Triples output.
std::string escape_literal(const std::string& lexical);

}  // namespace vqe

template <>
struct std::hash<vqe::Term> {
  std::size_t operator()(const vqe::Term& t) const noexcept;
};
