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

#include "vqe/term.hpp"

#include <array>
#include <charconv>
#include <string_view>

#include "vqe/errors.hpp"

namespace vqe {

Term Term::iri(std::string value) { return Term{TermKind::kIri, std::move(value), {}, {}}; }

Term Term::blank(std::string label) { return Term{TermKind::kBlankNode, std::move(label), {}, {}}; }

Term Term::literal(std::string lexical) { return Term{TermKind::kLiteral, std::move(lexical), {}, {}}; }

Term Term::typed(std::string lexical, std::string datatype) {
  return Term{TermKind::kLiteral, std::move(lexical), std::move(datatype), {}};
}

Term Term::lang(std::string lexical, std::string tag) {
  return Term{TermKind::kLiteral, std::move(lexical), {}, std::move(tag)};
}

Term Term::integer(long long value) { return typed(std::to_string(value), kXsdInteger); }

void Term::validate() const {
  if (kind != TermKind::kLiteral && (datatype || langtag)) {
    throw Error("only literals may carry a datatype or language tag");
  }
  if (datatype && langtag) {
    throw Error("a literal cannot have both a datatype and a language tag");
  }
  if (kind == TermKind::kIri && lexical.empty()) {
    throw Error("IRI must not be empty");
  }
}

std::string escape_literal(const std::string& lexical) {
  std::string out;
  out.reserve(lexical.size());
  for (char c : lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Term::to_ntriples() const {
  switch (kind) {
    case TermKind::kIri: return "<" + lexical + ">";
    case TermKind::kBlankNode: return "_:" + lexical;
    case TermKind::kLiteral: {
      std::string out = "\"" + escape_literal(lexical) + "\"";
      if (langtag) out += "@" + *langtag;
      if (datatype) out += "^^<" + *datatype + ">";
      return out;
    }
  }
  return {};
}

std::optional<long long> integer_value(const Term& term) {
  static constexpr std::array<std::string_view, 12> kIntegerTypes = {
      "http://www.w3.org/2001/XMLSchema#integer",
      "http://www.w3.org/2001/XMLSchema#int",
      "http://www.w3.org/2001/XMLSchema#long",
      "http://www.w3.org/2001/XMLSchema#short",
      "http://www.w3.org/2001/XMLSchema#byte",
      "http://www.w3.org/2001/XMLSchema#nonNegativeInteger",
      "http://www.w3.org/2001/XMLSchema#positiveInteger",
      "http://www.w3.org/2001/XMLSchema#negativeInteger",
      "http://www.w3.org/2001/XMLSchema#nonPositiveInteger",
      "http://www.w3.org/2001/XMLSchema#unsignedLong",
      "http://www.w3.org/2001/XMLSchema#unsignedInt",
      "http://www.w3.org/2001/XMLSchema#unsignedShort",
  };
  if (term.kind != TermKind::kLiteral || !term.datatype) return std::nullopt;
  bool is_integer_type = false;
  for (auto t : kIntegerTypes) is_integer_type = is_integer_type || *term.datatype == t;
  if (!is_integer_type) return std::nullopt;

  std::string_view s = term.lexical;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

}  // namespace vqe

std::size_t std::hash<vqe::Term>::operator()(const vqe::Term& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.lexical);
  h ^= static_cast<std::size_t>(t.kind) * 0x9e3779b97f4a7c15ULL;
  if (t.datatype) h ^= std::hash<std::string>{}(*t.datatype) * 31;
  if (t.langtag) h ^= std::hash<std::string>{}(*t.langtag) * 131;
  return h;
}
