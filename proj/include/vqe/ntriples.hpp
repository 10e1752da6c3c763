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

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "vqe/storage.hpp"

namespace vqe {

/// Parses N-Triples into a frozen store. Accepts IRIs, blank nodes, plain,
/// language-tagged and typed literals, '#' comments and blank lines. Throws
/// SyntaxError carrying the 1-based line; nothing is kept on failure.
TripleStore load_ntriples(std::istream& in);
TripleStore load_ntriples(std::string_view text);
TripleStore load_ntriples_file(const std::filesystem::path& path);

/// Writes every triple, one per line, SPO order.
void dump_ntriples(const TripleStore& store, std::ostream& out);

}  // namespace vqe
