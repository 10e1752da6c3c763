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

#include "vqe/ntriples.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "vqe/errors.hpp"

namespace vqe {

namespace {

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  // False for blank and comment-only lines.
  bool parse(Term& subject, Term& predicate, Term& object) {
    ws();
    if (at_end() || peek() == '#') return false;
    subject = peek() == '<' ? iri() : blank();
    ws();
    predicate = iri();
    ws();
    if (peek() == '<') {
      object = iri();
    } else if (peek() == '_') {
      object = blank();
    } else if (peek() == '"') {
      object = literal();
    } else {
      fail("expected an IRI, blank node or literal as object");
    }
    ws();
    expect('.');
    ws();
    if (!at_end() && peek() != '#') fail("unexpected text after '.'");
    return true;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(line_, msg + " (column " + std::to_string(pos_ + 1) + ")");
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void ws() {
    while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Term iri() {
    expect('<');
    std::string v;
    while (!at_end() && s_[pos_] != '>') {
      char c = s_[pos_];
      if (c == ' ' || c == '<' || c == '"') fail("invalid character in IRI");
      if (c == '\\') {
        ++pos_;
        append_utf8(v, unicode_escape());
        continue;
      }
      v += c;
      ++pos_;
    }
    expect('>');
    if (v.empty()) fail("empty IRI");
    return Term::iri(std::move(v));
  }

  Term blank() {
    if (s_.substr(pos_, 2) != "_:") fail("expected '<' or '_:'");
    pos_ += 2;
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-' ||
                         (s_[pos_] == '.' && pos_ + 1 < s_.size() && s_[pos_ + 1] != ' ' && s_[pos_ + 1] != '\t'))) {
      ++pos_;
    }
    if (pos_ == start) fail("empty blank node label");
    return Term::blank(std::string(s_.substr(start, pos_ - start)));
  }

  Term literal() {
    expect('"');
    std::string v;
    for (;;) {
      if (at_end()) fail("unterminated literal");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        v += c;
        continue;
      }
      if (at_end()) fail("unterminated escape");
      char e = s_[pos_++];
      switch (e) {
        case 't': v += '\t'; break;
        case 'b': v += '\b'; break;
        case 'n': v += '\n'; break;
        case 'r': v += '\r'; break;
        case 'f': v += '\f'; break;
        case '"': v += '"'; break;
        case '\'': v += '\''; break;
        case '\\': v += '\\'; break;
        case 'u':
        case 'U':
          --pos_;
          append_utf8(v, unicode_escape());
          break;
        default: fail(std::string("unknown escape \\") + e);
      }
    }
    if (peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) ++pos_;
      if (pos_ == start) fail("empty language tag");
      return Term::lang(std::move(v), std::string(s_.substr(start, pos_ - start)));
    }
    if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      Term dt = iri();
      return Term::typed(std::move(v), dt.lexical);
    }
    return Term::literal(std::move(v));
  }

  // At 'u' or 'U' of an escape; consumes it and its hex digits.
  std::uint32_t unicode_escape() {
    char kind = peek();
    std::size_t digits = kind == 'u' ? 4 : kind == 'U' ? 8 : 0;
    if (digits == 0) fail("expected \\u or \\U escape");
    ++pos_;
    if (pos_ + digits > s_.size()) fail("truncated unicode escape");
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = s_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') {
        cp |= static_cast<std::uint32_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        cp |= static_cast<std::uint32_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        cp |= static_cast<std::uint32_t>(c - 'A' + 10);
      } else {
        fail("bad hex digit in unicode escape");
      }
    }
    if (cp > 0x10FFFF) fail("code point out of range");
    return cp;
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

TripleStore load_ntriples(std::istream& in) {
  TripleStore store;
  std::string line;
  std::size_t n = 0;
  Term s, p, o;
  while (std::getline(in, line)) {
    ++n;
    LineParser parser(line, n);
    if (parser.parse(s, p, o)) store.insert(s, p, o);
  }
  store.freeze();
  return store;
}

TripleStore load_ntriples(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_ntriples(in);
}

TripleStore load_ntriples_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return load_ntriples(in);
}

void dump_ntriples(const TripleStore& store, std::ostream& out) {
  const Dictionary& d = store.dictionary();
  for (const Triple& t : store.triples()) {
    out << d.decode(t[0]).to_ntriples() << ' ' << d.decode(t[1]).to_ntriples() << ' ' << d.decode(t[2]).to_ntriples()
        << " .\n";
  }
}

}  // namespace vqe
