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
#include <stdexcept>
#include <string>
#include <vector>

namespace vqe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NullIdError : public Error {
 public:
  NullIdError() : Error("cannot decode the NULL marker id 0") {}
};

class UnknownIdError : public Error {
 public:
  explicit UnknownIdError(std::uint64_t id) : Error("unknown term id " + std::to_string(id)) {}
};

class FrozenStoreError : public Error {
 public:
  explicit FrozenStoreError(const std::string& what) : Error(what) {}
};

class NoSuitableIndexError : public Error {
 public:
  using Error::Error;
};

class QueryMemoryExceeded : public Error {
 public:
  QueryMemoryExceeded(const std::string& where, std::size_t used, std::size_t cap)
      : Error(where + ": memory cap exceeded (" + std::to_string(used) + " > " + std::to_string(cap) +
              " bytes)") {}
};

class UnsortedInputError : public Error {
 public:
  using Error::Error;
};

/// Raised when an operator API contract is broken by the caller, e.g. skip()
/// on an operator without a sort variable.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message,
             std::vector<std::string> expected = {});

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

/// A recognized query-language construct outside the supported subset.
class UnsupportedFeature : public Error {
 public:
  explicit UnsupportedFeature(const std::string& feature)
      : Error("unsupported feature: " + feature), feature_(feature) {}

  const std::string& feature() const { return feature_; }

 private:
  std::string feature_;
};

/// Malformed filter expression detected at plan time.
class TypeError : public Error {
 public:
  using Error::Error;
};

/// N-Triples syntax error.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace vqe
