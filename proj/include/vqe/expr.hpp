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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vqe/batch.hpp"
#include "vqe/dictionary.hpp"
#include "vqe/query.hpp"
#include "vqe/types.hpp"

namespace vqe {

/// Three-valued filter outcome; only kTrue keeps a row.
enum class Truth : std::uint8_t { kFalse, kTrue, kError };

/// Filter operand resolved against the dictionary.
struct Operand {
  bool is_var = false;
  VarId var{};
  /// Constant id; 0 when the constant is absent from the dictionary (it then
  /// equals nothing).
  TermId id{};
  std::optional<long long> numeric;
};

/// Filter expression over variable ids, evaluated in id space.
struct FilterExpr {
  enum class Kind : std::uint8_t { kCompare, kBound, kAnd, kOr, kNot, kConstant };

  Kind kind = Kind::kConstant;
  CmpOp op = CmpOp::kEq;
  Operand lhs, rhs;
  VarId bound_var{};
  bool value = true;
  std::vector<FilterExpr> children;

  std::vector<VarId> vars() const;

  /// Evaluates against a value lookup (VarId -> TermId; 0 = unbound).
  template <class Lookup>
  Truth eval(const Lookup& lookup, const TermOverlay& terms) const;

  Truth eval_row(const RowTuple& row, const TermOverlay& terms) const {
    return eval([&row](VarId v) { return v.value < row.size() ? row[v.value] : kNullId; }, terms);
  }
};

/// Resolves names and constants; throws TypeError for expressions outside
/// the id-space comparison subset (ordered comparison with a non-integer
/// constant, a bare variable or constant used as a condition).
FilterExpr compile_filter(const Expr& e, const std::function<VarId(const std::string&)>& var_of,
                          const Dictionary& dict);

/// Removes rows of the batch for which the filter is not true; the batch
/// columns are read in place, only the selection vector changes.
void apply_filter(const FilterExpr& f, ColumnBatch& batch, const TermOverlay& terms);

Truth compare_ids(CmpOp op, TermId a, TermId b, std::optional<long long> na, std::optional<long long> nb);

template <class Lookup>
Truth FilterExpr::eval(const Lookup& lookup, const TermOverlay& terms) const {
  switch (kind) {
    case Kind::kConstant: return value ? Truth::kTrue : Truth::kFalse;
    case Kind::kBound: return lookup(bound_var).is_null() ? Truth::kFalse : Truth::kTrue;
    case Kind::kCompare: {
      TermId a = lhs.is_var ? lookup(lhs.var) : lhs.id;
      TermId b = rhs.is_var ? lookup(rhs.var) : rhs.id;
      if ((lhs.is_var && a.is_null()) || (rhs.is_var && b.is_null())) return Truth::kError;
      auto na = lhs.is_var ? terms.numeric_value(a) : lhs.numeric;
      auto nb = rhs.is_var ? terms.numeric_value(b) : rhs.numeric;
      return compare_ids(op, a, b, na, nb);
    }
    case Kind::kNot: {
      Truth t = children[0].eval(lookup, terms);
      if (t == Truth::kError) return t;
      return t == Truth::kTrue ? Truth::kFalse : Truth::kTrue;
    }
    case Kind::kAnd: {
      Truth a = children[0].eval(lookup, terms);
      Truth b = children[1].eval(lookup, terms);
      if (a == Truth::kFalse || b == Truth::kFalse) return Truth::kFalse;
      if (a == Truth::kError || b == Truth::kError) return Truth::kError;
      return Truth::kTrue;
    }
    case Kind::kOr: {
      Truth a = children[0].eval(lookup, terms);
      Truth b = children[1].eval(lookup, terms);
      if (a == Truth::kTrue || b == Truth::kTrue) return Truth::kTrue;
      if (a == Truth::kError || b == Truth::kError) return Truth::kError;
      return Truth::kFalse;
    }
  }
  return Truth::kError;
}

}  // namespace vqe
