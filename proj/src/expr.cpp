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

#include "vqe/expr.hpp"

#include <algorithm>

#include "vqe/errors.hpp"

namespace vqe {

std::vector<VarId> FilterExpr::vars() const {
  std::vector<VarId> out;
  auto add = [&out](VarId v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  if (kind == Kind::kCompare) {
    if (lhs.is_var) add(lhs.var);
    if (rhs.is_var) add(rhs.var);
  }
  if (kind == Kind::kBound) add(bound_var);
  for (const auto& c : children) {
    for (VarId v : c.vars()) add(v);
  }
  return out;
}

Truth compare_ids(CmpOp op, TermId a, TermId b, std::optional<long long> na, std::optional<long long> nb) {
  switch (op) {
    // An unknown constant (id 0) equals nothing.
    case CmpOp::kEq: return (a == b && !a.is_null()) ? Truth::kTrue : Truth::kFalse;
    case CmpOp::kNe: return (a == b && !a.is_null()) ? Truth::kFalse : Truth::kTrue;
    default: break;
  }
  if (!na || !nb) return Truth::kError;
  switch (op) {
    case CmpOp::kLt: return *na < *nb ? Truth::kTrue : Truth::kFalse;
    case CmpOp::kLe: return *na <= *nb ? Truth::kTrue : Truth::kFalse;
    case CmpOp::kGt: return *na > *nb ? Truth::kTrue : Truth::kFalse;
    case CmpOp::kGe: return *na >= *nb ? Truth::kTrue : Truth::kFalse;
    default: return Truth::kError;
  }
}

namespace {

Operand compile_operand(const Expr& e, const std::function<VarId(const std::string&)>& var_of,
                        const Dictionary& dict) {
  Operand o;
  if (e.kind == Expr::Kind::kVar) {
    o.is_var = true;
    o.var = var_of(e.var);
    return o;
  }
  if (e.kind != Expr::Kind::kConst) throw TypeError("comparison operand must be a variable or a constant");
  o.id = dict.find(e.constant);
  o.numeric = integer_value(e.constant);
  return o;
}

}  // namespace

FilterExpr compile_filter(const Expr& e, const std::function<VarId(const std::string&)>& var_of,
                          const Dictionary& dict) {
  FilterExpr f;
  switch (e.kind) {
    case Expr::Kind::kVar:
    case Expr::Kind::kConst:
      throw TypeError("filter condition must be a comparison, BOUND, or a logical combination: " + to_string(e));
    case Expr::Kind::kBound:
      f.kind = FilterExpr::Kind::kBound;
      f.bound_var = var_of(e.var);
      return f;
    case Expr::Kind::kCompare: {
      f.kind = FilterExpr::Kind::kCompare;
      f.op = e.op;
      f.lhs = compile_operand(e.args[0], var_of, dict);
      f.rhs = compile_operand(e.args[1], var_of, dict);
      bool ordered = e.op != CmpOp::kEq && e.op != CmpOp::kNe;
      if (ordered) {
        for (const Expr* side : {&e.args[0], &e.args[1]}) {
          if (side->kind == Expr::Kind::kConst && !integer_value(side->constant)) {
            throw TypeError("ordered comparison needs integer constants: " + to_string(e));
          }
        }
      }
      if (!f.lhs.is_var && !f.rhs.is_var) {
        // Fold constant comparisons; an error result filters every row.
        Truth t = compare_ids(f.op, f.lhs.id, f.rhs.id, f.lhs.numeric, f.rhs.numeric);
        if (f.lhs.id.is_null() && f.rhs.id.is_null() && !ordered) {
          // Both constants unknown to the dictionary: compare the terms.
          bool eq = e.args[0].constant == e.args[1].constant;
          t = (eq == (e.op == CmpOp::kEq)) ? Truth::kTrue : Truth::kFalse;
        }
        FilterExpr c;
        c.kind = FilterExpr::Kind::kConstant;
        c.value = t == Truth::kTrue;
        return c;
      }
      return f;
    }
    case Expr::Kind::kAnd:
    case Expr::Kind::kOr:
    case Expr::Kind::kNot:
      f.kind = e.kind == Expr::Kind::kAnd ? FilterExpr::Kind::kAnd
               : e.kind == Expr::Kind::kOr ? FilterExpr::Kind::kOr
                                            : FilterExpr::Kind::kNot;
      for (const auto& a : e.args) f.children.push_back(compile_filter(a, var_of, dict));
      return f;
  }
  throw TypeError("malformed filter expression");
}

namespace {

// Tight per-column loops for the common equality shapes; everything else goes
// through the generic row evaluator.
bool apply_fast(const FilterExpr& f, ColumnBatch& b) {
  if (f.kind == FilterExpr::Kind::kConstant) {
    if (!f.value) b.sv().clear();
    return true;
  }
  if (f.kind == FilterExpr::Kind::kBound) {
    auto ci = b.column_index(f.bound_var);
    if (!ci) {
      b.sv().clear();
      return true;
    }
    const TermId* col = b.column(*ci);
    b.retain([col](std::uint32_t r) { return !col[r].is_null(); });
    return true;
  }
  if (f.kind != FilterExpr::Kind::kCompare || (f.op != CmpOp::kEq && f.op != CmpOp::kNe)) return false;
  const bool want_eq = f.op == CmpOp::kEq;
  if (f.lhs.is_var && f.rhs.is_var) {
    auto ca = b.column_index(f.lhs.var);
    auto cb = b.column_index(f.rhs.var);
    if (!ca || !cb) return false;
    const TermId* x = b.column(*ca);
    const TermId* y = b.column(*cb);
    // Unbound operands make the comparison an error, which drops the row.
    b.retain([x, y, want_eq](std::uint32_t r) {
      return !x[r].is_null() && !y[r].is_null() && ((x[r] == y[r]) == want_eq);
    });
    return true;
  }
  const Operand& var = f.lhs.is_var ? f.lhs : f.rhs;
  const Operand& cst = f.lhs.is_var ? f.rhs : f.lhs;
  auto ci = b.column_index(var.var);
  if (!ci) return false;
  const TermId* x = b.column(*ci);
  const TermId k = cst.id;
  b.retain([x, k, want_eq](std::uint32_t r) {
    return !x[r].is_null() && ((x[r] == k && !k.is_null()) == want_eq);
  });
  return true;
}

}  // namespace

void apply_filter(const FilterExpr& f, ColumnBatch& batch, const TermOverlay& terms) {
  if (f.kind == FilterExpr::Kind::kAnd) {
    apply_filter(f.children[0], batch, terms);
    apply_filter(f.children[1], batch, terms);
    return;
  }
  if (apply_fast(f, batch)) return;
  const ColumnBatch& cb = batch;
  std::uint32_t row = 0;
  auto lookup = [&cb, &row](VarId v) {
    auto ci = cb.column_index(v);
    return ci ? cb.column(*ci)[row] : kNullId;
  };
  batch.retain([&](std::uint32_t r) {
    row = r;
    return f.eval(lookup, terms) == Truth::kTrue;
  });
}

}  // namespace vqe
