// Copyright 2026 The rivalkit Authors.
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

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rivalkit/interval.hpp"
#include "rivalkit/ops.hpp"
#include "rivalkit/target.hpp"

namespace rivalkit {

using ops::CompareOp;
using ops::compare_name;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Exact rational literal; `text` is kept for printing.
struct NumLiteral {
  std::string text;
  mpq_class value;
};
struct ConstRef {
  Constant which;
};
struct BoolLiteral {
  bool value;
};
struct VarRef {
  std::string name;
};
struct Apply {
  ScalarOp op;
  std::vector<ExprPtr> args;
};
struct IfExpr {
  ExprPtr cond, then_branch, else_branch;
};
// `sequential` selects let* scoping.
struct LetExpr {
  std::vector<std::pair<std::string, ExprPtr>> bindings;
  ExprPtr body;
  bool sequential = false;
};
// Chained comparison: a0 op a1 op a2 ... (all adjacent pairs), except
// `ne`, which requires every pair to differ.
struct CompareExpr {
  CompareOp op;
  std::vector<ExprPtr> args;
};
enum class BoolOpKind { and_, or_, not_ };
struct BoolOpExpr {
  BoolOpKind kind;
  std::vector<ExprPtr> args;
};
// err(E) as a boolean.
struct ErrOf {
  ExprPtr sub;
};

struct Expr {
  std::variant<NumLiteral, ConstRef, BoolLiteral, VarRef, Apply, IfExpr, LetExpr, CompareExpr,
               BoolOpExpr, ErrOf>
      node;
};

// Builders.
ExprPtr num(const std::string& text);  // throws std::invalid_argument
ExprPtr num(const mpq_class& value);
ExprPtr num(double value);  // exact
ExprPtr constant(Constant c);
ExprPtr boolean(bool v);
ExprPtr var(const std::string& name);
ExprPtr apply(ScalarOp op, std::vector<ExprPtr> args);
ExprPtr if_expr(ExprPtr c, ExprPtr t, ExprPtr e);
ExprPtr let(std::vector<std::pair<std::string, ExprPtr>> bindings, ExprPtr body,
            bool sequential = false);
ExprPtr compare(CompareOp op, std::vector<ExprPtr> args);
ExprPtr bool_op(BoolOpKind kind, std::vector<ExprPtr> args);
ExprPtr err_of(ExprPtr sub);

// Parses a literal: integer, decimal with optional exponent, p/q, or a
// C99 hex float. std::nullopt if the text is not a number.
std::optional<mpq_class> parse_rational(const std::string& text);

// Whether `e` is boolean-valued. Variables are looked up in `bool_vars`
// (names bound to booleans by an enclosing let).
bool is_boolean(const Expr& e, const std::vector<std::string>& bool_vars = {});

// Throws std::invalid_argument on arity or type errors, or a variable
// outside `scope`.
void check_expr(const Expr& e, const std::vector<std::string>& scope, bool want_boolean);

std::vector<std::string> free_vars(const Expr& e);

// S-expression text in FPCore syntax.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

struct Program {
  std::optional<std::string> name;
  std::vector<std::string> vars;
  ExprPtr pre;  // may be null
  ExprPtr body;
  TargetFormat target = TargetFormat::binary64();
};

}  // namespace rivalkit
