// Copyright 2026 The dpbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// A minimal first-order discrete probabilistic language. Programs are
// loop-free expressions over booleans, fixed-width unsigned integers and
// tuples, with two sources of randomness: `flip p` and `categorical[...]`.
//
//   program := "fun" "(" [param ("," param)*] ")" ["->" type] "{" expr "}"
//   param   := ident ":" type
//   type    := "bool" | "int" "(" width ")" | "(" type ("," type)+ ")"
//   expr    := "let" ident "=" expr "in" expr | iff
//   iff     := or ("<->" or)*
//   or      := xor ("||" xor)*
//   xor     := and ("^" and)*
//   and     := cmp ("&&" cmp)*
//   cmp     := sum [(">=" | "==") sum]
//   sum     := unary (("+" | "+%") unary)*
//   unary   := "!" unary | primary
//   primary := "flip" rational | "if" expr "{" expr "}" "else" "{" expr "}"
//            | "(" expr ("," expr)* ")" | "int" "(" width "," value ")"
//            | "categorical" ["(" width ")"] "[" rational ("," rational)* "]"
//            | "true" | "false" | ident | "let" ...
//   rational := integer ["/" integer]
//
// `+` saturates at 2^width - 1; `+%` wraps modulo 2^width. Source files use
// the ".dpp" extension; "#" and "//" start comments that run to the end of
// the line.

#ifndef DPBOUND_PROB_LANG_H_
#define DPBOUND_PROB_LANG_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dpbound/rational.h"

namespace dpbound {

// Integers are at most this many bits wide.
inline constexpr int kMaxIntWidth = 62;

class Type {
 public:
  enum class Kind { kBool, kInt, kTuple };

  static Type Bool() { return Type(Kind::kBool, 0, {}); }
  static Type Int(int width) { return Type(Kind::kInt, width, {}); }
  static Type Tuple(std::vector<Type> elements) {
    return Type(Kind::kTuple, 0, std::move(elements));
  }

  Kind kind() const { return kind_; }
  int width() const { return width_; }
  const std::vector<Type>& elements() const { return elements_; }

  bool is_bool() const { return kind_ == Kind::kBool; }
  bool is_int() const { return kind_ == Kind::kInt; }
  bool is_tuple() const { return kind_ == Kind::kTuple; }

  // Depth-first list of the bool/int leaves.
  std::vector<Type> Leaves() const;
  // Number of bits in the flattened representation.
  int BitCount() const;
  std::string ToString() const;

  friend bool operator==(const Type& a, const Type& b) {
    return a.kind_ == b.kind_ && a.width_ == b.width_ &&
           a.elements_ == b.elements_;
  }

 private:
  Type(Kind kind, int width, std::vector<Type> elements)
      : kind_(kind), width_(width), elements_(std::move(elements)) {}

  Kind kind_;
  int width_;
  std::vector<Type> elements_;
};

enum class ExprKind {
  kBoolConst,
  kIntConst,
  kVar,
  kFlip,
  kIte,
  kNot,
  kAnd,
  kOr,
  kXor,
  kIff,
  kLet,
  kTuple,
  kIntAdd,
  kIntGe,
  kIntEq,
  kCategorical,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable AST node. Only the fields relevant to `kind` are meaningful.
struct Expr {
  ExprKind kind = ExprKind::kBoolConst;
  bool bool_value = false;        // kBoolConst
  std::uint64_t int_value = 0;    // kIntConst
  int width = 0;                  // kIntConst, kCategorical
  std::string name;               // kVar, kLet
  Rational probability;           // kFlip
  std::vector<Rational> weights;  // kCategorical
  bool saturating = true;         // kIntAdd
  // kIte: {cond, then, else}; kLet: {bound, body}; unary: {operand};
  // binary: {lhs, rhs}; kTuple: elements.
  std::vector<ExprPtr> children;
};

// Structural equality (pointer identity is irrelevant).
bool StructurallyEqual(const Expr& a, const Expr& b);

// Node factories.
ExprPtr BoolConst(bool value);
ExprPtr IntConst(std::uint64_t value, int width);
ExprPtr Var(std::string name);
ExprPtr Flip(Rational probability);
ExprPtr Ite(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch);
ExprPtr Not(ExprPtr operand);
ExprPtr And(ExprPtr lhs, ExprPtr rhs);
ExprPtr Or(ExprPtr lhs, ExprPtr rhs);
ExprPtr Xor(ExprPtr lhs, ExprPtr rhs);
ExprPtr Iff(ExprPtr lhs, ExprPtr rhs);
ExprPtr Let(std::string name, ExprPtr bound, ExprPtr body);
ExprPtr Tuple(std::vector<ExprPtr> elements);
ExprPtr IntAdd(ExprPtr lhs, ExprPtr rhs, bool saturating = true);
ExprPtr IntGe(ExprPtr lhs, ExprPtr rhs);
ExprPtr IntEq(ExprPtr lhs, ExprPtr rhs);
ExprPtr Categorical(std::vector<Rational> weights, int width);

// Smallest width able to hold every value in {0..max_value} (at least 1).
int WidthFor(std::uint64_t max_value);

struct Param {
  std::string name;
  Type type;
};

struct Program {
  std::vector<Param> params;
  ExprPtr body;
  // Filled in by Validate when absent.
  std::optional<Type> output_type;
};

bool StructurallyEqual(const Program& a, const Program& b);

// A scope- and type-checked program. Every subexpression reachable from the
// body has an entry in `types`.
struct ValidatedProgram {
  Program program;
  absl::flat_hash_map<const Expr*, Type> types;

  const Type& output_type() const { return *program.output_type; }
  const Type& TypeOf(const Expr& e) const { return types.at(&e); }
};

// Parses program text. Errors carry "line L, column C".
absl::StatusOr<Program> Parse(absl::string_view text);

// Scope and type checks; rejects categorical weights that do not sum to 1.
absl::StatusOr<ValidatedProgram> Validate(const Program& program);

// Parse followed by Validate.
absl::StatusOr<ValidatedProgram> ParseAndValidate(absl::string_view text);

// Renders a program in the concrete syntax above. Parse(RenderProgram(p)) is
// structurally equal to p.
std::string RenderProgram(const Program& program);
std::string RenderExpr(const Expr& expr);

// Number of flip/categorical occurrences in the AST.
int CountRandomChoices(const Expr& expr);

}  // namespace dpbound

#endif  // DPBOUND_PROB_LANG_H_
