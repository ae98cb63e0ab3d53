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

#include <bit>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "dpbound/prob_lang.h"

namespace dpbound {

std::vector<Type> Type::Leaves() const {
  if (!is_tuple()) return {*this};
  std::vector<Type> out;
  for (const Type& e : elements_) {
    auto sub = e.Leaves();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

int Type::BitCount() const {
  switch (kind_) {
    case Kind::kBool:
      return 1;
    case Kind::kInt:
      return width_;
    case Kind::kTuple: {
      int total = 0;
      for (const Type& e : elements_) total += e.BitCount();
      return total;
    }
  }
  return 0;
}

std::string Type::ToString() const {
  switch (kind_) {
    case Kind::kBool:
      return "bool";
    case Kind::kInt:
      return absl::StrCat("int(", width_, ")");
    case Kind::kTuple:
      return absl::StrCat("(",
                          absl::StrJoin(elements_, ", ",
                                        [](std::string* out, const Type& t) {
                                          out->append(t.ToString());
                                        }),
                          ")");
  }
  return "?";
}

bool StructurallyEqual(const Expr& a, const Expr& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::kBoolConst:
      if (a.bool_value != b.bool_value) return false;
      break;
    case ExprKind::kIntConst:
      if (a.int_value != b.int_value || a.width != b.width) return false;
      break;
    case ExprKind::kVar:
    case ExprKind::kLet:
      if (a.name != b.name) return false;
      break;
    case ExprKind::kFlip:
      if (a.probability != b.probability) return false;
      break;
    case ExprKind::kCategorical:
      if (a.weights != b.weights || a.width != b.width) return false;
      break;
    case ExprKind::kIntAdd:
      if (a.saturating != b.saturating) return false;
      break;
    default:
      break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!StructurallyEqual(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

bool StructurallyEqual(const Program& a, const Program& b) {
  if (a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].name != b.params[i].name ||
        !(a.params[i].type == b.params[i].type)) {
      return false;
    }
  }
  if (a.output_type.has_value() != b.output_type.has_value()) return false;
  if (a.output_type && !(*a.output_type == *b.output_type)) return false;
  if (!a.body || !b.body) return a.body == b.body;
  return StructurallyEqual(*a.body, *b.body);
}

namespace {

ExprPtr Make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr MakeNode(ExprKind kind, std::vector<ExprPtr> children) {
  Expr e;
  e.kind = kind;
  e.children = std::move(children);
  return Make(std::move(e));
}

}  // namespace

ExprPtr BoolConst(bool value) {
  Expr e;
  e.kind = ExprKind::kBoolConst;
  e.bool_value = value;
  return Make(std::move(e));
}

ExprPtr IntConst(std::uint64_t value, int width) {
  Expr e;
  e.kind = ExprKind::kIntConst;
  e.int_value = value;
  e.width = width;
  return Make(std::move(e));
}

ExprPtr Var(std::string name) {
  Expr e;
  e.kind = ExprKind::kVar;
  e.name = std::move(name);
  return Make(std::move(e));
}

ExprPtr Flip(Rational probability) {
  Expr e;
  e.kind = ExprKind::kFlip;
  e.probability = std::move(probability);
  return Make(std::move(e));
}

ExprPtr Ite(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch) {
  return MakeNode(ExprKind::kIte, {std::move(cond), std::move(then_branch),
                                   std::move(else_branch)});
}

ExprPtr Not(ExprPtr operand) {
  return MakeNode(ExprKind::kNot, {std::move(operand)});
}

ExprPtr And(ExprPtr lhs, ExprPtr rhs) {
  return MakeNode(ExprKind::kAnd, {std::move(lhs), std::move(rhs)});
}

ExprPtr Or(ExprPtr lhs, ExprPtr rhs) {
  return MakeNode(ExprKind::kOr, {std::move(lhs), std::move(rhs)});
}

ExprPtr Xor(ExprPtr lhs, ExprPtr rhs) {
  return MakeNode(ExprKind::kXor, {std::move(lhs), std::move(rhs)});
}

ExprPtr Iff(ExprPtr lhs, ExprPtr rhs) {
  return MakeNode(ExprKind::kIff, {std::move(lhs), std::move(rhs)});
}

ExprPtr Let(std::string name, ExprPtr bound, ExprPtr body) {
  Expr e;
  e.kind = ExprKind::kLet;
  e.name = std::move(name);
  e.children = {std::move(bound), std::move(body)};
  return Make(std::move(e));
}

ExprPtr Tuple(std::vector<ExprPtr> elements) {
  return MakeNode(ExprKind::kTuple, std::move(elements));
}

ExprPtr IntAdd(ExprPtr lhs, ExprPtr rhs, bool saturating) {
  Expr e;
  e.kind = ExprKind::kIntAdd;
  e.saturating = saturating;
  e.children = {std::move(lhs), std::move(rhs)};
  return Make(std::move(e));
}

ExprPtr IntGe(ExprPtr lhs, ExprPtr rhs) {
  return MakeNode(ExprKind::kIntGe, {std::move(lhs), std::move(rhs)});
}

ExprPtr IntEq(ExprPtr lhs, ExprPtr rhs) {
  return MakeNode(ExprKind::kIntEq, {std::move(lhs), std::move(rhs)});
}

ExprPtr Categorical(std::vector<Rational> weights, int width) {
  Expr e;
  e.kind = ExprKind::kCategorical;
  e.weights = std::move(weights);
  e.width = width;
  return Make(std::move(e));
}

int WidthFor(std::uint64_t max_value) {
  return max_value == 0 ? 1 : static_cast<int>(std::bit_width(max_value));
}

int CountRandomChoices(const Expr& expr) {
  int count =
      (expr.kind == ExprKind::kFlip || expr.kind == ExprKind::kCategorical) ? 1
                                                                            : 0;
  for (const auto& c : expr.children) count += CountRandomChoices(*c);
  return count;
}

}  // namespace dpbound
