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

#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "dpbound/prob_lang.h"
#include "dpbound/status_macros.h"

namespace dpbound {

namespace {

absl::Status TypeError(absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat("type error: ", message));
}

absl::Status CheckType(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::kBool:
      return absl::OkStatus();
    case Type::Kind::kInt:
      if (t.width() < 1 || t.width() > kMaxIntWidth) {
        return TypeError(
            absl::StrCat("integer width ", t.width(), " out of range"));
      }
      return absl::OkStatus();
    case Type::Kind::kTuple:
      if (t.elements().size() < 2) {
        return TypeError("tuple types need at least two elements");
      }
      for (const Type& e : t.elements()) RETURN_IF_ERROR(CheckType(e));
      return absl::OkStatus();
  }
  return absl::OkStatus();
}

class Checker {
 public:
  explicit Checker(ValidatedProgram* out) : out_(out) {}

  absl::StatusOr<Type> Check(const Expr& e) {
    ASSIGN_OR_RETURN(Type t, CheckInner(e));
    auto [it, inserted] = out_->types.try_emplace(&e, t);
    if (!inserted && !(it->second == t)) {
      return TypeError("a shared subexpression is used at two different types");
    }
    return t;
  }

  void Push(std::string name, Type type) {
    scope_.push_back({std::move(name), std::move(type)});
  }
  void Pop() { scope_.pop_back(); }

 private:
  absl::Status ExpectArity(const Expr& e, std::size_t n) {
    if (e.children.size() != n) {
      return TypeError(absl::StrCat("malformed node: expected ", n,
                                    " operands, got ", e.children.size()));
    }
    for (const auto& c : e.children) {
      if (!c) return TypeError("malformed node: null operand");
    }
    return absl::OkStatus();
  }

  absl::StatusOr<Type> CheckBool(const Expr& e) {
    ASSIGN_OR_RETURN(Type t, Check(e));
    if (!t.is_bool()) {
      return TypeError(absl::StrCat("expected bool, found ", t.ToString()));
    }
    return t;
  }

  absl::StatusOr<Type> CheckSameInt(const Expr& e) {
    RETURN_IF_ERROR(ExpectArity(e, 2));
    ASSIGN_OR_RETURN(Type l, Check(*e.children[0]));
    ASSIGN_OR_RETURN(Type r, Check(*e.children[1]));
    if (!l.is_int() || !r.is_int() || l.width() != r.width()) {
      return TypeError(
          absl::StrCat("integer operator needs two ints of equal "
                       "width, found ",
                       l.ToString(), " and ", r.ToString()));
    }
    return l;
  }

  absl::StatusOr<Type> CheckInner(const Expr& e) {
    switch (e.kind) {
      case ExprKind::kBoolConst:
        return Type::Bool();
      case ExprKind::kIntConst: {
        Type t = Type::Int(e.width);
        RETURN_IF_ERROR(CheckType(t));
        if (e.int_value >> e.width != 0) {
          return TypeError(absl::StrCat("constant ", e.int_value,
                                        " does not fit in ", e.width, " bits"));
        }
        return t;
      }
      case ExprKind::kVar:
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
          if (it->first == e.name) return it->second;
        }
        return absl::NotFoundError(
            absl::StrCat("unbound variable '", e.name, "'"));
      case ExprKind::kFlip:
        if (e.probability < Rational(0) || e.probability > Rational(1)) {
          return absl::InvalidArgumentError(
              absl::StrCat("probability ", e.probability.ToString(),
                           " out of range [0, 1]"));
        }
        return Type::Bool();
      case ExprKind::kIte: {
        RETURN_IF_ERROR(ExpectArity(e, 3));
        RETURN_IF_ERROR(CheckBool(*e.children[0]).status());
        ASSIGN_OR_RETURN(Type a, Check(*e.children[1]));
        ASSIGN_OR_RETURN(Type b, Check(*e.children[2]));
        if (!(a == b)) {
          return TypeError(absl::StrCat("if branches differ: ", a.ToString(),
                                        " vs ", b.ToString()));
        }
        return a;
      }
      case ExprKind::kNot:
        RETURN_IF_ERROR(ExpectArity(e, 1));
        return CheckBool(*e.children[0]);
      case ExprKind::kAnd:
      case ExprKind::kOr:
      case ExprKind::kXor:
      case ExprKind::kIff:
        RETURN_IF_ERROR(ExpectArity(e, 2));
        RETURN_IF_ERROR(CheckBool(*e.children[0]).status());
        return CheckBool(*e.children[1]);
      case ExprKind::kLet: {
        RETURN_IF_ERROR(ExpectArity(e, 2));
        if (e.name.empty()) return TypeError("let without a name");
        ASSIGN_OR_RETURN(Type bound, Check(*e.children[0]));
        Push(e.name, bound);
        auto body = Check(*e.children[1]);
        Pop();
        return body;
      }
      case ExprKind::kTuple: {
        if (e.children.size() < 2) {
          return TypeError("tuples need at least two elements");
        }
        std::vector<Type> elements;
        for (const auto& c : e.children) {
          if (!c) return TypeError("malformed node: null operand");
          ASSIGN_OR_RETURN(Type t, Check(*c));
          elements.push_back(std::move(t));
        }
        return Type::Tuple(std::move(elements));
      }
      case ExprKind::kIntAdd:
        return CheckSameInt(e);
      case ExprKind::kIntGe:
      case ExprKind::kIntEq:
        RETURN_IF_ERROR(CheckSameInt(e).status());
        return Type::Bool();
      case ExprKind::kCategorical: {
        Type t = Type::Int(e.width);
        RETURN_IF_ERROR(CheckType(t));
        if (e.weights.empty()) {
          return absl::InvalidArgumentError("categorical with no outcomes");
        }
        if (e.width < 63 && (e.weights.size() - 1) >> e.width != 0) {
          return absl::InvalidArgumentError(
              absl::StrCat("categorical with ", e.weights.size(),
                           " outcomes does not fit in ", e.width, " bits"));
        }
        Rational sum;
        for (const Rational& w : e.weights) {
          if (w.Sign() < 0) {
            return absl::InvalidArgumentError(
                absl::StrCat("negative categorical weight ", w.ToString()));
          }
          sum += w;
        }
        if (sum != Rational(1)) {
          return absl::InvalidArgumentError(absl::StrCat(
              "categorical weights sum to ", sum.ToString(), ", not 1"));
        }
        return t;
      }
    }
    return TypeError("unknown expression kind");
  }

  ValidatedProgram* out_;
  std::vector<std::pair<std::string, Type>> scope_;
};

}  // namespace

absl::StatusOr<ValidatedProgram> Validate(const Program& program) {
  if (!program.body) return absl::InvalidArgumentError("program has no body");
  ValidatedProgram out;
  out.program = program;
  Checker checker(&out);
  absl::flat_hash_set<std::string> seen;
  for (const Param& p : program.params) {
    if (!seen.insert(p.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate parameter '", p.name, "'"));
    }
    RETURN_IF_ERROR(CheckType(p.type));
    checker.Push(p.name, p.type);
  }
  ASSIGN_OR_RETURN(Type body, checker.Check(*program.body));
  if (program.output_type) {
    RETURN_IF_ERROR(CheckType(*program.output_type));
    if (!(*program.output_type == body)) {
      return TypeError(absl::StrCat("declared output type ",
                                    program.output_type->ToString(),
                                    " but body has type ", body.ToString()));
    }
  } else {
    out.program.output_type = body;
  }
  return out;
}

}  // namespace dpbound
