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

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "dpbound/prob_lang.h"

namespace dpbound {

namespace {

absl::string_view BinarySymbol(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kAnd:
      return "&&";
    case ExprKind::kOr:
      return "||";
    case ExprKind::kXor:
      return "^";
    case ExprKind::kIff:
      return "<->";
    case ExprKind::kIntAdd:
      return e.saturating ? "+" : "+%";
    case ExprKind::kIntGe:
      return ">=";
    case ExprKind::kIntEq:
      return "==";
    default:
      return "";
  }
}

class Renderer {
 public:
  // `operand` is true when e sits directly under a unary or binary operator,
  // where let and infix forms need parentheses.
  void Emit(const Expr& e, bool operand, int indent) {
    switch (e.kind) {
      case ExprKind::kBoolConst:
        out_ += e.bool_value ? "true" : "false";
        return;
      case ExprKind::kIntConst:
        absl::StrAppend(&out_, "int(", e.width, ", ", e.int_value, ")");
        return;
      case ExprKind::kVar:
        out_ += e.name;
        return;
      case ExprKind::kFlip:
        absl::StrAppend(&out_, "flip ", e.probability.ToString());
        return;
      case ExprKind::kCategorical:
        absl::StrAppend(&out_, "categorical(", e.width, ")[",
                        absl::StrJoin(e.weights, ", ",
                                      [](std::string* o, const Rational& w) {
                                        o->append(w.ToString());
                                      }),
                        "]");
        return;
      case ExprKind::kIte:
        out_ += "if ";
        Emit(*e.children[0], false, indent);
        out_ += " { ";
        Emit(*e.children[1], false, indent);
        out_ += " } else { ";
        Emit(*e.children[2], false, indent);
        out_ += " }";
        return;
      case ExprKind::kNot:
        out_ += "!";
        Emit(*e.children[0], true, indent);
        return;
      case ExprKind::kLet:
        if (operand) out_ += "(";
        absl::StrAppend(&out_, "let ", e.name, " = ");
        Emit(*e.children[0], false, indent + 1);
        out_ += " in\n";
        out_.append(2 * (indent + 1), ' ');
        Emit(*e.children[1], false, indent);
        if (operand) out_ += ")";
        return;
      case ExprKind::kTuple:
        out_ += "(";
        for (std::size_t i = 0; i < e.children.size(); ++i) {
          if (i > 0) out_ += ", ";
          Emit(*e.children[i], false, indent);
        }
        out_ += ")";
        return;
      default:
        if (operand) out_ += "(";
        Emit(*e.children[0], true, indent);
        absl::StrAppend(&out_, " ", BinarySymbol(e), " ");
        Emit(*e.children[1], true, indent);
        if (operand) out_ += ")";
        return;
    }
  }

  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

}  // namespace

std::string RenderExpr(const Expr& expr) {
  Renderer r;
  r.Emit(expr, false, 0);
  return r.Take();
}

std::string RenderProgram(const Program& program) {
  std::string out = "fun(";
  for (std::size_t i = 0; i < program.params.size(); ++i) {
    if (i > 0) out += ", ";
    absl::StrAppend(&out, program.params[i].name, ": ",
                    program.params[i].type.ToString());
  }
  out += ")";
  if (program.output_type) {
    absl::StrAppend(&out, " -> ", program.output_type->ToString());
  }
  out += " {\n  ";
  Renderer r;
  r.Emit(*program.body, false, 0);
  absl::StrAppend(&out, r.Take(), "\n}\n");
  return out;
}

}  // namespace dpbound
