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

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "dpbound/prob_lang.h"
#include "dpbound/status_macros.h"

namespace dpbound {

namespace {

enum class Tok { kIdent, kNumber, kSymbol, kEnd };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const absl::flat_hash_set<std::string>& Keywords() {
  static const auto* kKeywords = new absl::flat_hash_set<std::string>{
      "fun", "flip", "if",   "else",  "let",        "in",
      "int", "bool", "true", "false", "categorical"};
  return *kKeywords;
}

absl::Status ErrorAt(int line, int column, absl::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrCat("line ", line, ", column ", column, ": ", message));
}

absl::StatusOr<std::vector<Token>> Lex(absl::string_view text) {
  // Longest symbols first.
  static constexpr absl::string_view kSymbols[] = {
      "<->", "->", "&&", "||", ">=", "==", "+%", "(", ")", "{",
      "}",   "[",  "]",  ",",  ":",  "=",  "!",  "^", "+", "/"};
  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
      // Comment to end of line.
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const int start_line = line;
    const int start_column = column;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_')) {
        ++j;
      }
      tokens.push_back({Tok::kIdent, std::string(text.substr(i, j - i)),
                        start_line, start_column});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      tokens.push_back({Tok::kNumber, std::string(text.substr(i, j - i)),
                        start_line, start_column});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (absl::string_view sym : kSymbols) {
      if (text.substr(i, sym.size()) == sym) {
        tokens.push_back(
            {Tok::kSymbol, std::string(sym), start_line, start_column});
        advance(sym.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      return ErrorAt(
          line, column,
          absl::StrCat("unexpected character '", std::string(1, c), "'"));
    }
  }
  tokens.push_back({Tok::kEnd, "", line, column});
  return tokens;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  absl::StatusOr<Program> ParseProgram() {
    RETURN_IF_ERROR(ExpectKeyword("fun"));
    RETURN_IF_ERROR(ExpectSymbol("("));
    Program program;
    if (!PeekSymbol(")")) {
      while (true) {
        ASSIGN_OR_RETURN(std::string name, ExpectIdent());
        RETURN_IF_ERROR(ExpectSymbol(":"));
        ASSIGN_OR_RETURN(Type type, ParseType());
        program.params.push_back({std::move(name), std::move(type)});
        if (!PeekSymbol(",")) break;
        Next();
      }
    }
    RETURN_IF_ERROR(ExpectSymbol(")"));
    if (PeekSymbol("->")) {
      Next();
      ASSIGN_OR_RETURN(Type out, ParseType());
      program.output_type = std::move(out);
    }
    RETURN_IF_ERROR(ExpectSymbol("{"));
    ASSIGN_OR_RETURN(program.body, ParseExpr());
    RETURN_IF_ERROR(ExpectSymbol("}"));
    if (Peek().kind != Tok::kEnd) {
      return Unexpected("end of input");
    }
    return program;
  }

 private:
  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Next() { return tokens_[pos_++]; }

  bool PeekSymbol(absl::string_view s) const {
    return Peek().kind == Tok::kSymbol && Peek().text == s;
  }
  bool PeekKeyword(absl::string_view s) const {
    return Peek().kind == Tok::kIdent && Peek().text == s;
  }

  absl::Status Unexpected(absl::string_view expected) const {
    const Token& t = Peek();
    const std::string found =
        t.kind == Tok::kEnd ? "end of input" : absl::StrCat("'", t.text, "'");
    return ErrorAt(t.line, t.column,
                   absl::StrCat("expected ", expected, ", found ", found));
  }

  absl::Status ExpectSymbol(absl::string_view s) {
    if (!PeekSymbol(s)) return Unexpected(absl::StrCat("'", s, "'"));
    Next();
    return absl::OkStatus();
  }

  absl::Status ExpectKeyword(absl::string_view s) {
    if (!PeekKeyword(s)) return Unexpected(absl::StrCat("'", s, "'"));
    Next();
    return absl::OkStatus();
  }

  absl::StatusOr<std::string> ExpectIdent() {
    if (Peek().kind != Tok::kIdent || Keywords().contains(Peek().text)) {
      return Unexpected("identifier");
    }
    return Next().text;
  }

  absl::StatusOr<std::uint64_t> ExpectNumber() {
    if (Peek().kind != Tok::kNumber) return Unexpected("integer");
    const Token& t = Next();
    std::uint64_t value;
    if (!absl::SimpleAtoi(t.text, &value)) {
      return ErrorAt(t.line, t.column, "integer literal too large");
    }
    return value;
  }

  absl::StatusOr<int> ExpectWidth() {
    const Token& t = Peek();
    ASSIGN_OR_RETURN(std::uint64_t w, ExpectNumber());
    if (w < 1 || w > kMaxIntWidth) {
      return ErrorAt(
          t.line, t.column,
          absl::StrCat("integer width must be in [1, ", kMaxIntWidth, "]"));
    }
    return static_cast<int>(w);
  }

  absl::StatusOr<Rational> ExpectRational() {
    if (Peek().kind != Tok::kNumber) return Unexpected("rational literal");
    std::string text = Next().text;
    if (PeekSymbol("/")) {
      Next();
      if (Peek().kind != Tok::kNumber) return Unexpected("denominator");
      const Token& den = Next();
      if (den.text.find_first_not_of('0') == std::string::npos) {
        return ErrorAt(den.line, den.column, "zero denominator");
      }
      absl::StrAppend(&text, "/", den.text);
    }
    return Rational::FromString(text);
  }

  absl::StatusOr<Type> ParseType() {
    if (PeekKeyword("bool")) {
      Next();
      return Type::Bool();
    }
    if (PeekKeyword("int")) {
      Next();
      RETURN_IF_ERROR(ExpectSymbol("("));
      ASSIGN_OR_RETURN(int w, ExpectWidth());
      RETURN_IF_ERROR(ExpectSymbol(")"));
      return Type::Int(w);
    }
    if (PeekSymbol("(")) {
      Next();
      std::vector<Type> elements;
      ASSIGN_OR_RETURN(Type first, ParseType());
      elements.push_back(std::move(first));
      while (PeekSymbol(",")) {
        Next();
        ASSIGN_OR_RETURN(Type t, ParseType());
        elements.push_back(std::move(t));
      }
      RETURN_IF_ERROR(ExpectSymbol(")"));
      if (elements.size() < 2) return elements.front();
      return Type::Tuple(std::move(elements));
    }
    return Unexpected("type");
  }

  absl::StatusOr<ExprPtr> ParseExpr() {
    if (PeekKeyword("let")) return ParseLet();
    return ParseIff();
  }

  absl::StatusOr<ExprPtr> ParseLet() {
    RETURN_IF_ERROR(ExpectKeyword("let"));
    ASSIGN_OR_RETURN(std::string name, ExpectIdent());
    RETURN_IF_ERROR(ExpectSymbol("="));
    ASSIGN_OR_RETURN(ExprPtr bound, ParseExpr());
    RETURN_IF_ERROR(ExpectKeyword("in"));
    ASSIGN_OR_RETURN(ExprPtr body, ParseExpr());
    return Let(std::move(name), std::move(bound), std::move(body));
  }

  template <typename Sub, typename Build>
  absl::StatusOr<ExprPtr> ParseLeftAssoc(absl::string_view op, Sub sub,
                                         Build build) {
    ASSIGN_OR_RETURN(ExprPtr lhs, (this->*sub)());
    while (PeekSymbol(op)) {
      Next();
      ASSIGN_OR_RETURN(ExprPtr rhs, (this->*sub)());
      lhs = build(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  absl::StatusOr<ExprPtr> ParseIff() {
    return ParseLeftAssoc("<->", &Parser::ParseOr, &Iff);
  }
  absl::StatusOr<ExprPtr> ParseOr() {
    return ParseLeftAssoc("||", &Parser::ParseXor, &Or);
  }
  absl::StatusOr<ExprPtr> ParseXor() {
    return ParseLeftAssoc("^", &Parser::ParseAnd, &Xor);
  }
  absl::StatusOr<ExprPtr> ParseAnd() {
    return ParseLeftAssoc("&&", &Parser::ParseCmp, &And);
  }

  absl::StatusOr<ExprPtr> ParseCmp() {
    ASSIGN_OR_RETURN(ExprPtr lhs, ParseSum());
    if (PeekSymbol(">=") || PeekSymbol("==")) {
      const bool ge = Next().text == ">=";
      ASSIGN_OR_RETURN(ExprPtr rhs, ParseSum());
      return ge ? IntGe(std::move(lhs), std::move(rhs))
                : IntEq(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  absl::StatusOr<ExprPtr> ParseSum() {
    ASSIGN_OR_RETURN(ExprPtr lhs, ParseUnary());
    while (PeekSymbol("+") || PeekSymbol("+%")) {
      const bool saturating = Next().text == "+";
      ASSIGN_OR_RETURN(ExprPtr rhs, ParseUnary());
      lhs = IntAdd(std::move(lhs), std::move(rhs), saturating);
    }
    return lhs;
  }

  absl::StatusOr<ExprPtr> ParseUnary() {
    if (PeekSymbol("!")) {
      Next();
      ASSIGN_OR_RETURN(ExprPtr operand, ParseUnary());
      return Not(std::move(operand));
    }
    return ParsePrimary();
  }

  absl::StatusOr<ExprPtr> ParsePrimary() {
    const Token& t = Peek();
    if (t.kind == Tok::kIdent) {
      if (t.text == "flip") {
        Next();
        const Token& lit = Peek();
        ASSIGN_OR_RETURN(Rational p, ExpectRational());
        if (p < Rational(0) || p > Rational(1)) {
          return ErrorAt(lit.line, lit.column,
                         absl::StrCat("probability ", p.ToString(),
                                      " out of range [0, 1]"));
        }
        return Flip(std::move(p));
      }
      if (t.text == "if") {
        Next();
        ASSIGN_OR_RETURN(ExprPtr cond, ParseExpr());
        RETURN_IF_ERROR(ExpectSymbol("{"));
        ASSIGN_OR_RETURN(ExprPtr then_branch, ParseExpr());
        RETURN_IF_ERROR(ExpectSymbol("}"));
        RETURN_IF_ERROR(ExpectKeyword("else"));
        RETURN_IF_ERROR(ExpectSymbol("{"));
        ASSIGN_OR_RETURN(ExprPtr else_branch, ParseExpr());
        RETURN_IF_ERROR(ExpectSymbol("}"));
        return Ite(std::move(cond), std::move(then_branch),
                   std::move(else_branch));
      }
      if (t.text == "let") return ParseLet();
      if (t.text == "true" || t.text == "false") {
        Next();
        return BoolConst(t.text == "true");
      }
      if (t.text == "int") {
        Next();
        RETURN_IF_ERROR(ExpectSymbol("("));
        ASSIGN_OR_RETURN(int width, ExpectWidth());
        RETURN_IF_ERROR(ExpectSymbol(","));
        ASSIGN_OR_RETURN(std::uint64_t value, ExpectNumber());
        RETURN_IF_ERROR(ExpectSymbol(")"));
        return IntConst(value, width);
      }
      if (t.text == "categorical") {
        Next();
        int width = 0;
        if (PeekSymbol("(")) {
          Next();
          ASSIGN_OR_RETURN(width, ExpectWidth());
          RETURN_IF_ERROR(ExpectSymbol(")"));
        }
        RETURN_IF_ERROR(ExpectSymbol("["));
        std::vector<Rational> weights;
        ASSIGN_OR_RETURN(Rational first, ExpectRational());
        weights.push_back(std::move(first));
        while (PeekSymbol(",")) {
          Next();
          ASSIGN_OR_RETURN(Rational w, ExpectRational());
          weights.push_back(std::move(w));
        }
        RETURN_IF_ERROR(ExpectSymbol("]"));
        if (width == 0) width = WidthFor(weights.size() - 1);
        return Categorical(std::move(weights), width);
      }
      ASSIGN_OR_RETURN(std::string name, ExpectIdent());
      return Var(std::move(name));
    }
    if (PeekSymbol("(")) {
      Next();
      std::vector<ExprPtr> elements;
      ASSIGN_OR_RETURN(ExprPtr first, ParseExpr());
      elements.push_back(std::move(first));
      while (PeekSymbol(",")) {
        Next();
        ASSIGN_OR_RETURN(ExprPtr e, ParseExpr());
        elements.push_back(std::move(e));
      }
      RETURN_IF_ERROR(ExpectSymbol(")"));
      if (elements.size() == 1) return elements.front();
      return Tuple(std::move(elements));
    }
    return Unexpected("expression");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

absl::StatusOr<Program> Parse(absl::string_view text) {
  ASSIGN_OR_RETURN(std::vector<Token> tokens, Lex(text));
  Parser parser(std::move(tokens));
  return parser.ParseProgram();
}

absl::StatusOr<ValidatedProgram> ParseAndValidate(absl::string_view text) {
  ASSIGN_OR_RETURN(Program program, Parse(text));
  return Validate(program);
}

}  // namespace dpbound
