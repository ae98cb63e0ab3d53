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

#include "dpbound/prob_lang.h"

#include <string>

#include "dpbound/mechanisms.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpbound {
namespace {

using testing::Must;
using testing::Q;

TEST(ParseTest, SingleFlipProgram) {
  const Program p =
      Must(Parse("fun(x:bool) { if flip 1/5 { !x } else { x } }"));
  ASSERT_EQ(p.params.size(), 1u);
  EXPECT_EQ(p.params[0].name, "x");
  EXPECT_TRUE(p.params[0].type.is_bool());
  ASSERT_EQ(p.body->kind, ExprKind::kIte);
  const Expr& cond = *p.body->children[0];
  EXPECT_EQ(cond.kind, ExprKind::kFlip);
  EXPECT_EQ(cond.probability, Q("1/5"));
  EXPECT_EQ(p.body->children[1]->kind, ExprKind::kNot);
  EXPECT_EQ(p.body->children[2]->kind, ExprKind::kVar);
}

TEST(ParseTest, RejectsProbabilityAboveOne) {
  const auto p = Parse("fun() { flip 3/2 }");
  ASSERT_FALSE(p.ok());
  EXPECT_NE(p.status().message().find("probability"), std::string::npos)
      << p.status();
}

TEST(ParseTest, SyntaxErrorsCarryPosition) {
  const auto p = Parse("fun(x: bool) {\n  x &&\n}");
  ASSERT_FALSE(p.ok());
  EXPECT_NE(p.status().message().find("line 3"), std::string::npos)
      << p.status();
  EXPECT_NE(p.status().message().find("column"), std::string::npos);
}

TEST(ParseTest, OperatorPrecedence) {
  // && binds tighter than ^, which binds tighter than ||.
  const Program p =
      Must(Parse("fun(a: bool, b: bool, c: bool) { a || b ^ c && a }"));
  ASSERT_EQ(p.body->kind, ExprKind::kOr);
  ASSERT_EQ(p.body->children[1]->kind, ExprKind::kXor);
  EXPECT_EQ(p.body->children[1]->children[1]->kind, ExprKind::kAnd);
}

TEST(ParseTest, IntegersAndCategorical) {
  const Program p = Must(
      Parse("fun(x: int(2)) -> int(2) { x +% categorical(2)[1/2, 1/4, 1/4] }"));
  ASSERT_EQ(p.body->kind, ExprKind::kIntAdd);
  EXPECT_FALSE(p.body->saturating);
  const Expr& cat = *p.body->children[1];
  EXPECT_EQ(cat.kind, ExprKind::kCategorical);
  EXPECT_EQ(cat.width, 2);
  EXPECT_EQ(cat.weights.size(), 3u);
  ASSERT_TRUE(p.output_type.has_value());
  EXPECT_EQ(*p.output_type, Type::Int(2));
}

TEST(ParseTest, CommentsAreIgnored) {
  DPB_EXPECT_OK(Parse("# header\nfun() { // trailing\n true }"));
}

TEST(ValidateTest, RandomizedResponseIsAcceptedWithBoolTuple) {
  for (int n = 1; n <= 5; ++n) {
    const Mechanism m = Must(Rr(n, Q("1/5")));
    if (n == 1) {
      EXPECT_EQ(m.program.output_type(), Type::Bool());
    } else {
      EXPECT_EQ(m.program.output_type(),
                Type::Tuple(std::vector<Type>(n, Type::Bool())));
    }
  }
}

TEST(ValidateTest, UnboundVariable) {
  const auto v = ParseAndValidate("fun(x: bool) { x && z }");
  ASSERT_FALSE(v.ok());
  EXPECT_NE(v.status().message().find("z"), std::string::npos) << v.status();
}

TEST(ValidateTest, CategoricalWeightsMustSumToOne) {
  const auto v = ParseAndValidate("fun() { categorical[1/2, 1/3] }");
  ASSERT_FALSE(v.ok());
  EXPECT_NE(v.status().message().find("sum"), std::string::npos) << v.status();
}

TEST(ValidateTest, TypeMismatches) {
  EXPECT_FALSE(ParseAndValidate("fun(x: int(2)) { !x }").ok());
  EXPECT_FALSE(ParseAndValidate("fun(x: int(2), y: int(3)) { x >= y }").ok());
  EXPECT_FALSE(
      ParseAndValidate("fun(c: bool) { if c { true } else { int(1, 0) } }")
          .ok());
  EXPECT_FALSE(ParseAndValidate("fun() -> bool { int(2, 1) }").ok());
  EXPECT_FALSE(ParseAndValidate("fun() { int(2, 4) }").ok());
}

TEST(ValidateTest, AnnotatesEverySubexpression) {
  const ValidatedProgram v = Must(ParseAndValidate(
      "fun(x: int(2)) { let y = x + int(2, 1) in (y >= x, y) }"));
  EXPECT_EQ(v.output_type(), Type::Tuple({Type::Bool(), Type::Int(2)}));
  EXPECT_EQ(v.TypeOf(*v.program.body), v.output_type());
}

TEST(RenderTest, RoundTripsRandomizedResponse) {
  const Mechanism m = Must(Rr(4, Q("1/5")));
  const std::string text = RenderProgram(m.program.program);
  const Program back = Must(Parse(text));
  EXPECT_TRUE(StructurallyEqual(back, m.program.program)) << text;
}

TEST(RenderTest, RoundTripsAboveThreshold) {
  const Mechanism m = Must(AboveThreshold(2, 3, 1, Q("1/2"), Q("1/3")));
  const std::string text = RenderProgram(m.program.program);
  const Program back = Must(Parse(text));
  EXPECT_TRUE(StructurallyEqual(back, m.program.program)) << text;
}

TEST(RenderTest, OneFlipLiteralPerCoin) {
  for (int n = 1; n <= 6; ++n) {
    const Mechanism m = Must(Rr(n, Q("1/5")));
    const std::string text = RenderProgram(m.program.program);
    int flips = 0;
    for (std::size_t at = text.find("flip"); at != std::string::npos;
         at = text.find("flip", at + 1)) {
      ++flips;
    }
    EXPECT_EQ(flips, CountRandomChoices(*m.program.program.body));
    EXPECT_EQ(flips, n);
  }
}

TEST(RenderTest, ParsedRandomizedResponseTextEqualsGenerator) {
  const Mechanism m = Must(Rr(2, Q("1/5")));
  const Program parsed =
      Must(Parse("fun(x1: bool, x2: bool) { (if flip 1/5 { !x1 } else { x1 },"
                 " if flip 1/5 { !x2 } else { x2 }) }"));
  EXPECT_TRUE(StructurallyEqual(parsed.body ? *parsed.body : *BoolConst(false),
                                *m.program.program.body));
}

}  // namespace
}  // namespace dpbound
