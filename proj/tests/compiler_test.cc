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

#include "dpbound/compiler.h"

#include <cstdint>
#include <map>
#include <vector>

#include "dpbound/mechanisms.h"
#include "dpbound/oracle.h"
#include "dpbound/prob_lang.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpbound {
namespace {

using testing::Must;
using testing::Q;

// (1 - lambda)^agree * lambda^disagree.
Rational RrClosedForm(const Valuation& x, const Valuation& y,
                      const Rational& lambda) {
  Rational p(1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    p *= x[i] == y[i] ? Rational(1) - lambda : lambda;
  }
  return p;
}

Rational Total(const Distribution& d) {
  Rational s;
  for (const auto& [y, p] : d) s += p;
  return s;
}

TEST(CompilerTest, TwoClientRandomizedResponseTable) {
  const Mechanism m = Must(Rr(2, Q("1/5")));
  const CompiledModel model = Must(Compile(m.program));
  EXPECT_EQ(Must(model.ProbOf({0, 0}, {0, 0})), Q("16/25"));
  EXPECT_EQ(Must(model.ProbOf({1, 0}, {0, 0})), Q("4/25"));
  EXPECT_EQ(Must(model.ProbOf({1, 1}, {0, 0})), Q("1/25"));
  EXPECT_EQ(Must(model.ProbOf({0, 0}, {1, 0})), Q("4/25"));
}

TEST(CompilerTest, JointDistributionOfTwoClients) {
  const Mechanism m = Must(Rr(2, Q("1/5")));
  const CompiledModel model = Must(Compile(m.program));
  const Distribution d = Must(model.JointDistribution({0, 0}));
  const Distribution want = {{{0, 0}, Q("16/25")},
                             {{0, 1}, Q("4/25")},
                             {{1, 0}, Q("4/25")},
                             {{1, 1}, Q("1/25")}};
  EXPECT_EQ(d, want);
}

TEST(CompilerTest, IdentityProgram) {
  const CompiledModel model =
      Must(Compile(Must(ParseAndValidate("fun(x: bool) { x }"))));
  EXPECT_EQ(Must(model.ProbOf({1}, {1})), Rational(1));
  EXPECT_EQ(Must(model.ProbOf({1}, {0})), Rational(0));
  const Distribution d = Must(model.JointDistribution({0}));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].first, Valuation{0});
}

TEST(CompilerTest, RandomizedResponseMatchesClosedForm) {
  for (int n = 1; n <= 5; ++n) {
    const Rational lambda = Q("2/7");
    const Mechanism m = Must(Rr(n, lambda));
    const CompiledModel model = Must(Compile(m.program));
    for (PointCode x = 0; x < m.input_domain.size(); ++x) {
      const Valuation xv = m.input_domain.Decode(x);
      const Distribution d = Must(model.JointDistribution(xv));
      EXPECT_EQ(d.size(), m.output_domain.size());
      for (const auto& [y, p] : d) EXPECT_EQ(p, RrClosedForm(xv, y, lambda));
    }
  }
}

TEST(CompilerTest, ThreeQueryRoutesAgree) {
  const Mechanism m = Must(AboveThreshold(2, 2, 1, Q("1/3"), Q("1/2")));
  const CompiledModel model = Must(Compile(m.program));
  for (PointCode x = 0; x < m.input_domain.size(); ++x) {
    const Valuation xv = m.input_domain.Decode(x);
    const Distribution d = Must(model.JointDistribution(xv));
    std::map<Valuation, Rational> joint(d.begin(), d.end());
    for (PointCode y = 0; y < m.output_domain.size(); ++y) {
      const Valuation yv = m.output_domain.Decode(y);
      const Rational point = Must(model.ProbOf(xv, yv));
      EXPECT_EQ(point, Must(model.ProbOfMaterialized(xv, yv)));
      EXPECT_EQ(point, joint.count(yv) ? joint[yv] : Rational(0));
    }
    EXPECT_EQ(Total(d), Rational(1));
  }
}

TEST(CompilerTest, CountingDistribution) {
  const Mechanism m = Must(Rrcount(2, Q("1/5")));
  const CompiledModel model = Must(Compile(m.program));
  const Distribution d = Must(model.JointDistribution({0, 0}));
  const Distribution want = {
      {{0}, Q("16/25")}, {{1}, Q("8/25")}, {{2}, Q("1/25")}};
  EXPECT_EQ(d, want);
}

TEST(CompilerTest, AboveThresholdMatchesOracle) {
  const Mechanism m = Must(AboveThreshold(2, 1, 1, Q("1/2"), Q("1/2")));
  const CompiledModel model = Must(Compile(m.program));
  for (PointCode x = 0; x < m.input_domain.size(); ++x) {
    const Valuation xv = m.input_domain.Decode(x);
    EXPECT_EQ(Must(model.JointDistribution(xv)),
              Must(EnumerateDistribution(m.program, xv)));
  }
}

TEST(CompilerTest, ManualFormulaAgreesWithCompiledProgram) {
  for (int n = 1; n <= 4; ++n) {
    const Rational lambda = Q("1/5");
    const Mechanism m = Must(Rr(n, lambda));
    const CompiledModel compiled = Must(Compile(m.program));
    const CompiledModel manual = Must(ManualRrWbf(n, lambda));
    EXPECT_TRUE(manual.relational());
    for (PointCode x = 0; x < m.input_domain.size(); ++x) {
      for (PointCode y = 0; y < m.output_domain.size(); ++y) {
        const Valuation xv = m.input_domain.Decode(x);
        const Valuation yv = m.output_domain.Decode(y);
        EXPECT_EQ(Must(manual.ProbOf(xv, yv)), Must(compiled.ProbOf(xv, yv)));
        EXPECT_EQ(Must(manual.ProbOf(xv, yv)), RrClosedForm(xv, yv, lambda));
      }
    }
  }
}

TEST(CompilerTest, ManualFormulaWithZeroNoiseIsIdentity) {
  const CompiledModel manual = Must(ManualRrWbf(3, Rational(0)));
  EXPECT_EQ(Must(manual.ProbOf({1, 0, 1}, {1, 0, 1})), Rational(1));
  EXPECT_EQ(Must(manual.ProbOf({1, 0, 1}, {1, 1, 1})), Rational(0));
}

TEST(CompilerTest, ConditionedRandomizedResponseHasLinearSize) {
  for (int n = 2; n <= 10; ++n) {
    const Mechanism m = Must(Rr(n, Q("1/5")));
    const CompiledModel model = Must(Compile(m.program));
    EXPECT_EQ(Must(model.ConditionedNodeCount(Valuation(n, 0))),
              static_cast<std::size_t>(n + 2));
  }
}

TEST(CompilerTest, OutputDiagramsMentionNoOutputVariables) {
  const Mechanism m = Must(Rrcount(3, Q("1/5")));
  const CompiledModel model = Must(Compile(m.program));
  EXPECT_EQ(model.stats().num_vars,
            model.stats().input_vars + model.stats().coin_vars);
  EXPECT_EQ(model.stats().input_vars, 3u);
  EXPECT_EQ(model.stats().coin_vars, 3u);
}

TEST(CompilerTest, CategoricalChainWeights) {
  const CompiledModel model = Must(Compile(
      Must(ParseAndValidate("fun() { categorical(2)[1/2, 0, 1/6, 1/3] }"))));
  const Distribution d = Must(model.JointDistribution({}));
  const Distribution want = {{{0}, Q("1/2")}, {{2}, Q("1/6")}, {{3}, Q("1/3")}};
  EXPECT_EQ(d, want);
}

TEST(CompilerTest, SaturatingAndWrappingAddition) {
  const CompiledModel sat = Must(
      Compile(Must(ParseAndValidate("fun(a: int(2), b: int(2)) { a + b }"))));
  const CompiledModel wrap = Must(
      Compile(Must(ParseAndValidate("fun(a: int(2), b: int(2)) { a +% b }"))));
  for (std::uint64_t a = 0; a < 4; ++a) {
    for (std::uint64_t b = 0; b < 4; ++b) {
      EXPECT_EQ(Must(sat.ProbOf({a, b}, {std::min<std::uint64_t>(a + b, 3)})),
                Rational(1));
      EXPECT_EQ(Must(wrap.ProbOf({a, b}, {(a + b) % 4})), Rational(1));
    }
  }
}

TEST(CompilerTest, DomainViolationsAreErrors) {
  const Mechanism m = Must(Rr(2, Q("1/5")));
  const CompiledModel model = Must(Compile(m.program));
  EXPECT_FALSE(model.ProbOf({0, 2}, {0, 0}).ok());
  EXPECT_FALSE(model.ProbOf({0}, {0, 0}).ok());
  EXPECT_FALSE(model.ProbOf({0, 0}, {0, 0, 0}).ok());
  EXPECT_FALSE(model.JointDistribution({1, 1, 1}).ok());
}

TEST(CompilerTest, NodeBudgetSurfacesAsResourceExhausted) {
  const Mechanism m = Must(AboveThreshold(4, 3, 2, Q("1/2"), Q("1/2")));
  CompileOptions options;
  options.node_budget = 20;
  const auto model = Compile(m.program, options);
  ASSERT_FALSE(model.ok());
  EXPECT_EQ(model.status().code(), absl::StatusCode::kResourceExhausted);
}

}  // namespace
}  // namespace dpbound
