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

#include "dpbound/oracle.h"

#include "dpbound/compiler.h"
#include "dpbound/mechanisms.h"
#include "dpbound/prob_lang.h"
#include "gtest/gtest.h"
#include "program_gen.h"
#include "test_util.h"

namespace dpbound {
namespace {

using testing::Must;
using testing::Q;

TEST(OracleTest, CoinProfileMatchesCompiler) {
  const Mechanism m = Must(AboveThreshold(2, 3, 1, Q("1/2"), Q("1/3")));
  const CoinProfile profile = ProfileCoins(m.program.program);
  const CompiledModel model = Must(Compile(m.program));
  EXPECT_EQ(profile.coins.size(), model.coin_vars().size());
  const Mechanism rr = Must(Rr(3, Q("1/5")));
  const CoinProfile rp = ProfileCoins(rr.program.program);
  ASSERT_EQ(rp.coins.size(), 3u);
  for (const auto& c : rp.coins) EXPECT_EQ(c.bias, Q("1/5"));
}

TEST(OracleTest, TwoClientMass) {
  const Mechanism m = Must(Rr(2, Q("1/5")));
  const Distribution d = Must(EnumerateDistribution(m.program, {0, 0}));
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d[2].first, (Valuation{1, 0}));
  EXPECT_EQ(d[2].second, Q("4/25"));
}

TEST(OracleTest, DeterministicProgramHasOneOutcome) {
  const ValidatedProgram p =
      Must(ParseAndValidate("fun(a: int(2)) { a + int(2, 1) }"));
  const Distribution d = Must(EnumerateDistribution(p, {3}));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].first, Valuation{3});
  EXPECT_EQ(d[0].second, Rational(1));
}

TEST(OracleTest, CountingAgreesWithCompiler) {
  const Mechanism m = Must(Rrcount(3, Q("1/3")));
  const CompiledModel model = Must(Compile(m.program));
  for (PointCode x = 0; x < m.input_domain.size(); ++x) {
    const Valuation xv = m.input_domain.Decode(x);
    EXPECT_EQ(Must(EnumerateDistribution(m.program, xv)),
              Must(model.JointDistribution(xv)));
  }
}

TEST(OracleTest, PrivacyBounds) {
  EXPECT_EQ(Must(OraclePrivacyBound(Must(Rr(3, Q("1/5"))))).p.value,
            (Rational(1) - Q("1/5")) / Q("1/5"));
  EXPECT_EQ(Must(OraclePrivacyBound(Must(Rr(3, Q("1/2"))))).p.value,
            Rational(1));
}

TEST(OracleTest, AccuracyBounds) {
  EXPECT_EQ(Must(OracleAccuracyBound(Must(Rrcount(4, Q("1/5"))), 4)).p,
            Rational(1));
  EXPECT_EQ(Must(OracleAccuracyBound(Must(Rrcount(2, Q("1/5"))), 1)).p,
            Q("24/25"));
}

TEST(OracleTest, CapsAreEnforced) {
  OracleOptions options;
  options.coin_cap = 4;
  const Mechanism m = Must(Rr(5, Q("1/5")));
  const auto d = EnumerateDistribution(m.program, Valuation(5, 0), options);
  ASSERT_FALSE(d.ok());
  EXPECT_EQ(d.status().code(), absl::StatusCode::kResourceExhausted);
  options.coin_cap = 20;
  options.input_cap = 8;
  EXPECT_FALSE(OraclePrivacyBound(m, options).ok());
}

TEST(OracleTest, RandomProgramsAgreeWithCompiler) {
  testing::ProgramGen gen(2024);
  for (int i = 0; i < 150; ++i) {
    const Program p = gen.Next(10);
    const ValidatedProgram v = Must(Validate(p));
    const Mechanism m = Must(FromProgram(Must(Validate(p))));
    const CompiledModel model = Must(Compile(m.program));
    for (PointCode x = 0; x < m.input_domain.size(); ++x) {
      const Valuation xv = m.input_domain.Decode(x);
      ASSERT_EQ(Must(EnumerateDistribution(v, xv)),
                Must(model.JointDistribution(xv)))
          << RenderProgram(p) << " at " << m.input_domain.Format(xv);
    }
  }
}

}  // namespace
}  // namespace dpbound
