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

#include "dpbound/synthesis.h"

#include <algorithm>
#include <random>
#include <vector>

#include "dpbound/compiler.h"
#include "dpbound/mechanisms.h"
#include "dpbound/oracle.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpbound {
namespace {

using testing::Must;
using testing::Q;

struct Fixture {
  Mechanism mech;
  CompiledModel model;
};

Fixture Make(absl::StatusOr<Mechanism> m) {
  Mechanism mech = Must(std::move(m));
  CompiledModel model = Must(Compile(mech.program));
  return {std::move(mech), std::move(model)};
}

PrivacyReport ExhaustivePrivacy(const Fixture& f, int jobs = 1) {
  SynthesisOptions options;
  options.jobs = jobs;
  return Must(PrivacyBound(f.model, f.mech, Must(ExhaustivePrivacySet(f.mech)),
                           Must(ExhaustiveInferenceSet(f.mech)), options));
}

AccuracyReport ExhaustiveAccuracy(const Fixture& f, std::uint64_t alpha) {
  return Must(AccuracyBound(f.model, f.mech,
                            Must(ExhaustiveAccuracySet(f.mech)), alpha,
                            Must(ExhaustiveInferenceSet(f.mech))));
}

TEST(InferenceTest, TwoClientTable) {
  const Fixture f = Make(Rr(2, Q("1/5")));
  const RrSets sets = Must(RrSymmetrySets(2));
  const InferenceResult r = Must(Inference(f.model, f.mech, sets.inference));
  const Domain& in = f.mech.input_domain;
  EXPECT_EQ(*r.matrix.Find(in.EncodeUnchecked({0, 0}), 0), Q("16/25"));
  EXPECT_EQ(*r.matrix.Find(in.EncodeUnchecked({1, 0}), 0), Q("4/25"));
  EXPECT_EQ(*r.matrix.Find(in.EncodeUnchecked({1, 1}), 0), Q("1/25"));
  EXPECT_EQ(r.matrix.size(), 3u);
}

TEST(InferenceTest, EmptySetGivesEmptyMatrix) {
  const Fixture f = Make(Rr(2, Q("1/5")));
  const InferenceSet empty(f.mech.input_domain, f.mech.output_domain);
  const InferenceResult r = Must(Inference(f.model, f.mech, empty));
  EXPECT_TRUE(r.matrix.empty());
  EXPECT_EQ(r.solver_runs, 0u);
}

TEST(InferenceTest, ExhaustiveMatchesOracleAndCountsRuns) {
  const Fixture f = Make(Rr(3, Q("1/5")));
  for (int jobs : {1, 3}) {
    SynthesisOptions options;
    options.jobs = jobs;
    const InferenceResult r = Must(Inference(
        f.model, f.mech, Must(ExhaustiveInferenceSet(f.mech)), options));
    EXPECT_EQ(r.solver_runs, 8u);
    EXPECT_EQ(r.matrix.size(), 64u);
    for (PointCode x = 0; x < 8; ++x) {
      const Distribution d = Must(
          EnumerateDistribution(f.mech.program, f.mech.input_domain.Decode(x)));
      for (const auto& [y, p] : d) {
        EXPECT_EQ(*r.matrix.Find(x, f.mech.output_domain.EncodeUnchecked(y)),
                  p);
      }
    }
  }
}

TEST(PrivacyTest, TwoClientWitness) {
  const Fixture f = Make(Rr(2, Q("1/5")));
  const RrSets sets = Must(RrSymmetrySets(2));
  const PrivacyReport r =
      Must(PrivacyBound(f.model, f.mech, sets.privacy, sets.inference));
  EXPECT_EQ(r.p.value, Rational(4));
  EXPECT_FALSE(r.p.infinite);
  ASSERT_TRUE(r.witness.has_value());
  const Domain& in = f.mech.input_domain;
  EXPECT_EQ(in.Decode(r.witness->x), (Valuation{0, 0}));
  EXPECT_EQ(in.Decode(r.witness->x_prime), (Valuation{1, 0}));
  EXPECT_EQ(f.mech.output_domain.Decode(r.witness->y), (Valuation{0, 0}));
  EXPECT_EQ(r.solver_runs, 1u);
  EXPECT_NEAR(r.Epsilon(), std::log(4.0), 1e-12);
}

TEST(PrivacyTest, UniformChannelHasRatioOne) {
  for (int n = 1; n <= 4; ++n) {
    EXPECT_EQ(ExhaustivePrivacy(Make(Rr(n, Q("1/2")))).p.value, Rational(1));
  }
}

TEST(PrivacyTest, ExhaustiveFourClientsMatchesOracle) {
  const Fixture f = Make(Rr(4, Q("1/3")));
  const PrivacyReport r = ExhaustivePrivacy(f);
  EXPECT_EQ(r.p.value, Rational(2));
  EXPECT_EQ(r.solver_runs, 16u);
  EXPECT_EQ(Must(OraclePrivacyBound(f.mech)).p, r.p);
  // The witness reproduces the bound.
  const Rational a =
      Must(f.model.ProbOf(f.mech.input_domain.Decode(r.witness->x),
                          f.mech.output_domain.Decode(r.witness->y)));
  const Rational b =
      Must(f.model.ProbOf(f.mech.input_domain.Decode(r.witness->x_prime),
                          f.mech.output_domain.Decode(r.witness->y)));
  EXPECT_EQ(a / b, r.p.value);
}

TEST(PrivacyTest, ZeroDenominatorIsInfinityAndZeroOverZeroIsSkipped) {
  // Output is x1 exactly; with x2 ignored, half the triples are 0/0.
  const Fixture f = Make(
      FromProgram(Must(ParseAndValidate("fun(x1: bool, x2: bool) { x1 }"))));
  const PrivacyReport r = ExhaustivePrivacy(f);
  EXPECT_TRUE(r.p.infinite);
  EXPECT_EQ(r.p.ToString(), "inf");
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_GT(r.skipped_zero, 0u);
  EXPECT_EQ(Must(OraclePrivacyBound(f.mech)).p, r.p);
}

TEST(PrivacyTest, CoverageViolationRefusesToRun) {
  const Fixture f = Make(Rr(2, Q("1/5")));
  const RrSets sets = Must(RrSymmetrySets(2));
  InferenceSet partial(f.mech.input_domain, f.mech.output_domain);
  DPB_ASSERT_OK(partial.Add(0, 0));
  const auto r = PrivacyBound(f.model, f.mech, sets.privacy, partial);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(r.status().message().find("coverage"), std::string::npos);
}

TEST(PrivacyTest, ReorderingDoesNotChangeTheBound) {
  const Fixture f = Make(Rr(3, Q("2/9")));
  const InferenceSet inference = Must(ExhaustiveInferenceSet(f.mech));
  std::vector<Triple> triples =
      Must(Must(ExhaustivePrivacySet(f.mech)).Materialize(10'000));
  const InferenceResult inf = Must(Inference(f.model, f.mech, inference));
  std::mt19937_64 rng(17);
  Ratio first;
  for (int round = 0; round < 5; ++round) {
    std::shuffle(triples.begin(), triples.end(), rng);
    PrivacySet set =
        PrivacySet::Explicit(f.mech.input_domain, f.mech.output_domain);
    for (const Triple& t : triples) DPB_ASSERT_OK(set.Add(t));
    const PrivacyReport r = Must(ScanPrivacy(inf.matrix, set));
    if (round == 0) first = r.p;
    EXPECT_EQ(r.p, first);
  }
  EXPECT_EQ(first.value, Q("7/2"));
}

TEST(AccuracyTest, TwoClientCountingExample) {
  const Fixture f = Make(Rrcount(2, Q("1/5")));
  const RrcountSets sets = Must(RrcountSymmetrySets(2, 1));
  const AccuracyReport r =
      Must(AccuracyBound(f.model, f.mech, sets.accuracy, 1, sets.inference));
  EXPECT_EQ(r.p, Q("24/25"));
  EXPECT_EQ(r.beta, Q("1/25"));
  const std::uint64_t count = CountOnes(f.mech.input_domain.Decode(r.witness));
  EXPECT_TRUE(count == 0 || count == 2);
}

TEST(AccuracyTest, WideIntervalIsCertain) {
  const Fixture f = Make(Rrcount(3, Q("1/5")));
  const AccuracyReport r = ExhaustiveAccuracy(f, 3);
  EXPECT_EQ(r.p, Rational(1));
  EXPECT_EQ(r.beta, Rational(0));
}

TEST(AccuracyTest, EightClientWorstClassMatchesBinomialTail) {
  const Fixture f = Make(Rrcount(8, Q("1/5")));
  const RrcountSets sets = Must(RrcountSymmetrySets(8, 3));
  const AccuracyReport r =
      Must(AccuracyBound(f.model, f.mech, sets.accuracy, 3, sets.inference));
  // Sum over j <= 3 of C(8, j) (1/5)^j (4/5)^(8-j), computed independently.
  Rational tail;
  std::uint64_t binom = 1;
  for (unsigned j = 0; j <= 3; ++j) {
    tail += Rational(static_cast<std::int64_t>(binom)) *
            Rational::Pow(Q("1/5"), j) * Rational::Pow(Q("4/5"), 8 - j);
    binom = binom * (8 - j) / (j + 1);
  }
  EXPECT_EQ(r.p, tail);
  EXPECT_EQ(r.p.ToDouble(), 0.9437184);
}

TEST(AccuracyTest, CoverageAndTargetErrors) {
  const Fixture f = Make(Rrcount(2, Q("1/5")));
  const RrcountSets narrow = Must(RrcountSymmetrySets(2, 0));
  const auto r =
      AccuracyBound(f.model, f.mech, narrow.accuracy, 1, narrow.inference);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.status().code(), absl::StatusCode::kFailedPrecondition);
  const Fixture rr = Make(Rr(2, Q("1/5")));
  EXPECT_FALSE(AccuracyBound(rr.model, rr.mech,
                             Must(ExhaustiveAccuracySet(rr.mech)), 1,
                             Must(ExhaustiveInferenceSet(rr.mech)))
                   .ok());
  AccuracySet empty;
  EXPECT_FALSE(AccuracyBound(f.model, f.mech, empty, 1,
                             Must(ExhaustiveInferenceSet(f.mech)))
                   .ok());
}

TEST(RankTest, TableOfWorstInputs) {
  const Fixture f = Make(Rrcount(8, Q("1/5")));
  const RankResult r =
      Must(RankAccuracy(f.model, f.mech, Must(ExhaustiveAccuracySet(f.mech)), 3,
                        Must(ExhaustiveInferenceSet(f.mech)), 4));
  ASSERT_EQ(r.entries.size(), 4u);
  std::vector<double> floats;
  std::vector<std::uint64_t> counts;
  for (const RankedInput& e : r.entries) {
    floats.push_back(e.p.ToDouble());
    counts.push_back(CountOnes(f.mech.input_domain.Decode(e.x)));
  }
  EXPECT_EQ(floats,
            (std::vector<double>{0.9437184, 0.9437184, 0.9723904, 0.9723904}));
  EXPECT_EQ(counts[0] + counts[1], 8u);  // counts 0 and 8
  EXPECT_TRUE(counts[2] == 1 || counts[2] == 7);
  EXPECT_TRUE(counts[3] == 1 || counts[3] == 7);
}

TEST(RankTest, ZeroRowsAndFullOrderingAgainstOracle) {
  const Fixture f = Make(Rrcount(4, Q("1/3")));
  const AccuracySet all = Must(ExhaustiveAccuracySet(f.mech));
  const InferenceSet inference = Must(ExhaustiveInferenceSet(f.mech));
  EXPECT_TRUE(Must(RankAccuracy(f.model, f.mech, all, 1, inference, 0))
                  .entries.empty());
  const RankResult full =
      Must(RankAccuracy(f.model, f.mech, all, 1, inference, all.inputs.size()));
  const std::vector<Rational> oracle = Must(OracleIntervalMasses(f.mech, 1));
  ASSERT_EQ(full.entries.size(), all.inputs.size());
  for (std::size_t i = 0; i < full.entries.size(); ++i) {
    EXPECT_EQ(full.entries[i].p, oracle[full.entries[i].x]);
    if (i > 0) {
      EXPECT_LE(full.entries[i - 1].p, full.entries[i].p);
      if (full.entries[i - 1].p == full.entries[i].p) {
        EXPECT_LT(full.entries[i - 1].x, full.entries[i].x);
      }
    }
  }
}

TEST(ValidationTest, SymmetrySetsAreValid) {
  for (int n = 1; n <= 4; ++n) {
    const Fixture rr = Make(Rr(n, Q("1/5")));
    const SetValidation v = Must(
        ValidatePrivacySet(rr.model, rr.mech, Must(RrSymmetrySets(n)).privacy));
    EXPECT_TRUE(v.valid) << v.message;
    const Fixture count = Make(Rrcount(n, Q("1/5")));
    for (std::uint64_t alpha = 0; alpha <= static_cast<std::uint64_t>(n);
         ++alpha) {
      const SetValidation a = Must(ValidateAccuracySet(
          count.model, count.mech, Must(RrcountSymmetrySets(n, alpha)).accuracy,
          alpha));
      EXPECT_TRUE(a.valid) << a.message;
    }
  }
}

TEST(ValidationTest, RemovingATripleIsCaught) {
  const int n = 3;
  const Fixture f = Make(Rr(n, Q("1/5")));
  const RrSets sets = Must(RrSymmetrySets(n));
  // Keep only the triples that step the ones-prefix up; the down steps carry
  // the reciprocal ratios and nothing else realizes them.
  PrivacySet up =
      PrivacySet::Explicit(f.mech.input_domain, f.mech.output_domain);
  for (const Triple& t : sets.privacy.triples()) {
    if (CountOnes(f.mech.input_domain.Decode(t.x_prime)) >
        CountOnes(f.mech.input_domain.Decode(t.x))) {
      DPB_ASSERT_OK(up.Add(t));
    }
  }
  const SetValidation v = Must(ValidatePrivacySet(f.model, f.mech, up));
  EXPECT_FALSE(v.valid);
  EXPECT_TRUE(v.missing_triple.has_value());
}

TEST(ValidationTest, OneClientSetMinusOneTripleIsCaught) {
  const Fixture f = Make(Rr(1, Q("1/5")));
  const RrSets sets = Must(RrSymmetrySets(1));
  ASSERT_EQ(sets.privacy.size(), 2u);
  for (std::size_t drop = 0; drop < 2; ++drop) {
    PrivacySet rest =
        PrivacySet::Explicit(f.mech.input_domain, f.mech.output_domain);
    DPB_ASSERT_OK(rest.Add(sets.privacy.triples()[1 - drop]));
    EXPECT_FALSE(Must(ValidatePrivacySet(f.model, f.mech, rest)).valid);
  }
}

TEST(ValidationTest, SingleInputAccuracySetIsCaught) {
  const Fixture f = Make(Rrcount(3, Q("1/5")));
  AccuracySet one;
  one.inputs.push_back(f.mech.input_domain.EncodeUnchecked({1, 0, 0}));
  const SetValidation v = Must(ValidateAccuracySet(f.model, f.mech, one, 1));
  EXPECT_FALSE(v.valid);
  EXPECT_TRUE(v.missing_input.has_value());
}

}  // namespace
}  // namespace dpbound
