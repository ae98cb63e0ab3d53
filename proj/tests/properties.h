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

// Randomized property checks shared by the unit suite and the acceptance
// binary. Each returns OK or the first counterexample; seeds are fixed.

#ifndef DPBOUND_TESTS_PROPERTIES_H_
#define DPBOUND_TESTS_PROPERTIES_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpbound/compiler.h"
#include "dpbound/mechanisms.h"
#include "dpbound/prob_lang.h"
#include "dpbound/synthesis.h"
#include "program_gen.h"
#include "test_util.h"

namespace dpbound::testing {

inline Rational RandomLambda(std::mt19937_64& rng) {
  const std::int64_t den = 2 + rng() % 30;
  return Rational(1 + rng() % (den - 1), den);
}

inline Valuation RandomBits(std::mt19937_64& rng, int n) {
  Valuation v(n);
  for (auto& b : v) b = rng() & 1;
  return v;
}

inline std::uint64_t Distance(const Valuation& a, const Valuation& b) {
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

inline absl::Status Fail(const std::string& what) {
  return absl::InternalError(what);
}

inline absl::Status CheckNormalized(const Mechanism& m) {
  const CompiledModel model = Must(Compile(m.program));
  for (PointCode x = 0; x < m.input_domain.size(); ++x) {
    Rational sum;
    for (const auto& [y, p] :
         Must(model.JointDistribution(m.input_domain.Decode(x)))) {
      if (p <= Rational(0)) return Fail("nonpositive mass reported");
      sum += p;
    }
    if (sum != Rational(1)) {
      return Fail(
          absl::StrCat(m.name, " input ", x, " sums to ", sum.ToString()));
    }
  }
  return absl::OkStatus();
}

// Every built-in mechanism within small caps plus random programs.
inline absl::Status CheckNormalization(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int n = 1; n <= 6; ++n) {
    if (auto s = CheckNormalized(Must(Rr(n, RandomLambda(rng)))); !s.ok()) {
      return s;
    }
    if (auto s = CheckNormalized(Must(Rrcount(n, RandomLambda(rng))));
        !s.ok()) {
      return s;
    }
  }
  for (int n = 1; n <= 3; ++n) {
    for (std::uint64_t k = 1; k <= 3; ++k) {
      const Mechanism m = Must(AboveThreshold(
          n, k, rng() % (k + 1), RandomLambda(rng), RandomLambda(rng)));
      if (auto s = CheckNormalized(m); !s.ok()) return s;
    }
  }
  ProgramGen gen(seed + 1);
  for (int i = 0; i < 100; ++i) {
    const Program p = gen.Next(12);
    if (auto s = CheckNormalized(Must(FromProgram(Must(Validate(p)))));
        !s.ok()) {
      return Fail(absl::StrCat(s.message(), " in ", RenderProgram(p)));
    }
  }
  return absl::OkStatus();
}

// Pr[RR(x) = y] depends only on the Hamming distance of x and y. The second
// pair permutes coordinates and xors both sides with a common mask.
inline absl::Status CheckDistanceOnly(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < instances; ++i) {
    const int n = 2 + rng() % 7;
    const Mechanism m = Must(Rr(n, RandomLambda(rng)));
    const CompiledModel model = Must(Compile(m.program));
    const Valuation x = RandomBits(rng, n);
    const Valuation y = RandomBits(rng, n);
    std::vector<int> perm(n);
    for (int j = 0; j < n; ++j) perm[j] = j;
    std::shuffle(perm.begin(), perm.end(), rng);
    const Valuation mask = RandomBits(rng, n);
    Valuation x2(n), y2(n);
    for (int j = 0; j < n; ++j) {
      x2[j] = x[perm[j]] ^ mask[j];
      y2[j] = y[perm[j]] ^ mask[j];
    }
    if (Distance(x, y) != Distance(x2, y2)) return Fail("bad generator");
    if (Must(model.ProbOf(x, y)) != Must(model.ProbOf(x2, y2))) {
      return Fail(
          absl::StrCat("instance ", i, ": equal distance, unequal mass"));
    }
  }
  return absl::OkStatus();
}

// Neighbors sit at distances from y that differ by exactly one, so the
// likelihood ratio is (1-l)/l or its reciprocal.
inline absl::Status CheckNeighborStep(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < instances; ++i) {
    const int n = 1 + rng() % 8;
    const Rational lambda = RandomLambda(rng);
    const Mechanism m = Must(Rr(n, lambda));
    const CompiledModel model = Must(Compile(m.program));
    const PointCode xc = rng() % m.input_domain.size();
    const std::vector<PointCode> ns = Must(m.Neighbors(xc));
    const Valuation x = m.input_domain.Decode(xc);
    const Valuation xp = m.input_domain.Decode(ns[rng() % ns.size()]);
    const Valuation y = RandomBits(rng, n);
    const std::uint64_t a = Distance(x, y);
    const std::uint64_t b = Distance(xp, y);
    if ((a > b ? a - b : b - a) != 1) {
      return Fail(absl::StrCat("instance ", i, ": distances ", a, " and ", b));
    }
    const Rational ratio = Must(model.ProbOf(x, y)) / Must(model.ProbOf(xp, y));
    const Rational step = (Rational(1) - lambda) / lambda;
    if (ratio != (a < b ? step : Rational(1) / step)) {
      return Fail(absl::StrCat("instance ", i, ": ratio ", ratio.ToString()));
    }
  }
  return absl::OkStatus();
}

// Counting distributions depend only on the number of ones in the input.
inline absl::Status CheckCountOnly(std::uint64_t seed, int instances) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < instances; ++i) {
    const int n = 1 + rng() % 7;
    const Mechanism m = Must(Rrcount(n, RandomLambda(rng)));
    const CompiledModel model = Must(Compile(m.program));
    const Valuation x = RandomBits(rng, n);
    Valuation x2 = x;
    std::shuffle(x2.begin(), x2.end(), rng);
    if (Must(model.JointDistribution(x)) != Must(model.JointDistribution(x2))) {
      return Fail(absl::StrCat("instance ", i, ": same count, different law"));
    }
  }
  return absl::OkStatus();
}

inline absl::Status CheckAccuracyMonotone(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + rng() % 6;
    const Mechanism m = Must(Rrcount(n, RandomLambda(rng)));
    const CompiledModel model = Must(Compile(m.program));
    const InferenceSet inference = Must(ExhaustiveInferenceSet(m));
    const AccuracySet all = Must(ExhaustiveAccuracySet(m));
    Rational previous(-1);
    for (std::uint64_t alpha = 0; alpha <= static_cast<std::uint64_t>(n) + 1;
         ++alpha) {
      const Rational p = Must(AccuracyBound(model, m, all, alpha, inference)).p;
      if (p < previous) {
        return Fail(absl::StrCat("n=", n, ": bound drops at alpha=", alpha));
      }
      previous = p;
    }
    if (previous != Rational(1)) return Fail("alpha >= n is not certain");
  }
  return absl::OkStatus();
}

inline absl::Status CheckPrivacyReorder(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ProgramGen gen(seed + 1);
  for (int trial = 0; trial < 30; ++trial) {
    const Mechanism m = trial % 2 == 0
                            ? Must(Rr(1 + rng() % 4, RandomLambda(rng)))
                            : Must(FromProgram(Must(Validate(gen.Next(8)))));
    if (m.input_domain.arity() == 0) continue;
    const CompiledModel model = Must(Compile(m.program));
    const InferenceResult inf =
        Must(Inference(model, m, Must(ExhaustiveInferenceSet(m))));
    std::vector<Triple> triples =
        Must(Must(ExhaustivePrivacySet(m)).Materialize(1'000'000));
    Ratio reference;
    for (int round = 0; round < 4; ++round) {
      std::shuffle(triples.begin(), triples.end(), rng);
      PrivacySet set = PrivacySet::Explicit(m.input_domain, m.output_domain);
      for (const Triple& t : triples) Must(set.Add(t));
      const PrivacyReport r = Must(ScanPrivacy(inf.matrix, set));
      if (round == 0) reference = r.p;
      if (!(r.p == reference)) {
        return Fail(absl::StrCat("trial ", trial, ": ", r.p.ToString(), " vs ",
                                 reference.ToString()));
      }
    }
  }
  return absl::OkStatus();
}

inline absl::Status CheckParseRender(std::uint64_t seed, int programs) {
  ProgramGen gen(seed);
  for (int i = 0; i < programs; ++i) {
    const Program p = gen.Next(12);
    if (auto v = Validate(p); !v.ok()) return v.status();
    const std::string text = RenderProgram(p);
    const auto back = Parse(text);
    if (!back.ok())
      return Fail(absl::StrCat(back.status().message(), ": ", text));
    if (!StructurallyEqual(*back, p))
      return Fail("round trip differs: " + text);
    if (RenderProgram(*back) != text) return Fail("render not stable: " + text);
  }
  return absl::OkStatus();
}

}  // namespace dpbound::testing

#endif  // DPBOUND_TESTS_PROPERTIES_H_
