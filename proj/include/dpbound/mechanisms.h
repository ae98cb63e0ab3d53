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

// Built-in randomized algorithms and their symmetry sets.

#ifndef DPBOUND_MECHANISMS_H_
#define DPBOUND_MECHANISMS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpbound/domain.h"
#include "dpbound/prob_lang.h"
#include "dpbound/rational.h"
#include "dpbound/sets.h"

namespace dpbound {

// Target output V_x of an input, for mechanisms with a one-coordinate
// integer output.
using TargetMap = std::function<std::uint64_t(const Valuation&)>;

struct MechanismParams {
  int n = 0;
  Rational lambda;
  std::uint64_t k = 0;
  std::uint64_t threshold = 0;
  Rational lambda1;
  Rational lambda2;
};

struct Mechanism {
  // "rr", "rrcount", "above" or "program".
  std::string name;
  MechanismParams params;
  ValidatedProgram program;
  Domain input_domain;
  Domain output_domain;
  std::optional<TargetMap> targets;

  // Inputs differing from x in exactly one entry, coordinate-major then
  // value-ascending.
  absl::StatusOr<std::vector<PointCode>> Neighbors(PointCode x) const;
};

// Randomized response: each bit is flipped independently with probability
// lambda. Output is the n-bit vector.
absl::StatusOr<Mechanism> Rr(int n, const Rational& lambda);

// Randomized response followed by counting the ones. Y = {0..n}, V = count.
absl::StatusOr<Mechanism> Rrcount(int n, const Rational& lambda);

// Above threshold over n integer queries in {0..k}. The noisy threshold is
// min(T + G1, k) and query i passes when min(x_i + G2_i, k) reaches it, with
// G1, G2_i truncated geometric. Returns the 1-based index of the first
// passing query, 0 when none passes.
absl::StatusOr<Mechanism> AboveThreshold(int n, std::uint64_t k,
                                         std::uint64_t threshold,
                                         const Rational& lambda1,
                                         const Rational& lambda2);

// Wraps a user program. Booleans range over {0,1} and int(w) over
// {0..2^w-1}, for parameters and outputs alike.
absl::StatusOr<Mechanism> FromProgram(ValidatedProgram program);

// Geometric distribution on {0..k} with the tail folded onto k:
// Pr[z] = (1 - lambda) lambda^z for z < k and Pr[k] = lambda^k.
absl::StatusOr<std::vector<std::pair<std::uint64_t, Rational>>>
TruncatedGeometric(const Rational& lambda, std::uint64_t k);

// Randomized-response symmetry sets: I holds (1^i 0^(n-i), 0^n) for i in
// 0..n, C the 2n triples stepping the ones-prefix up or down by one with
// output 0^n. The inference set carries the canonicalization
// (x, y) -> (0^n, x xor y), which preserves probabilities because an output
// only depends on which bits were flipped.
struct RrSets {
  InferenceSet inference;
  PrivacySet privacy;
};
absl::StatusOr<RrSets> RrSymmetrySets(int n);

// Counting symmetry sets: A = {1^i 0^(n-i)} and I the pairs (1^i 0^(n-i), j)
// with j within alpha of i, clipped to {0..n}.
struct RrcountSets {
  InferenceSet inference;
  AccuracySet accuracy;
};
absl::StatusOr<RrcountSets> RrcountSymmetrySets(int n, std::uint64_t alpha);

}  // namespace dpbound

#endif  // DPBOUND_MECHANISMS_H_
