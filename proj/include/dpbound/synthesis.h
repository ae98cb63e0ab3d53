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

// Exact privacy and accuracy bound synthesis over restricted sets.
//
// Inference materializes the probabilities an inference set asks for, one
// joint-distribution run per distinct (canonical) input. The privacy bound is
// the largest likelihood ratio M(x,y)/M(x',y) over a privacy set; the
// accuracy bound is the smallest mass an input puts within alpha of its
// target.

#ifndef DPBOUND_SYNTHESIS_H_
#define DPBOUND_SYNTHESIS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "dpbound/compiler.h"
#include "dpbound/mechanisms.h"
#include "dpbound/rational.h"
#include "dpbound/sets.h"

namespace dpbound {

class ProbMatrix {
 public:
  void Set(PointCode x, PointCode y, Rational p) {
    values_.insert_or_assign(IoPair{x, y}, std::move(p));
  }
  // nullptr when (x, y) was not computed.
  const Rational* Find(PointCode x, PointCode y) const {
    auto it = values_.find(IoPair{x, y});
    return it == values_.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  // Entries ordered by (x, y).
  std::vector<std::pair<IoPair, Rational>> Entries() const;

 private:
  absl::flat_hash_map<IoPair, Rational> values_;
};

struct InferenceResult {
  ProbMatrix matrix;
  std::uint64_t solver_runs = 0;
  double seconds = 0;
};

// Worker threads; values <= 0 mean the hardware concurrency.
struct SynthesisOptions {
  int jobs = 1;
};

absl::StatusOr<InferenceResult> Inference(const CompiledModel& model,
                                          const Mechanism& mech,
                                          const InferenceSet& set,
                                          const SynthesisOptions& options = {});

// A likelihood ratio that may be +infinity (M(x',y) = 0 < M(x,y)).
struct Ratio {
  bool infinite = false;
  Rational value;

  std::string ToString() const;
  double ToDouble() const;
  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
};

struct PrivacyReport {
  Ratio p;
  std::optional<Triple> witness;
  std::uint64_t solver_runs = 0;
  std::uint64_t triples_scanned = 0;
  // Triples with M(x,y) = M(x',y) = 0, which carry no ratio.
  std::uint64_t skipped_zero = 0;
  double inference_seconds = 0;
  double synthesis_seconds = 0;

  // ln p (informational).
  double Epsilon() const;
};

struct AccuracyReport {
  // Minimum success probability 1 - beta.
  Rational p;
  Rational beta;
  std::uint64_t alpha = 0;
  PointCode witness = 0;
  std::uint64_t solver_runs = 0;
  double inference_seconds = 0;
  double synthesis_seconds = 0;
};

// Max-ratio scan over a ready matrix. Every triple's (x,y) and (x',y) must be
// present. Starting from p = 0, the first triple that strictly improves p
// becomes the witness; an infinite ratio wins permanently.
absl::StatusOr<PrivacyReport> ScanPrivacy(const ProbMatrix& matrix,
                                          const PrivacySet& set);

// Checks that the inference set covers every probability the privacy set
// reads.
absl::Status CheckPrivacyCoverage(const PrivacySet& privacy,
                                  const InferenceSet& inference);

absl::StatusOr<PrivacyReport> PrivacyBound(
    const CompiledModel& model, const Mechanism& mech,
    const PrivacySet& privacy, const InferenceSet& inference,
    const SynthesisOptions& options = {});

// Probability mass x puts on [V_x - alpha, V_x + alpha] clipped to Y.
absl::StatusOr<Rational> IntervalMass(const ProbMatrix& matrix,
                                      const Mechanism& mech, PointCode x,
                                      std::uint64_t alpha);

absl::Status CheckAccuracyCoverage(const Mechanism& mech,
                                   const AccuracySet& accuracy,
                                   std::uint64_t alpha,
                                   const InferenceSet& inference);

absl::StatusOr<AccuracyReport> ScanAccuracy(const ProbMatrix& matrix,
                                            const Mechanism& mech,
                                            const AccuracySet& accuracy,
                                            std::uint64_t alpha);

absl::StatusOr<AccuracyReport> AccuracyBound(
    const CompiledModel& model, const Mechanism& mech,
    const AccuracySet& accuracy, std::uint64_t alpha,
    const InferenceSet& inference, const SynthesisOptions& options = {});

struct RankedInput {
  PointCode x;
  Rational p;
};

struct RankResult {
  std::vector<RankedInput> entries;
  std::uint64_t solver_runs = 0;
  double inference_seconds = 0;
  double synthesis_seconds = 0;
};

// The k inputs of the accuracy set with the smallest interval mass,
// ascending, ties in set order.
absl::StatusOr<RankResult> RankAccuracy(const CompiledModel& model,
                                        const Mechanism& mech,
                                        const AccuracySet& accuracy,
                                        std::uint64_t alpha,
                                        const InferenceSet& inference,
                                        std::size_t k,
                                        const SynthesisOptions& options = {});

absl::StatusOr<InferenceSet> ExhaustiveInferenceSet(
    const Mechanism& mech, std::uint64_t cap = kDefaultSetCap);
absl::StatusOr<PrivacySet> ExhaustivePrivacySet(
    const Mechanism& mech, std::uint64_t cap = kDefaultSetCap);
absl::StatusOr<AccuracySet> ExhaustiveAccuracySet(
    const Mechanism& mech, std::uint64_t cap = kDefaultSetCap);

struct SetValidation {
  bool valid = true;
  std::string message;
  // The first exhaustive element whose value the set fails to realize.
  std::optional<Triple> missing_triple;
  std::optional<PointCode> missing_input;
};

// Checks that every likelihood ratio over all neighbor triples is realized by
// some triple of the set, using exact exhaustive probabilities.
absl::StatusOr<SetValidation> ValidatePrivacySet(
    const CompiledModel& model, const Mechanism& mech, const PrivacySet& set,
    std::uint64_t cap = 1'000'000, const SynthesisOptions& options = {});

// Checks that every input's interval mass is realized by some member of the
// set.
absl::StatusOr<SetValidation> ValidateAccuracySet(
    const CompiledModel& model, const Mechanism& mech, const AccuracySet& set,
    std::uint64_t alpha, std::uint64_t cap = 1'000'000,
    const SynthesisOptions& options = {});

}  // namespace dpbound

#endif  // DPBOUND_SYNTHESIS_H_
