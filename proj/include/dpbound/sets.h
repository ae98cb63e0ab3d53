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

// Ordered collections of input/output pairs, neighbor triples and inputs that
// restrict the bound searches.

#ifndef DPBOUND_SETS_H_
#define DPBOUND_SETS_H_

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpbound/domain.h"

namespace dpbound {

// Default ceiling on the number of elements an exhaustive set may hold when
// it is materialized or validated.
inline constexpr std::uint64_t kDefaultSetCap = 50'000'000;

struct IoPair {
  PointCode x;
  PointCode y;
  friend bool operator==(const IoPair&, const IoPair&) = default;
  template <typename H>
  friend H AbslHashValue(H h, const IoPair& p) {
    return H::combine(std::move(h), p.x, p.y);
  }
};

struct Triple {
  PointCode x;
  PointCode x_prime;
  PointCode y;
  friend bool operator==(const Triple&, const Triple&) = default;
};

// Maps a pair to another pair of provably equal probability. Inference
// evaluates the representative, so many pairs can share one solver run.
using PairCanonicalizer = std::function<IoPair(const IoPair&)>;

class InferenceSet {
 public:
  InferenceSet(Domain input, Domain output)
      : input_(std::move(input)), output_(std::move(output)) {}

  // X^n x Y in (x, y) lexicographic order.
  static absl::StatusOr<InferenceSet> Exhaustive(
      const Domain& input, const Domain& output,
      std::uint64_t cap = kDefaultSetCap);

  // Appends (x, y) unless already present.
  absl::Status Add(PointCode x, PointCode y);

  const Domain& input() const { return input_; }
  const Domain& output() const { return output_; }
  const std::vector<IoPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool exhaustive() const { return exhaustive_; }
  bool Contains(PointCode x, PointCode y) const;

  void set_canonicalizer(PairCanonicalizer c) { canonicalizer_ = std::move(c); }
  const PairCanonicalizer& canonicalizer() const { return canonicalizer_; }

 private:
  Domain input_;
  Domain output_;
  std::vector<IoPair> pairs_;
  absl::flat_hash_set<IoPair> index_;
  bool exhaustive_ = false;
  PairCanonicalizer canonicalizer_;
};

// Either an explicit list of neighbor triples or the implicit exhaustive set
// (every x, every neighbor x' of x, every y), which is never materialized.
class PrivacySet {
 public:
  static PrivacySet Explicit(Domain input, Domain output);
  static PrivacySet Exhaustive(Domain input, Domain output);

  // Appends a triple; x and x' must be neighbors.
  absl::Status Add(const Triple& t);

  bool exhaustive() const { return exhaustive_; }
  const Domain& input() const { return input_; }
  const Domain& output() const { return output_; }
  std::uint64_t size() const;

  // Visits the triples in order; stops at the first non-OK status.
  absl::Status ForEach(
      const std::function<absl::Status(const Triple&)>& fn) const;

  // The explicit triples (empty for exhaustive sets).
  const std::vector<Triple>& triples() const { return triples_; }
  // Copy of the set as an explicit list, refusing past `cap` elements.
  absl::StatusOr<std::vector<Triple>> Materialize(
      std::uint64_t cap = kDefaultSetCap) const;

 private:
  PrivacySet(Domain input, Domain output, bool exhaustive)
      : input_(std::move(input)),
        output_(std::move(output)),
        exhaustive_(exhaustive) {}

  Domain input_;
  Domain output_;
  bool exhaustive_;
  std::vector<Triple> triples_;
};

struct AccuracySet {
  std::vector<PointCode> inputs;

  static absl::StatusOr<AccuracySet> Exhaustive(
      const Domain& input, std::uint64_t cap = kDefaultSetCap);
};

// True when x and x' differ in exactly one coordinate.
bool AreNeighbors(const Domain& domain, PointCode x, PointCode x_prime);

}  // namespace dpbound

#endif  // DPBOUND_SETS_H_
