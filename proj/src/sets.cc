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

#include "dpbound/sets.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "dpbound/status_macros.h"

namespace dpbound {

namespace {

absl::Status CheckCap(std::uint64_t size, std::uint64_t cap,
                      absl::string_view what) {
  if (size > cap) {
    return absl::ResourceExhaustedError(absl::StrCat(
        what, " would hold ", size, " elements; the cap is ", cap));
  }
  return absl::OkStatus();
}

// |a| * |b| with overflow saturating at UINT64_MAX.
std::uint64_t SatMul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) return ~std::uint64_t{0};
  return r;
}

}  // namespace

bool AreNeighbors(const Domain& domain, PointCode x, PointCode x_prime) {
  if (x >= domain.size() || x_prime >= domain.size()) return false;
  const Valuation a = domain.Decode(x);
  const Valuation b = domain.Decode(x_prime);
  int differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += a[i] != b[i];
  return differ == 1;
}

absl::StatusOr<InferenceSet> InferenceSet::Exhaustive(const Domain& input,
                                                      const Domain& output,
                                                      std::uint64_t cap) {
  RETURN_IF_ERROR(CheckCap(SatMul(input.size(), output.size()), cap,
                           "exhaustive inference set"));
  InferenceSet set(input, output);
  set.pairs_.reserve(input.size() * output.size());
  for (PointCode x = 0; x < input.size(); ++x) {
    for (PointCode y = 0; y < output.size(); ++y) set.pairs_.push_back({x, y});
  }
  set.exhaustive_ = true;
  return set;
}

absl::Status InferenceSet::Add(PointCode x, PointCode y) {
  if (x >= input_.size() || y >= output_.size()) {
    return absl::OutOfRangeError(
        absl::StrCat("pair (", x, ", ", y, ") outside the domains"));
  }
  if (exhaustive_) return absl::OkStatus();
  if (index_.insert({x, y}).second) pairs_.push_back({x, y});
  return absl::OkStatus();
}

bool InferenceSet::Contains(PointCode x, PointCode y) const {
  if (exhaustive_) return x < input_.size() && y < output_.size();
  return index_.contains(IoPair{x, y});
}

PrivacySet PrivacySet::Explicit(Domain input, Domain output) {
  return PrivacySet(std::move(input), std::move(output), false);
}

PrivacySet PrivacySet::Exhaustive(Domain input, Domain output) {
  return PrivacySet(std::move(input), std::move(output), true);
}

absl::Status PrivacySet::Add(const Triple& t) {
  if (exhaustive_) {
    return absl::FailedPreconditionError(
        "cannot add to an exhaustive privacy set");
  }
  if (t.y >= output_.size()) {
    return absl::OutOfRangeError(absl::StrCat("output ", t.y, " outside Y"));
  }
  if (!AreNeighbors(input_, t.x, t.x_prime)) {
    return absl::InvalidArgumentError(
        absl::StrCat(input_.FormatCode(t.x), " and ",
                     input_.FormatCode(t.x_prime), " are not neighbors"));
  }
  triples_.push_back(t);
  return absl::OkStatus();
}

std::uint64_t PrivacySet::size() const {
  if (!exhaustive_) return triples_.size();
  return SatMul(SatMul(input_.size(), input_.NeighborCount()), output_.size());
}

absl::Status PrivacySet::ForEach(
    const std::function<absl::Status(const Triple&)>& fn) const {
  if (!exhaustive_) {
    for (const Triple& t : triples_) RETURN_IF_ERROR(fn(t));
    return absl::OkStatus();
  }
  for (PointCode x = 0; x < input_.size(); ++x) {
    for (PointCode xp : input_.Neighbors(x)) {
      for (PointCode y = 0; y < output_.size(); ++y) {
        RETURN_IF_ERROR(fn(Triple{x, xp, y}));
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<Triple>> PrivacySet::Materialize(
    std::uint64_t cap) const {
  RETURN_IF_ERROR(CheckCap(size(), cap, "privacy set"));
  if (!exhaustive_) return triples_;
  std::vector<Triple> out;
  out.reserve(size());
  RETURN_IF_ERROR(ForEach([&](const Triple& t) {
    out.push_back(t);
    return absl::OkStatus();
  }));
  return out;
}

absl::StatusOr<AccuracySet> AccuracySet::Exhaustive(const Domain& input,
                                                    std::uint64_t cap) {
  RETURN_IF_ERROR(CheckCap(input.size(), cap, "exhaustive accuracy set"));
  AccuracySet set;
  set.inputs.reserve(input.size());
  for (PointCode x = 0; x < input.size(); ++x) set.inputs.push_back(x);
  return set;
}

}  // namespace dpbound
