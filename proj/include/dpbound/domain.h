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

#ifndef DPBOUND_DOMAIN_H_
#define DPBOUND_DOMAIN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace dpbound {

// A point of a finite product domain: one value per coordinate. Booleans are
// 0/1.
using Valuation = std::vector<std::uint64_t>;

// Dense index of a Valuation inside its Domain (mixed radix, coordinate 0 most
// significant, so code order is lexicographic order of valuations).
using PointCode = std::uint64_t;

// Finite product domain {0..r_0-1} x ... x {0..r_{m-1}-1}. Used for both the
// input space X^n and the output space Y of a mechanism.
class Domain {
 public:
  Domain() = default;

  // Fails if a radix is zero or the total size does not fit in 63 bits.
  static absl::StatusOr<Domain> Create(std::vector<std::uint64_t> radices);

  // {0,1}^n.
  static Domain Bits(int n);
  // {0..k}^n.
  static Domain Ints(int n, std::uint64_t k);
  // A single coordinate over {0..count-1}.
  static Domain Range(std::uint64_t count);

  int arity() const { return static_cast<int>(radices_.size()); }
  std::uint64_t size() const { return size_; }
  std::uint64_t radix(int coordinate) const { return radices_[coordinate]; }
  const std::vector<std::uint64_t>& radices() const { return radices_; }

  bool Contains(const Valuation& v) const;
  absl::StatusOr<PointCode> Encode(const Valuation& v) const;
  // Caller guarantees Contains(v).
  PointCode EncodeUnchecked(const Valuation& v) const;
  Valuation Decode(PointCode code) const;

  // All points differing from `code` in exactly one coordinate, ordered
  // coordinate-major then value-ascending.
  std::vector<PointCode> Neighbors(PointCode code) const;
  // Number of neighbors every point has.
  std::uint64_t NeighborCount() const;

  // "0110" when every radix is <= 10, otherwise "[3,12,0]".
  std::string Format(const Valuation& v) const;
  std::string FormatCode(PointCode code) const { return Format(Decode(code)); }
  // Inverse of Format.
  absl::StatusOr<Valuation> Parse(const std::string& text) const;

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.radices_ == b.radices_;
  }

 private:
  explicit Domain(std::vector<std::uint64_t> radices);

  std::vector<std::uint64_t> radices_;
  // weights_[i] = product of radices_[i+1..].
  std::vector<std::uint64_t> weights_;
  std::uint64_t size_ = 1;
};

// The number of nonzero coordinates of v; for bit vectors, count(v).
std::uint64_t CountOnes(const Valuation& v);

// 1^i 0^(n-i).
Valuation OnesThenZeros(int n, int ones);

}  // namespace dpbound

#endif  // DPBOUND_DOMAIN_H_
