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

#include "dpbound/domain.h"

#include <algorithm>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"

namespace dpbound {

namespace {
constexpr std::uint64_t kMaxDomainSize = std::uint64_t{1} << 62;
}  // namespace

Domain::Domain(std::vector<std::uint64_t> radices)
    : radices_(std::move(radices)), weights_(radices_.size(), 1) {
  for (int i = static_cast<int>(radices_.size()) - 2; i >= 0; --i) {
    weights_[i] = weights_[i + 1] * radices_[i + 1];
  }
  size_ = 1;
  for (auto r : radices_) size_ *= r;
}

absl::StatusOr<Domain> Domain::Create(std::vector<std::uint64_t> radices) {
  std::uint64_t size = 1;
  for (auto r : radices) {
    if (r == 0) return absl::InvalidArgumentError("domain radix must be > 0");
    if (size > kMaxDomainSize / r) {
      return absl::ResourceExhaustedError(
          "domain too large to index with 64-bit codes");
    }
    size *= r;
  }
  return Domain(std::move(radices));
}

Domain Domain::Bits(int n) { return Domain(std::vector<std::uint64_t>(n, 2)); }

Domain Domain::Ints(int n, std::uint64_t k) {
  return Domain(std::vector<std::uint64_t>(n, k + 1));
}

Domain Domain::Range(std::uint64_t count) { return Domain({count}); }

bool Domain::Contains(const Valuation& v) const {
  if (v.size() != radices_.size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= radices_[i]) return false;
  }
  return true;
}

absl::StatusOr<PointCode> Domain::Encode(const Valuation& v) const {
  if (!Contains(v)) {
    return absl::OutOfRangeError(
        absl::StrCat("point ", Format(v), " is outside the domain"));
  }
  return EncodeUnchecked(v);
}

PointCode Domain::EncodeUnchecked(const Valuation& v) const {
  PointCode code = 0;
  for (std::size_t i = 0; i < v.size(); ++i) code += v[i] * weights_[i];
  return code;
}

Valuation Domain::Decode(PointCode code) const {
  Valuation v(radices_.size());
  for (std::size_t i = 0; i < radices_.size(); ++i) {
    v[i] = code / weights_[i];
    code %= weights_[i];
  }
  return v;
}

std::vector<PointCode> Domain::Neighbors(PointCode code) const {
  std::vector<PointCode> out;
  out.reserve(NeighborCount());
  for (std::size_t i = 0; i < radices_.size(); ++i) {
    const std::uint64_t current = (code / weights_[i]) % radices_[i];
    const PointCode base = code - current * weights_[i];
    for (std::uint64_t value = 0; value < radices_[i]; ++value) {
      if (value != current) out.push_back(base + value * weights_[i]);
    }
  }
  return out;
}

std::uint64_t Domain::NeighborCount() const {
  std::uint64_t total = 0;
  for (auto r : radices_) total += r - 1;
  return total;
}

std::string Domain::Format(const Valuation& v) const {
  const bool compact =
      std::all_of(radices_.begin(), radices_.end(),
                  [](std::uint64_t r) { return r <= 10; }) &&
      std::all_of(v.begin(), v.end(), [](std::uint64_t x) { return x < 10; });
  if (compact && !v.empty()) return absl::StrJoin(v, "");
  return absl::StrCat("[", absl::StrJoin(v, ","), "]");
}

absl::StatusOr<Valuation> Domain::Parse(const std::string& text) const {
  Valuation v;
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') {
      return absl::InvalidArgumentError(absl::StrCat("bad point '", text, "'"));
    }
    const std::string body = text.substr(1, text.size() - 2);
    if (!body.empty()) {
      for (absl::string_view part : absl::StrSplit(body, ',')) {
        std::uint64_t value;
        if (!absl::SimpleAtoi(part, &value)) {
          return absl::InvalidArgumentError(
              absl::StrCat("bad coordinate '", part, "' in '", text, "'"));
        }
        v.push_back(value);
      }
    }
  } else {
    for (char c : text) {
      if (c < '0' || c > '9') {
        return absl::InvalidArgumentError(
            absl::StrCat("bad point '", text, "'"));
      }
      v.push_back(static_cast<std::uint64_t>(c - '0'));
    }
  }
  if (!Contains(v)) {
    return absl::OutOfRangeError(
        absl::StrCat("point '", text, "' is outside the domain"));
  }
  return v;
}

std::uint64_t CountOnes(const Valuation& v) {
  return static_cast<std::uint64_t>(std::count_if(
      v.begin(), v.end(), [](std::uint64_t x) { return x != 0; }));
}

Valuation OnesThenZeros(int n, int ones) {
  Valuation v(n, 0);
  for (int i = 0; i < ones && i < n; ++i) v[i] = 1;
  return v;
}

}  // namespace dpbound
