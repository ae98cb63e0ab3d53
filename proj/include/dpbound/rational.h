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

#ifndef DPBOUND_RATIONAL_H_
#define DPBOUND_RATIONAL_H_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace dpbound {

// Exact arbitrary-precision rational number. Always kept in canonical form
// (positive denominator, numerator and denominator coprime), so equality is
// structural.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value);  // NOLINT: implicit by design of numerics
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(mpq_class value);

  // Accepts "p/q", an integer "p", or a finite decimal such as "0.25". The
  // decimal form is converted exactly (0.2 == 1/5).
  static absl::StatusOr<Rational> FromString(absl::string_view text);

  // Canonical "num/den" form; the denominator is always printed ("4/1").
  std::string ToString() const;
  // Correctly rounded (round-to-nearest) conversion.
  double ToDouble() const;

  std::string NumeratorString() const;
  std::string DenominatorString() const;

  bool IsZero() const { return sgn(value_) == 0; }
  int Sign() const { return sgn(value_); }

  const mpq_class& raw() const { return value_; }

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  // *this += a * b without a named temporary at the call site.
  Rational& AddProduct(const Rational& a, const Rational& b);
  // Division by zero is a precondition violation.
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.value_, b.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

  template <typename H>
  friend H AbslHashValue(H h, const Rational& r) {
    return H::combine(std::move(h), r.HashBits());
  }

  // Returns a^e for e >= 0.
  static Rational Pow(const Rational& a, unsigned e);

 private:
  std::size_t HashBits() const;

  mpq_class value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Compares num_a/den_a against the rational `p` without forming the quotient.
// Both den_a and the denominator implied by p must be positive; num_a >= 0.
// Returns <0, 0, >0 like a three-way comparison of (num_a / den_a) vs p.
int CompareQuotient(const Rational& num_a, const Rational& den_a,
                    const Rational& p);

}  // namespace dpbound

#endif  // DPBOUND_RATIONAL_H_
