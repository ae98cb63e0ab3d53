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

#include "dpbound/rational.h"

#include <mpfr.h>

#include <cassert>
#include <cctype>
#include <functional>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace dpbound {

namespace {

bool AllDigits(absl::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

absl::StatusOr<mpz_class> ParseInteger(absl::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!AllDigits(s)) {
    return absl::InvalidArgumentError(
        absl::StrCat("not an integer: '", s, "'"));
  }
  mpz_class z(std::string(s), 10);
  if (negative) z = -z;
  return z;
}

}  // namespace

Rational::Rational(std::int64_t value) {
  mpz_class num;
  // mpz has no int64 setter on every platform; go through two halves.
  const bool negative = value < 0;
  const std::uint64_t mag = negative ? ~static_cast<std::uint64_t>(value) + 1
                                     : static_cast<std::uint64_t>(value);
  num = static_cast<unsigned long>(mag >> 32);
  num <<= 32;
  num += static_cast<unsigned long>(mag & 0xffffffffu);
  if (negative) num = -num;
  value_ = mpq_class(num);
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  assert(den != 0);
  value_ = Rational(num).value_ / Rational(den).value_;
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
  value_.canonicalize();
}

absl::StatusOr<Rational> Rational::FromString(absl::string_view text) {
  while (!text.empty() &&
         std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) return absl::InvalidArgumentError("empty rational");

  if (auto slash = text.find('/'); slash != absl::string_view::npos) {
    auto num = ParseInteger(text.substr(0, slash));
    if (!num.ok()) return num.status();
    auto den = ParseInteger(text.substr(slash + 1));
    if (!den.ok()) return den.status();
    if (sgn(*den) == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("zero denominator in '", text, "'"));
    }
    return Rational(mpq_class(*num, *den));
  }

  if (auto dot = text.find('.'); dot != absl::string_view::npos) {
    absl::string_view whole = text.substr(0, dot);
    absl::string_view frac = text.substr(dot + 1);
    bool negative = false;
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
      negative = whole.front() == '-';
      whole.remove_prefix(1);
    }
    if ((!whole.empty() && !AllDigits(whole)) || !AllDigits(frac)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a decimal: '", text, "'"));
    }
    mpz_class digits(
        std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpq_class q(digits, scale);
    q.canonicalize();
    if (negative) q = -q;
    return Rational(q);
  }

  auto num = ParseInteger(text);
  if (!num.ok()) return num.status();
  return Rational(mpq_class(*num));
}

std::string Rational::ToString() const {
  return absl::StrCat(NumeratorString(), "/", DenominatorString());
}

std::string Rational::NumeratorString() const {
  return value_.get_num().get_str(10);
}

std::string Rational::DenominatorString() const {
  return value_.get_den().get_str(10);
}

double Rational::ToDouble() const {
  mpfr_t f;
  mpfr_init2(f, 53);
  mpfr_set_q(f, value_.get_mpq_t(), MPFR_RNDN);
  const double d = mpfr_get_d(f, MPFR_RNDN);
  mpfr_clear(f);
  return d;
}

Rational& Rational::operator+=(const Rational& o) {
  value_ += o.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  value_ -= o.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  value_ *= o.value_;
  return *this;
}

Rational& Rational::AddProduct(const Rational& a, const Rational& b) {
  thread_local mpq_class tmp;
  mpq_mul(tmp.get_mpq_t(), a.value_.get_mpq_t(), b.value_.get_mpq_t());
  value_ += tmp;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  assert(!o.IsZero());
  value_ /= o.value_;
  return *this;
}

Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

Rational Rational::Pow(const Rational& a, unsigned e) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), a.value_.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), a.value_.get_den_mpz_t(), e);
  return Rational(mpq_class(num, den));
}

std::size_t Rational::HashBits() const {
  const std::size_t n = mpz_get_ui(value_.get_num_mpz_t());
  const std::size_t d = mpz_get_ui(value_.get_den_mpz_t());
  const std::size_t s = static_cast<std::size_t>(sgn(value_) + 1);
  return n * 0x9e3779b97f4a7c15ull ^ (d + 0x632be59bd9b4e019ull + (s << 7));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.ToString();
}

int CompareQuotient(const Rational& num_a, const Rational& den_a,
                    const Rational& p) {
  // (an/ad) / (bn/bd) ? pn/pd  <=>  an*bd*pd ? pn*bn*ad, all denominators > 0
  // and bn > 0.
  const mpq_class& a = num_a.raw();
  const mpq_class& b = den_a.raw();
  const mpq_class& q = p.raw();
  mpz_class lhs = a.get_num() * b.get_den();
  lhs *= q.get_den();
  mpz_class rhs = q.get_num() * b.get_num();
  rhs *= a.get_den();
  return cmp(lhs, rhs);
}

}  // namespace dpbound
