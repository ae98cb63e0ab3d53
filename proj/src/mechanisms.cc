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

#include "dpbound/mechanisms.h"

#include <algorithm>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "dpbound/status_macros.h"

namespace dpbound {

namespace {

// Client inputs are named x1..xn.
std::string Client(int i) { return absl::StrCat("x", i + 1); }

absl::Status CheckUnit(const Rational& p, absl::string_view what) {
  if (p < Rational(0) || p > Rational(1)) {
    return absl::InvalidArgumentError(
        absl::StrCat(what, " must lie in [0, 1], got ", p.ToString()));
  }
  return absl::OkStatus();
}

absl::Status CheckOpenUnit(const Rational& p, absl::string_view what) {
  if (p <= Rational(0) || p >= Rational(1)) {
    return absl::InvalidArgumentError(
        absl::StrCat(what, " must lie in (0, 1), got ", p.ToString()));
  }
  return absl::OkStatus();
}

absl::Status CheckClients(int n) {
  if (n < 1) return absl::InvalidArgumentError("n must be at least 1");
  if (n > 62) return absl::InvalidArgumentError("n must be at most 62");
  return absl::OkStatus();
}

// if flip lambda { !x } else { x }
ExprPtr NoisyBit(const std::string& x, const Rational& lambda) {
  return Ite(Flip(lambda), Not(Var(x)), Var(x));
}

std::vector<Param> BoolParams(int n) {
  std::vector<Param> params;
  for (int i = 0; i < n; ++i) params.push_back({Client(i), Type::Bool()});
  return params;
}

ExprPtr ClampTo(ExprPtr value, std::uint64_t k, int width) {
  return Ite(IntGe(value, IntConst(k, width)), IntConst(k, width), value);
}

// Shared identifiers would make ClampTo evaluate `value` twice, so bind it.
ExprPtr LetClamp(const std::string& name, ExprPtr value, std::uint64_t k,
                 int width) {
  return Let(name, std::move(value), ClampTo(Var(name), k, width));
}

absl::StatusOr<Mechanism> Finish(std::string name, MechanismParams params,
                                 Program program, Domain input, Domain output) {
  ASSIGN_OR_RETURN(ValidatedProgram validated, Validate(program));
  Mechanism m;
  m.name = std::move(name);
  m.params = std::move(params);
  m.program = std::move(validated);
  m.input_domain = std::move(input);
  m.output_domain = std::move(output);
  return m;
}

}  // namespace

absl::StatusOr<std::vector<PointCode>> Mechanism::Neighbors(PointCode x) const {
  if (x >= input_domain.size()) {
    return absl::OutOfRangeError(
        absl::StrCat("input code ", x, " outside the input domain"));
  }
  return input_domain.Neighbors(x);
}

absl::StatusOr<Mechanism> Rr(int n, const Rational& lambda) {
  RETURN_IF_ERROR(CheckClients(n));
  RETURN_IF_ERROR(CheckUnit(lambda, "lambda"));
  std::vector<ExprPtr> bits;
  for (int i = 0; i < n; ++i) bits.push_back(NoisyBit(Client(i), lambda));
  Program program;
  program.params = BoolParams(n);
  program.body = n == 1 ? bits[0] : Tuple(std::move(bits));
  program.output_type =
      n == 1 ? Type::Bool() : Type::Tuple(std::vector<Type>(n, Type::Bool()));
  MechanismParams params;
  params.n = n;
  params.lambda = lambda;
  return Finish("rr", std::move(params), std::move(program), Domain::Bits(n),
                Domain::Bits(n));
}

absl::StatusOr<Mechanism> Rrcount(int n, const Rational& lambda) {
  RETURN_IF_ERROR(CheckClients(n));
  RETURN_IF_ERROR(CheckUnit(lambda, "lambda"));
  const int w = WidthFor(n);
  ExprPtr sum;
  for (int i = 0; i < n; ++i) {
    ExprPtr term =
        Ite(Var(absl::StrCat("y", i + 1)), IntConst(1, w), IntConst(0, w));
    sum = sum ? IntAdd(sum, term) : term;
  }
  ExprPtr body = sum;
  for (int i = n - 1; i >= 0; --i) {
    body = Let(absl::StrCat("y", i + 1), NoisyBit(Client(i), lambda), body);
  }
  Program program;
  program.params = BoolParams(n);
  program.body = body;
  program.output_type = Type::Int(w);
  MechanismParams params;
  params.n = n;
  params.lambda = lambda;
  ASSIGN_OR_RETURN(Mechanism m,
                   Finish("rrcount", std::move(params), std::move(program),
                          Domain::Bits(n), Domain::Range(n + 1)));
  m.targets = [](const Valuation& x) { return CountOnes(x); };
  return m;
}

absl::StatusOr<std::vector<std::pair<std::uint64_t, Rational>>>
TruncatedGeometric(const Rational& lambda, std::uint64_t k) {
  RETURN_IF_ERROR(CheckOpenUnit(lambda, "lambda"));
  std::vector<std::pair<std::uint64_t, Rational>> out;
  Rational power(1);
  for (std::uint64_t z = 0; z < k; ++z) {
    out.emplace_back(z, (Rational(1) - lambda) * power);
    power *= lambda;
  }
  out.emplace_back(k, power);
  return out;
}

absl::StatusOr<Mechanism> AboveThreshold(int n, std::uint64_t k,
                                         std::uint64_t threshold,
                                         const Rational& lambda1,
                                         const Rational& lambda2) {
  RETURN_IF_ERROR(CheckClients(n));
  if (k < 1) return absl::InvalidArgumentError("k must be at least 1");
  if (k > 1024) return absl::InvalidArgumentError("k must be at most 1024");
  if (threshold > k) {
    return absl::InvalidArgumentError(
        absl::StrCat("threshold ", threshold, " exceeds k = ", k));
  }
  RETURN_IF_ERROR(CheckOpenUnit(lambda1, "lambda1"));
  RETURN_IF_ERROR(CheckOpenUnit(lambda2, "lambda2"));
  ASSIGN_OR_RETURN(auto g1, TruncatedGeometric(lambda1, k));
  ASSIGN_OR_RETURN(auto g2, TruncatedGeometric(lambda2, k));
  std::vector<Rational> w1, w2;
  for (auto& [z, p] : g1) w1.push_back(p);
  for (auto& [z, p] : g2) w2.push_back(p);

  // Values stay within {0..k}: sums saturate at 2^w - 1 >= k and are then
  // clamped to k.
  const int w = WidthFor(k);
  const int wo = WidthFor(n);
  ExprPtr chain = IntConst(0, wo);
  for (int i = n - 1; i >= 0; --i) {
    ExprPtr noisy = LetClamp(absl::StrCat("s", i + 1),
                             IntAdd(Var(Client(i)), Categorical(w2, w)), k, w);
    chain = Ite(IntGe(noisy, Var("t")), IntConst(i + 1, wo), chain);
  }
  ExprPtr body = Let(
      "t",
      LetClamp("t0", IntAdd(IntConst(threshold, w), Categorical(w1, w)), k, w),
      chain);

  Program program;
  for (int i = 0; i < n; ++i)
    program.params.push_back({Client(i), Type::Int(w)});
  program.body = body;
  program.output_type = Type::Int(wo);
  ASSIGN_OR_RETURN(Domain output, Domain::Create({std::uint64_t(n) + 1}));
  ASSIGN_OR_RETURN(Domain input,
                   Domain::Create(std::vector<std::uint64_t>(n, k + 1)));
  MechanismParams params;
  params.n = n;
  params.k = k;
  params.threshold = threshold;
  params.lambda1 = lambda1;
  params.lambda2 = lambda2;
  return Finish("above", std::move(params), std::move(program),
                std::move(input), std::move(output));
}

absl::StatusOr<Mechanism> FromProgram(ValidatedProgram program) {
  auto radices = [](const std::vector<Type>& leaves)
      -> absl::StatusOr<std::vector<std::uint64_t>> {
    std::vector<std::uint64_t> out;
    for (const Type& leaf : leaves) {
      if (leaf.is_int() && leaf.width() > 62) {
        return absl::InvalidArgumentError("integer too wide for a domain");
      }
      out.push_back(leaf.is_bool() ? 2 : std::uint64_t{1} << leaf.width());
    }
    return out;
  };
  std::vector<Type> inputs;
  for (const Param& p : program.program.params) {
    for (const Type& leaf : p.type.Leaves()) inputs.push_back(leaf);
  }
  ASSIGN_OR_RETURN(auto in_radices, radices(inputs));
  ASSIGN_OR_RETURN(auto out_radices, radices(program.output_type().Leaves()));
  ASSIGN_OR_RETURN(Domain input, Domain::Create(std::move(in_radices)));
  ASSIGN_OR_RETURN(Domain output, Domain::Create(std::move(out_radices)));
  Mechanism m;
  m.name = "program";
  m.params.n = static_cast<int>(inputs.size());
  m.program = std::move(program);
  m.input_domain = std::move(input);
  m.output_domain = std::move(output);
  return m;
}

absl::StatusOr<RrSets> RrSymmetrySets(int n) {
  RETURN_IF_ERROR(CheckClients(n));
  const Domain bits = Domain::Bits(n);
  RrSets sets{InferenceSet(bits, bits), PrivacySet::Explicit(bits, bits)};
  const PointCode zero = bits.EncodeUnchecked(OnesThenZeros(n, 0));
  auto prefix = [&](int i) {
    return bits.EncodeUnchecked(OnesThenZeros(n, i));
  };
  for (int i = 0; i <= n; ++i) {
    RETURN_IF_ERROR(sets.inference.Add(prefix(i), zero));
  }
  for (int i = 0; i < n; ++i) {
    RETURN_IF_ERROR(sets.privacy.Add({prefix(i), prefix(i + 1), zero}));
  }
  for (int i = 1; i <= n; ++i) {
    RETURN_IF_ERROR(sets.privacy.Add({prefix(i), prefix(i - 1), zero}));
  }
  // Bit codes compose under xor coordinate-wise.
  sets.inference.set_canonicalizer(
      [](const IoPair& p) { return IoPair{0, p.x ^ p.y}; });
  return sets;
}

absl::StatusOr<RrcountSets> RrcountSymmetrySets(int n, std::uint64_t alpha) {
  RETURN_IF_ERROR(CheckClients(n));
  const Domain bits = Domain::Bits(n);
  RrcountSets sets{InferenceSet(bits, Domain::Range(n + 1)), AccuracySet{}};
  for (int i = 0; i <= n; ++i) {
    const PointCode x = bits.EncodeUnchecked(OnesThenZeros(n, i));
    sets.accuracy.inputs.push_back(x);
    const std::uint64_t lo = alpha >= std::uint64_t(i) ? 0 : i - alpha;
    const std::uint64_t hi =
        alpha >= std::uint64_t(n) ? n : std::min<std::uint64_t>(n, i + alpha);
    for (std::uint64_t j = lo; j <= hi; ++j) {
      RETURN_IF_ERROR(sets.inference.Add(x, j));
    }
  }
  return sets;
}

}  // namespace dpbound
