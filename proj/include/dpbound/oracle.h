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

// Brute-force ground truth. Enumerates every assignment of the program's
// coins, evaluates the program concretely under each and adds up the weights
// per outcome. Shares only the AST with the compiler; no diagrams are built.

#ifndef DPBOUND_ORACLE_H_
#define DPBOUND_ORACLE_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "dpbound/compiler.h"
#include "dpbound/mechanisms.h"
#include "dpbound/prob_lang.h"
#include "dpbound/rational.h"
#include "dpbound/synthesis.h"

namespace dpbound {

struct OracleOptions {
  int coin_cap = 20;
  // Largest input domain the exhaustive bounds will walk.
  std::uint64_t input_cap = std::uint64_t{1} << 16;
};

// Coins in static program order. A categorical over k outcomes contributes
// k - 1 chain coins.
struct CoinProfile {
  struct Coin {
    int id;
    Rational bias;
  };
  std::vector<Coin> coins;
};

CoinProfile ProfileCoins(const Program& program);

// Exact output distribution of x, nonzero masses only, sorted by output.
absl::StatusOr<Distribution> EnumerateDistribution(
    const ValidatedProgram& program, const Valuation& x,
    const OracleOptions& options = {});

// Exhaustive max likelihood ratio over all neighbor triples, first strict
// maximizer in (x, x', y) order.
absl::StatusOr<PrivacyReport> OraclePrivacyBound(
    const Mechanism& mech, const OracleOptions& options = {});

// Exhaustive min interval mass.
absl::StatusOr<AccuracyReport> OracleAccuracyBound(
    const Mechanism& mech, std::uint64_t alpha,
    const OracleOptions& options = {});

// Interval mass of every input, indexed by input code.
absl::StatusOr<std::vector<Rational>> OracleIntervalMasses(
    const Mechanism& mech, std::uint64_t alpha,
    const OracleOptions& options = {});

}  // namespace dpbound

#endif  // DPBOUND_ORACLE_H_
