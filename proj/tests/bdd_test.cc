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

#include "dpbound/bdd.h"

#include <cstdint>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace dpbound {
namespace {

using testing::Must;
using testing::Q;

std::vector<bool> Bits(std::uint32_t code, std::uint32_t n) {
  std::vector<bool> out(n);
  for (std::uint32_t i = 0; i < n; ++i) out[i] = (code >> i) & 1;
  return out;
}

// Builds the function with the given truth table (bit i of `table` is the
// value at assignment code i) as a sum of minterms.
Bdd FromTruthTable(BddManager& m, std::uint32_t n,
                   const std::vector<bool>& table) {
  Bdd f = m.False();
  for (std::uint32_t code = 0; code < table.size(); ++code) {
    if (!table[code]) continue;
    Bdd term = m.True();
    for (std::uint32_t v = 0; v < n; ++v) {
      Bdd lit = Must(m.Var(v));
      if (!((code >> v) & 1)) lit = Must(m.Not(lit));
      term = Must(m.Apply(BoolOp::kAnd, term, lit));
    }
    f = Must(m.Apply(BoolOp::kOr, f, term));
  }
  return f;
}

TEST(BddTest, ConstantsAndVariables) {
  BddManager m(3);
  EXPECT_TRUE(m.Const(true).is_true());
  EXPECT_TRUE(m.Const(false).is_false());
  const Bdd v = Must(m.Var(1));
  EXPECT_EQ(m.InternalNodeCount(std::vector<Bdd>{v}), 1u);
  EXPECT_EQ(m.NodeCount(m.True()), 1u);
  EXPECT_TRUE(Must(m.Restrict(v, {{1, true}})).is_true());
  EXPECT_TRUE(Must(m.Restrict(v, {{1, false}})).is_false());
  EXPECT_FALSE(m.Var(3).ok());
}

TEST(BddTest, BasicIdentities) {
  BddManager m(2);
  const Bdd a = Must(m.Var(0));
  const Bdd b = Must(m.Var(1));
  EXPECT_TRUE(Must(m.Apply(BoolOp::kAnd, a, Must(m.Not(a)))).is_false());
  EXPECT_TRUE(Must(m.Apply(BoolOp::kIff, a, a)).is_true());
  EXPECT_EQ(Must(m.Ite(a, m.True(), m.False())), a);
  // De Morgan collapses to the same node.
  const Bdd lhs = Must(m.Apply(BoolOp::kAnd, a, b));
  const Bdd rhs =
      Must(m.Not(Must(m.Apply(BoolOp::kOr, Must(m.Not(a)), Must(m.Not(b))))));
  EXPECT_EQ(lhs, rhs);
}

TEST(BddTest, CrossManagerOperandsAreRejected) {
  BddManager m1(2);
  BddManager m2(2);
  const Bdd a = Must(m1.Var(0));
  const Bdd b = Must(m2.Var(0));
  EXPECT_FALSE(m1.Apply(BoolOp::kAnd, a, b).ok());
}

TEST(BddTest, CanonicalOnRandomTruthTables) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint32_t n = 1 + trial % 8;
    BddManager m(n);
    std::vector<bool> table(1u << n);
    for (std::size_t i = 0; i < table.size(); ++i) table[i] = rng() & 1;
    const Bdd f = FromTruthTable(m, n, table);
    for (std::uint32_t code = 0; code < table.size(); ++code) {
      ASSERT_EQ(m.Evaluate(f, Bits(code, n)), table[code]);
    }
    // Building the same function another way gives the same node.
    const Bdd g = Must(m.Not(FromTruthTable(m, n, [&] {
      std::vector<bool> neg(table.size());
      for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = !table[i];
      return neg;
    }())));
    EXPECT_EQ(f, g);
    // Reduced: no node has equal children; ordered: children sit below.
    std::vector<Bdd> stack{f};
    while (!stack.empty()) {
      const Bdd x = stack.back();
      stack.pop_back();
      if (x.is_terminal()) continue;
      ASSERT_NE(m.Low(x), m.High(x));
      for (const Bdd c : {m.Low(x), m.High(x)}) {
        if (!c.is_terminal()) {
          ASSERT_GT(m.VarOf(c), m.VarOf(x));
        }
        stack.push_back(c);
      }
    }
  }
}

TEST(BddTest, WmcOfDisjunction) {
  BddManager m(2);
  const Bdd f = Must(m.Apply(BoolOp::kOr, Must(m.Var(0)), Must(m.Var(1))));
  WeightMap w(2);
  w.Set(0, Q("1/3"), Q("2/3"));
  w.Set(1, Q("3/4"), Q("1/4"));
  EXPECT_EQ(Must(m.Wmc(f, w)), Q("5/6"));
  EXPECT_EQ(Must(m.Wmc(m.True(), w)), Rational(1));
}

TEST(BddTest, WmcMatchesBruteForceAndComplementSums) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t n = 1 + trial % 12;
    BddManager m(n);
    std::vector<bool> table(1u << n);
    for (std::size_t i = 0; i < table.size(); ++i) table[i] = (rng() % 3) == 0;
    const Bdd f = FromTruthTable(m, n, table);
    WeightMap w(n);
    Rational total(1);
    for (std::uint32_t v = 0; v < n; ++v) {
      // Unnormalized on purpose so skipped levels must contribute pos + neg.
      Rational pos(1 + rng() % 5, 1 + rng() % 7);
      Rational neg(rng() % 5, 1 + rng() % 3);
      total *= pos + neg;
      w.Set(v, pos, neg);
    }
    Rational brute;
    for (std::uint32_t code = 0; code < table.size(); ++code) {
      if (!table[code]) continue;
      Rational term(1);
      for (std::uint32_t v = 0; v < n; ++v) {
        term *= ((code >> v) & 1) ? w.positive(v) : w.negative(v);
      }
      brute += term;
    }
    EXPECT_EQ(Must(m.Wmc(f, w)), brute);
    EXPECT_EQ(Must(m.Wmc(f, w)) + Must(m.Wmc(Must(m.Not(f)), w)), total);
  }
}

TEST(BddTest, RestrictEqualsCofactor) {
  std::mt19937_64 rng(3);
  const std::uint32_t n = 6;
  BddManager m(n);
  std::vector<bool> table(1u << n);
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = rng() & 1;
  const Bdd f = FromTruthTable(m, n, table);
  const PartialAssignment fix = {{1, true}, {4, false}};
  const Bdd r = Must(m.Restrict(f, fix));
  for (std::uint32_t code = 0; code < table.size(); ++code) {
    std::vector<bool> a = Bits(code, n);
    a[1] = true;
    a[4] = false;
    EXPECT_EQ(m.Evaluate(r, Bits(code, n)), m.Evaluate(f, a));
  }
  // Fixing every variable leaves a terminal.
  for (std::uint32_t code = 0; code < table.size(); ++code) {
    PartialAssignment full;
    for (std::uint32_t v = 0; v < n; ++v) full[v] = (code >> v) & 1;
    const Bdd t = Must(m.Restrict(f, full));
    ASSERT_TRUE(t.is_terminal());
    EXPECT_EQ(t.is_true(), static_cast<bool>(table[code]));
  }
}

TEST(BddTest, NodeBudgetIsAHardError) {
  BddOptions options;
  options.node_budget = 8;
  BddManager m(16, options);
  absl::StatusOr<Bdd> f = m.True();
  for (std::uint32_t v = 0; v < 16 && f.ok(); v += 2) {
    absl::StatusOr<Bdd> a = m.Var(v);
    if (!a.ok()) {
      f = a.status();
      break;
    }
    absl::StatusOr<Bdd> b = m.Var(v + 1);
    if (!b.ok()) {
      f = b.status();
      break;
    }
    absl::StatusOr<Bdd> x = m.Apply(BoolOp::kXor, *a, *b);
    if (!x.ok()) {
      f = x.status();
      break;
    }
    f = m.Apply(BoolOp::kAnd, *f, *x);
  }
  ASSERT_FALSE(f.ok());
  EXPECT_EQ(f.status().code(), absl::StatusCode::kResourceExhausted);
}

TEST(BddTest, ForkIsIndependent) {
  BddManager m(3);
  const Bdd a = Must(m.Var(0));
  BddManager copy = m.Fork();
  const Bdd a2 = copy.Adopt(a);
  const Bdd both = Must(copy.Apply(BoolOp::kAnd, a2, Must(copy.Var(2))));
  EXPECT_EQ(copy.InternalNodeCount(std::vector<Bdd>{both}), 2u);
  // The original neither sees the new node nor accepts the fork's handles.
  EXPECT_FALSE(m.Apply(BoolOp::kAnd, a, both).ok());
  EXPECT_LT(m.allocated_nodes(), copy.allocated_nodes());
}

TEST(BddTest, DotExportMentionsEveryVariable) {
  BddManager m(2);
  const Bdd f = Must(m.Apply(BoolOp::kXor, Must(m.Var(0)), Must(m.Var(1))));
  const std::string dot = m.ToDot(std::vector<Bdd>{f}, {"a", "b"});
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("\"a\""), std::string::npos) << dot;
  EXPECT_NE(dot.find("dashed"), std::string::npos);
}

}  // namespace
}  // namespace dpbound
