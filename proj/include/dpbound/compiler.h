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

// Compilation of validated programs to weighted Boolean formulas.
//
// A compiled model holds one BDD per output bit over input and coin
// variables, plus the literal weights (inputs 1/1, a coin with bias p gets
// p / 1-p). Pr[A(x) = y] is the weighted model count of the output diagrams
// conditioned on x and agreeing with y.
//
// Variable order: a pre-order walk of the body. At each node, parameters that
// appear as direct operands are placed first (all bits of the parameter, most
// significant bit first), then the walk descends; each flip places one coin,
// each categorical its whole coin chain. Unreferenced parameters go last.
// For randomized response this yields x1, t1, x2, t2, ...

#ifndef DPBOUND_COMPILER_H_
#define DPBOUND_COMPILER_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpbound/bdd.h"
#include "dpbound/domain.h"
#include "dpbound/prob_lang.h"
#include "dpbound/rational.h"

namespace dpbound {

struct CompileOptions {
  std::size_t node_budget = 10'000'000;
};

struct CoinVar {
  VarId var;
  Rational bias;
};

struct CompileStats {
  std::uint32_t num_vars = 0;
  std::uint32_t input_vars = 0;
  std::uint32_t coin_vars = 0;
  // Shared node count of all output diagrams (internal + terminals).
  std::size_t node_count = 0;
  std::size_t allocated_nodes = 0;
  double compile_seconds = 0;
};

// Output distribution of one input, nonzero masses only, sorted by output.
using Distribution = std::vector<std::pair<Valuation, Rational>>;

class CompiledModel {
 public:
  CompiledModel(CompiledModel&&) = default;
  CompiledModel& operator=(CompiledModel&&) = default;

  // Flattened bool/int leaves of the parameter list and of the output type.
  const std::vector<Type>& input_leaves() const { return input_leaves_; }
  const std::vector<Type>& output_leaves() const { return output_leaves_; }
  // Per input leaf, its variables least significant bit first.
  const std::vector<std::vector<VarId>>& input_vars() const {
    return input_vars_;
  }
  const std::vector<CoinVar>& coin_vars() const { return coin_vars_; }
  // One diagram per output bit: leaves in order, each least significant bit
  // first. Empty for relational models.
  const std::vector<Bdd>& output_bdds() const { return output_bdds_; }
  const WeightMap& weights() const { return weights_; }
  const BddManager& manager() const { return manager_; }
  // Variable names in order ("x1", "x2[0]", "c3", ...).
  const std::vector<std::string>& var_names() const { return var_names_; }
  const CompileStats& stats() const { return stats_; }

  // True for models given as a relation phi(x, coins, y) rather than as
  // output functions.
  bool relational() const { return relational_; }

  // Exact Pr[A(x) = y]. Read-only and safe to call concurrently.
  absl::StatusOr<Rational> ProbOf(const Valuation& x, const Valuation& y) const;

  // Whole output distribution of x in one pass over the diagrams. Read-only.
  absl::StatusOr<Distribution> JointDistribution(const Valuation& x) const;

  // Pr[A(x) = y] via explicit restriction: cofactor every output diagram by
  // x, conjoin the per-bit equivalences with y, count. Works on a private
  // copy of the manager, so it is slow but independent of ProbOf.
  absl::StatusOr<Rational> ProbOfMaterialized(const Valuation& x,
                                              const Valuation& y) const;

  // Shared node count of the output diagrams (or phi) after conditioning on
  // x. Randomized response over n clients gives n + 2.
  absl::StatusOr<std::size_t> ConditionedNodeCount(const Valuation& x) const;

  // Unconditioned shared node count.
  std::size_t NodeCount() const;

  std::string ToDot() const;

 private:
  friend class ModelBuilder;
  friend absl::StatusOr<CompiledModel> ManualRrWbf(int n,
                                                   const Rational& lambda);
  explicit CompiledModel(BddManager manager) : manager_(std::move(manager)) {}

  absl::Status CheckInput(const Valuation& x) const;
  absl::Status CheckOutput(const Valuation& y) const;
  // Per variable: 0/1 when fixed by x, -1 otherwise.
  std::vector<std::int8_t> FixInputs(const Valuation& x) const;
  PartialAssignment InputAssignment(const Valuation& x) const;
  Valuation UnpackOutput(std::uint64_t packed) const;
  std::uint64_t PackOutput(const Valuation& y) const;

  BddManager manager_;
  std::vector<Type> input_leaves_;
  std::vector<Type> output_leaves_;
  std::vector<std::vector<VarId>> input_vars_;
  std::vector<CoinVar> coin_vars_;
  std::vector<Bdd> output_bdds_;
  WeightMap weights_;
  std::vector<std::string> var_names_;
  CompileStats stats_;

  bool relational_ = false;
  Bdd phi_;
  // Relational models: per output leaf, its variables LSB first.
  std::vector<std::vector<VarId>> output_vars_;
};

absl::StatusOr<CompiledModel> Compile(const ValidatedProgram& program,
                                      const CompileOptions& options = {});

// The hand-written randomized-response formula
//   phi = AND_i  y_i <-> ((!t_i && x_i) || (t_i && !x_i))
// with w(t_i) = lambda, ordered x_i, t_i, y_i per client. Query-equivalent to
// compiling the randomized-response program.
absl::StatusOr<CompiledModel> ManualRrWbf(int n, const Rational& lambda);

// Number of bits a leaf occupies.
int LeafBits(const Type& leaf);

}  // namespace dpbound

#endif  // DPBOUND_COMPILER_H_
