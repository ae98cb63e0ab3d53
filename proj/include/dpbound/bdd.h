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

// Hash-consed reduced ordered binary decision diagrams with exact weighted
// model counting.
//
// A BddManager owns every node. Variables are dense indices 0..num_vars-1 and
// the order is the index order, fixed when the manager is created. Nodes are
// never freed. A manager is single-owner: mutating calls (anything that may
// create nodes) must be serialized by the caller. Read-only calls (Wmc,
// NodeCount, Evaluate, the accessors) may run concurrently on a manager that
// is no longer being mutated.

#ifndef DPBOUND_BDD_H_
#define DPBOUND_BDD_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "dpbound/rational.h"

namespace dpbound {

using VarId = std::uint32_t;

// Manager-scoped node reference. Cheap to copy; meaningless outside the
// manager that produced it.
class Bdd {
 public:
  Bdd() = default;

  std::uint32_t node() const { return node_; }
  std::uint64_t manager_id() const { return manager_id_; }
  bool is_false() const { return node_ == 0; }
  bool is_true() const { return node_ == 1; }
  bool is_terminal() const { return node_ <= 1; }

  friend bool operator==(const Bdd& a, const Bdd& b) {
    return a.manager_id_ == b.manager_id_ && a.node_ == b.node_;
  }

 private:
  friend class BddManager;
  Bdd(std::uint64_t manager_id, std::uint32_t node)
      : manager_id_(manager_id), node_(node) {}

  std::uint64_t manager_id_ = 0;
  std::uint32_t node_ = 0;
};

enum class BoolOp { kAnd, kOr, kXor, kIff };

using PartialAssignment = std::map<VarId, bool>;

// Literal weights: for each variable, the weight of the positive and of the
// negative literal.
class WeightMap {
 public:
  WeightMap() = default;
  // Every literal weighted 1.
  explicit WeightMap(std::size_t num_vars)
      : positive_(num_vars, Rational(1)), negative_(num_vars, Rational(1)) {}

  std::size_t size() const { return positive_.size(); }
  void Set(VarId v, Rational positive, Rational negative);
  const Rational& positive(VarId v) const { return positive_[v]; }
  const Rational& negative(VarId v) const { return negative_[v]; }

  // Instantiates the assignment: the literal each assigned variable takes
  // gets weight 1 and its complement weight 0. WMC(restrict(f, a), w') with
  // w' = Condition(a) equals WMC(f | a) with unit indicator weights.
  WeightMap Condition(const PartialAssignment& assignment) const;

 private:
  std::vector<Rational> positive_;
  std::vector<Rational> negative_;
};

struct BddOptions {
  // Hard cap on allocated nodes (terminals included).
  std::size_t node_budget = 10'000'000;
};

class BddManager {
 public:
  explicit BddManager(std::uint32_t num_vars, BddOptions options = {});

  BddManager(const BddManager&) = delete;
  BddManager& operator=(const BddManager&) = delete;
  BddManager(BddManager&&) = default;
  BddManager& operator=(BddManager&&) = default;

  std::uint32_t num_vars() const { return num_vars_; }
  std::uint64_t id() const { return id_; }
  std::size_t allocated_nodes() const { return nodes_.size(); }

  Bdd True() const { return Bdd(id_, 1); }
  Bdd False() const { return Bdd(id_, 0); }
  Bdd Const(bool value) const { return value ? True() : False(); }

  absl::StatusOr<Bdd> Var(VarId v);
  absl::StatusOr<Bdd> Not(Bdd a);
  absl::StatusOr<Bdd> Apply(BoolOp op, Bdd a, Bdd b);
  absl::StatusOr<Bdd> Ite(Bdd cond, Bdd then_branch, Bdd else_branch);
  // Cofactor of `a` with respect to the (partial) assignment.
  absl::StatusOr<Bdd> Restrict(Bdd a, const PartialAssignment& assignment);

  // Sum over all total assignments to the manager's variables that satisfy
  // `a` of the product of literal weights. Variables skipped on a path
  // contribute (w_pos + w_neg).
  absl::StatusOr<Rational> Wmc(Bdd a, const WeightMap& weights) const;

  // Internal nodes reachable from the roots plus the distinct terminals
  // reached.
  std::size_t NodeCount(Bdd a) const;
  std::size_t NodeCount(std::span<const Bdd> roots) const;
  std::size_t InternalNodeCount(std::span<const Bdd> roots) const;

  // `assignment` holds one value per variable.
  bool Evaluate(Bdd a, const std::vector<bool>& assignment) const;

  // Graphviz rendering: solid edges are high (1) branches, dashed are low.
  std::string ToDot(std::span<const Bdd> roots,
                    const std::vector<std::string>& var_names = {}) const;

  // Structure accessors; `a` must be internal for Low/High.
  VarId VarOf(Bdd a) const { return nodes_[a.node()].var; }
  Bdd Low(Bdd a) const { return Bdd(id_, nodes_[a.node()].lo); }
  Bdd High(Bdd a) const { return Bdd(id_, nodes_[a.node()].hi); }
  // Level of a raw node index (num_vars for terminals).
  std::uint32_t LevelOf(std::uint32_t node) const { return nodes_[node].var; }
  std::uint32_t LowOf(std::uint32_t node) const { return nodes_[node].lo; }
  std::uint32_t HighOf(std::uint32_t node) const { return nodes_[node].hi; }

  // Copy of this manager under a fresh id; Adopt() re-tags handles from the
  // original so they can be used with the copy.
  BddManager Fork() const;
  Bdd Adopt(Bdd from_original) const { return Bdd(id_, from_original.node()); }

 private:
  struct Node {
    std::uint32_t var;
    std::uint32_t lo;
    std::uint32_t hi;
  };
  struct NodeKey {
    std::uint32_t var, lo, hi;
    friend bool operator==(const NodeKey&, const NodeKey&) = default;
    template <typename H>
    friend H AbslHashValue(H h, const NodeKey& k) {
      return H::combine(std::move(h), k.var, k.lo, k.hi);
    }
  };
  struct OpKey {
    std::uint32_t op, a, b, c;
    friend bool operator==(const OpKey&, const OpKey&) = default;
    template <typename H>
    friend H AbslHashValue(H h, const OpKey& k) {
      return H::combine(std::move(h), k.op, k.a, k.b, k.c);
    }
  };

  BddManager(const BddManager& other, std::uint64_t new_id);

  absl::Status CheckOwned(Bdd a) const;
  absl::StatusOr<std::uint32_t> MakeNode(std::uint32_t var, std::uint32_t lo,
                                         std::uint32_t hi);
  absl::StatusOr<std::uint32_t> NotRec(std::uint32_t a);
  absl::StatusOr<std::uint32_t> ApplyRec(BoolOp op, std::uint32_t a,
                                         std::uint32_t b);
  absl::StatusOr<std::uint32_t> IteRec(std::uint32_t c, std::uint32_t t,
                                       std::uint32_t e);
  void Collect(std::span<const Bdd> roots,
               std::vector<std::uint32_t>* out) const;

  std::uint32_t num_vars_;
  BddOptions options_;
  std::uint64_t id_;
  std::vector<Node> nodes_;
  absl::flat_hash_map<NodeKey, std::uint32_t> unique_;
  absl::flat_hash_map<OpKey, std::uint32_t> cache_;
};

}  // namespace dpbound

#endif  // DPBOUND_BDD_H_
