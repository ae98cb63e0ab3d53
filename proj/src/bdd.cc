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

#include <algorithm>
#include <atomic>
#include <optional>
#include <utility>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpbound/status_macros.h"

namespace dpbound {

namespace {

constexpr std::uint32_t kFalse = 0;
constexpr std::uint32_t kTrue = 1;

// Operation tags in the shared computed table.
constexpr std::uint32_t kOpNot = 16;
constexpr std::uint32_t kOpIte = 17;

std::uint64_t NextManagerId() {
  static std::atomic<std::uint64_t> next{1};
  return next.fetch_add(1);
}

bool Terminal(std::uint32_t n) { return n <= kTrue; }

}  // namespace

void WeightMap::Set(VarId v, Rational positive, Rational negative) {
  if (v >= positive_.size()) {
    positive_.resize(v + 1, Rational(1));
    negative_.resize(v + 1, Rational(1));
  }
  positive_[v] = std::move(positive);
  negative_[v] = std::move(negative);
}

WeightMap WeightMap::Condition(const PartialAssignment& assignment) const {
  WeightMap out = *this;
  for (const auto& [v, value] : assignment) {
    out.Set(v, Rational(value ? 1 : 0), Rational(value ? 0 : 1));
  }
  return out;
}

BddManager::BddManager(std::uint32_t num_vars, BddOptions options)
    : num_vars_(num_vars), options_(options), id_(NextManagerId()) {
  nodes_.push_back({num_vars_, kFalse, kFalse});
  nodes_.push_back({num_vars_, kTrue, kTrue});
}

BddManager::BddManager(const BddManager& other, std::uint64_t new_id)
    : num_vars_(other.num_vars_),
      options_(other.options_),
      id_(new_id),
      nodes_(other.nodes_),
      unique_(other.unique_),
      cache_(other.cache_) {}

BddManager BddManager::Fork() const {
  return BddManager(*this, NextManagerId());
}

absl::Status BddManager::CheckOwned(Bdd a) const {
  if (a.manager_id() != id_ || a.node() >= nodes_.size()) {
    return absl::InvalidArgumentError(
        "diagram belongs to a different BDD manager");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::uint32_t> BddManager::MakeNode(std::uint32_t var,
                                                   std::uint32_t lo,
                                                   std::uint32_t hi) {
  if (lo == hi) return lo;
  const NodeKey key{var, lo, hi};
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  if (nodes_.size() >= options_.node_budget) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "BDD node budget of ", options_.node_budget, " nodes exceeded"));
  }
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({var, lo, hi});
  unique_.emplace(key, index);
  return index;
}

absl::StatusOr<Bdd> BddManager::Var(VarId v) {
  if (v >= num_vars_) {
    return absl::OutOfRangeError(
        absl::StrCat("unknown variable ", v, " (manager has ", num_vars_, ")"));
  }
  ASSIGN_OR_RETURN(std::uint32_t n, MakeNode(v, kFalse, kTrue));
  return Bdd(id_, n);
}

absl::StatusOr<std::uint32_t> BddManager::NotRec(std::uint32_t a) {
  if (a == kFalse) return kTrue;
  if (a == kTrue) return kFalse;
  const OpKey key{kOpNot, a, 0, 0};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const Node n = nodes_[a];
  ASSIGN_OR_RETURN(std::uint32_t lo, NotRec(n.lo));
  ASSIGN_OR_RETURN(std::uint32_t hi, NotRec(n.hi));
  ASSIGN_OR_RETURN(std::uint32_t r, MakeNode(n.var, lo, hi));
  cache_.emplace(key, r);
  return r;
}

absl::StatusOr<Bdd> BddManager::Not(Bdd a) {
  RETURN_IF_ERROR(CheckOwned(a));
  ASSIGN_OR_RETURN(std::uint32_t r, NotRec(a.node()));
  return Bdd(id_, r);
}

absl::StatusOr<std::uint32_t> BddManager::ApplyRec(BoolOp op, std::uint32_t a,
                                                   std::uint32_t b) {
  switch (op) {
    case BoolOp::kAnd:
      if (a == kFalse || b == kFalse) return kFalse;
      if (a == kTrue) return b;
      if (b == kTrue || a == b) return a;
      break;
    case BoolOp::kOr:
      if (a == kTrue || b == kTrue) return kTrue;
      if (a == kFalse) return b;
      if (b == kFalse || a == b) return a;
      break;
    case BoolOp::kXor:
      if (a == b) return kFalse;
      if (a == kFalse) return b;
      if (b == kFalse) return a;
      if (a == kTrue) return NotRec(b);
      if (b == kTrue) return NotRec(a);
      break;
    case BoolOp::kIff:
      if (a == b) return kTrue;
      if (a == kTrue) return b;
      if (b == kTrue) return a;
      if (a == kFalse) return NotRec(b);
      if (b == kFalse) return NotRec(a);
      break;
  }
  // All four operators are commutative.
  if (a > b) std::swap(a, b);
  const OpKey key{static_cast<std::uint32_t>(op), a, b, 0};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  const Node na = nodes_[a];
  const Node nb = nodes_[b];
  const std::uint32_t var = std::min(na.var, nb.var);
  const std::uint32_t a_lo = na.var == var ? na.lo : a;
  const std::uint32_t a_hi = na.var == var ? na.hi : a;
  const std::uint32_t b_lo = nb.var == var ? nb.lo : b;
  const std::uint32_t b_hi = nb.var == var ? nb.hi : b;
  ASSIGN_OR_RETURN(std::uint32_t lo, ApplyRec(op, a_lo, b_lo));
  ASSIGN_OR_RETURN(std::uint32_t hi, ApplyRec(op, a_hi, b_hi));
  ASSIGN_OR_RETURN(std::uint32_t r, MakeNode(var, lo, hi));
  cache_.emplace(key, r);
  return r;
}

absl::StatusOr<Bdd> BddManager::Apply(BoolOp op, Bdd a, Bdd b) {
  RETURN_IF_ERROR(CheckOwned(a));
  RETURN_IF_ERROR(CheckOwned(b));
  ASSIGN_OR_RETURN(std::uint32_t r, ApplyRec(op, a.node(), b.node()));
  return Bdd(id_, r);
}

absl::StatusOr<std::uint32_t> BddManager::IteRec(std::uint32_t c,
                                                 std::uint32_t t,
                                                 std::uint32_t e) {
  if (c == kTrue) return t;
  if (c == kFalse) return e;
  if (t == e) return t;
  if (t == kTrue && e == kFalse) return c;
  if (t == kFalse && e == kTrue) return NotRec(c);
  if (t == kTrue) return ApplyRec(BoolOp::kOr, c, e);
  if (e == kFalse) return ApplyRec(BoolOp::kAnd, c, t);

  const OpKey key{kOpIte, c, t, e};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  const Node nc = nodes_[c];
  const Node nt = nodes_[t];
  const Node ne = nodes_[e];
  const std::uint32_t var = std::min({nc.var, nt.var, ne.var});
  auto cof = [var](const Node& n, std::uint32_t self, bool high) {
    if (n.var != var) return self;
    return high ? n.hi : n.lo;
  };
  ASSIGN_OR_RETURN(
      std::uint32_t lo,
      IteRec(cof(nc, c, false), cof(nt, t, false), cof(ne, e, false)));
  ASSIGN_OR_RETURN(std::uint32_t hi, IteRec(cof(nc, c, true), cof(nt, t, true),
                                            cof(ne, e, true)));
  ASSIGN_OR_RETURN(std::uint32_t r, MakeNode(var, lo, hi));
  cache_.emplace(key, r);
  return r;
}

absl::StatusOr<Bdd> BddManager::Ite(Bdd cond, Bdd then_branch,
                                    Bdd else_branch) {
  RETURN_IF_ERROR(CheckOwned(cond));
  RETURN_IF_ERROR(CheckOwned(then_branch));
  RETURN_IF_ERROR(CheckOwned(else_branch));
  ASSIGN_OR_RETURN(std::uint32_t r,
                   IteRec(cond.node(), then_branch.node(), else_branch.node()));
  return Bdd(id_, r);
}

absl::StatusOr<Bdd> BddManager::Restrict(Bdd a,
                                         const PartialAssignment& assignment) {
  RETURN_IF_ERROR(CheckOwned(a));
  if (assignment.empty()) return a;
  std::vector<std::int8_t> fixed(num_vars_, -1);
  for (const auto& [v, value] : assignment) {
    if (v >= num_vars_) {
      return absl::OutOfRangeError(absl::StrCat("unknown variable ", v));
    }
    fixed[v] = value ? 1 : 0;
  }
  absl::flat_hash_map<std::uint32_t, std::uint32_t> memo;
  // Recursion depth is bounded by num_vars.
  auto rec = [&](auto& self, std::uint32_t n) -> absl::StatusOr<std::uint32_t> {
    if (Terminal(n)) return n;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    const Node node = nodes_[n];
    std::uint32_t r;
    if (fixed[node.var] >= 0) {
      ASSIGN_OR_RETURN(r, self(self, fixed[node.var] ? node.hi : node.lo));
    } else {
      ASSIGN_OR_RETURN(std::uint32_t lo, self(self, node.lo));
      ASSIGN_OR_RETURN(std::uint32_t hi, self(self, node.hi));
      ASSIGN_OR_RETURN(r, MakeNode(node.var, lo, hi));
    }
    memo.emplace(n, r);
    return r;
  };
  ASSIGN_OR_RETURN(std::uint32_t r, rec(rec, a.node()));
  return Bdd(id_, r);
}

absl::StatusOr<Rational> BddManager::Wmc(Bdd a,
                                         const WeightMap& weights) const {
  RETURN_IF_ERROR(CheckOwned(a));
  if (weights.size() < num_vars_) {
    return absl::FailedPreconditionError(absl::StrCat(
        "weight map covers ", weights.size(), " of ", num_vars_, " variables"));
  }
  // Per-level weight of a skipped variable.
  std::vector<Rational> level_total(num_vars_);
  std::vector<bool> unit(num_vars_);
  for (VarId v = 0; v < num_vars_; ++v) {
    level_total[v] = weights.positive(v) + weights.negative(v);
    unit[v] = level_total[v] == Rational(1);
  }
  auto gap = [&](std::uint32_t from, std::uint32_t to) {
    Rational f(1);
    for (std::uint32_t l = from; l < to; ++l) {
      if (!unit[l]) f *= level_total[l];
    }
    return f;
  };

  absl::flat_hash_map<std::uint32_t, Rational> memo;
  auto rec = [&](auto& self, std::uint32_t n) -> Rational {
    if (n == kFalse) return Rational(0);
    if (n == kTrue) return Rational(1);
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    const Node node = nodes_[n];
    Rational lo = self(self, node.lo);
    Rational hi = self(self, node.hi);
    Rational value;
    if (!lo.IsZero()) {
      value += weights.negative(node.var) *
               gap(node.var + 1, nodes_[node.lo].var) * lo;
    }
    if (!hi.IsZero()) {
      value += weights.positive(node.var) *
               gap(node.var + 1, nodes_[node.hi].var) * hi;
    }
    memo.emplace(n, value);
    return value;
  };
  Rational root = rec(rec, a.node());
  if (root.IsZero()) return root;
  return gap(0, nodes_[a.node()].var) * root;
}

void BddManager::Collect(std::span<const Bdd> roots,
                         std::vector<std::uint32_t>* out) const {
  absl::flat_hash_set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack;
  for (const Bdd& r : roots) stack.push_back(r.node());
  while (!stack.empty()) {
    const std::uint32_t n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    out->push_back(n);
    if (!Terminal(n)) {
      stack.push_back(nodes_[n].lo);
      stack.push_back(nodes_[n].hi);
    }
  }
}

std::size_t BddManager::NodeCount(Bdd a) const {
  return NodeCount(std::span<const Bdd>(&a, 1));
}

std::size_t BddManager::NodeCount(std::span<const Bdd> roots) const {
  std::vector<std::uint32_t> nodes;
  Collect(roots, &nodes);
  return nodes.size();
}

std::size_t BddManager::InternalNodeCount(std::span<const Bdd> roots) const {
  std::vector<std::uint32_t> nodes;
  Collect(roots, &nodes);
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(),
                    [](std::uint32_t n) { return !Terminal(n); }));
}

bool BddManager::Evaluate(Bdd a, const std::vector<bool>& assignment) const {
  std::uint32_t n = a.node();
  while (!Terminal(n)) {
    const Node& node = nodes_[n];
    n = assignment[node.var] ? node.hi : node.lo;
  }
  return n == kTrue;
}

std::string BddManager::ToDot(std::span<const Bdd> roots,
                              const std::vector<std::string>& var_names) const {
  std::vector<std::uint32_t> nodes;
  Collect(roots, &nodes);
  std::sort(nodes.begin(), nodes.end());
  std::string out = "digraph bdd {\n";
  for (std::uint32_t n : nodes) {
    if (Terminal(n)) {
      absl::StrAppend(&out, "  n", n, " [shape=box,label=\"", n, "\"];\n");
      continue;
    }
    const Node& node = nodes_[n];
    const std::string label = node.var < var_names.size()
                                  ? var_names[node.var]
                                  : absl::StrCat("v", node.var);
    absl::StrAppend(&out, "  n", n, " [label=\"", label, "\"];\n");
    absl::StrAppend(&out, "  n", n, " -> n", node.hi, ";\n");
    absl::StrAppend(&out, "  n", n, " -> n", node.lo, " [style=dashed];\n");
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    absl::StrAppend(&out, "  r", i, " [shape=plaintext,label=\"f", i,
                    "\"];\n  r", i, " -> n", roots[i].node(), ";\n");
  }
  out += "}\n";
  return out;
}

}  // namespace dpbound
