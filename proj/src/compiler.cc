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

#include "dpbound/compiler.h"

#include <algorithm>
#include <chrono>
#include <optional>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpbound/status_macros.h"

namespace dpbound {

namespace {

using Bits = std::vector<Bdd>;

// Variable placement computed before any diagram is built.
class Layout {
 public:
  explicit Layout(const Program& program) : program_(program) {
    for (std::size_t p = 0; p < program.params.size(); ++p) {
      param_index_[program.params[p].name] = p;
      param_first_leaf_.push_back(leaves_.size());
      for (const Type& leaf : program.params[p].type.Leaves()) {
        leaves_.push_back(leaf);
      }
    }
    param_first_leaf_.push_back(leaves_.size());
    input_vars_.resize(leaves_.size());
    placed_.assign(program.params.size(), false);
  }

  void Run() {
    std::vector<std::string> scope;
    Visit(*program_.body, &scope);
    for (std::size_t p = 0; p < placed_.size(); ++p) Place(p);
  }

  std::uint32_t num_vars() const { return next_; }
  const std::vector<Type>& leaves() const { return leaves_; }
  const std::vector<std::vector<VarId>>& input_vars() const {
    return input_vars_;
  }
  const std::vector<VarId>& coins() const { return coins_; }
  std::vector<std::string> TakeNames() { return std::move(names_); }

 private:
  bool IsParamRef(const Expr& e, const std::vector<std::string>& scope) const {
    if (e.kind != ExprKind::kVar) return false;
    if (std::find(scope.begin(), scope.end(), e.name) != scope.end()) {
      return false;
    }
    return param_index_.contains(e.name);
  }

  void Place(std::size_t p) {
    if (placed_[p]) return;
    placed_[p] = true;
    const Param& param = program_.params[p];
    const std::size_t first = param_first_leaf_[p];
    const std::size_t count = param_first_leaf_[p + 1] - first;
    for (std::size_t l = first; l < first + count; ++l) {
      const int bits = LeafBits(leaves_[l]);
      std::vector<VarId>& vars = input_vars_[l];
      vars.resize(bits);
      std::string base = param.name;
      if (count > 1) absl::StrAppend(&base, ".", l - first);
      for (int b = bits - 1; b >= 0; --b) {
        vars[b] = next_++;
        names_.push_back(bits > 1 ? absl::StrCat(base, "[", b, "]") : base);
      }
    }
  }

  void PlaceCoin() {
    coins_.push_back(next_++);
    names_.push_back(absl::StrCat("c", coins_.size()));
  }

  void Visit(const Expr& e, std::vector<std::string>* scope) {
    if (IsParamRef(e, *scope)) Place(param_index_.at(e.name));
    for (std::size_t i = 0; i < e.children.size(); ++i) {
      const bool inner = e.kind == ExprKind::kLet && i == 1;
      if (inner) scope->push_back(e.name);
      if (IsParamRef(*e.children[i], *scope)) {
        Place(param_index_.at(e.children[i]->name));
      }
      if (inner) scope->pop_back();
    }
    if (e.kind == ExprKind::kFlip) PlaceCoin();
    if (e.kind == ExprKind::kCategorical) {
      for (std::size_t j = 1; j < e.weights.size(); ++j) PlaceCoin();
    }
    for (std::size_t i = 0; i < e.children.size(); ++i) {
      const bool inner = e.kind == ExprKind::kLet && i == 1;
      if (inner) scope->push_back(e.name);
      Visit(*e.children[i], scope);
      if (inner) scope->pop_back();
    }
  }

  const Program& program_;
  absl::flat_hash_map<std::string, std::size_t> param_index_;
  std::vector<std::size_t> param_first_leaf_;
  std::vector<Type> leaves_;
  std::vector<std::vector<VarId>> input_vars_;
  std::vector<bool> placed_;
  std::vector<VarId> coins_;
  std::vector<std::string> names_;
  std::uint32_t next_ = 0;
};

// Conditional biases of the flip chain encoding a categorical distribution:
// coin j fires with probability p_j / (1 - sum_{i<j} p_i).
std::vector<Rational> ChainBiases(const std::vector<Rational>& weights) {
  std::vector<Rational> biases;
  Rational remaining(1);
  for (std::size_t j = 0; j + 1 < weights.size(); ++j) {
    biases.push_back(remaining.IsZero() ? Rational(0) : weights[j] / remaining);
    remaining -= weights[j];
  }
  return biases;
}

}  // namespace

int LeafBits(const Type& leaf) { return leaf.is_bool() ? 1 : leaf.width(); }

// Symbolic evaluation of the body into bit vectors of diagrams.
class ModelBuilder {
 public:
  ModelBuilder(const ValidatedProgram& program, const CompileOptions& options)
      : program_(program.program), layout_(program.program) {
    layout_.Run();
    model_.emplace(CompiledModel(BddManager(
        layout_.num_vars(), BddOptions{.node_budget = options.node_budget})));
  }

  absl::StatusOr<CompiledModel> Build(const ValidatedProgram& validated) {
    const auto start = std::chrono::steady_clock::now();
    CompiledModel& m = *model_;
    m.input_leaves_ = layout_.leaves();
    m.input_vars_ = layout_.input_vars();
    m.output_leaves_ = validated.output_type().Leaves();
    m.var_names_ = layout_.TakeNames();
    int output_bits = 0;
    for (const Type& leaf : m.output_leaves_) output_bits += LeafBits(leaf);
    if (output_bits > 64) {
      return absl::InvalidArgumentError(absl::StrCat(
          "output has ", output_bits, " bits; at most 64 are supported"));
    }

    for (std::size_t p = 0, leaf = 0; p < program_.params.size(); ++p) {
      const std::size_t count = program_.params[p].type.Leaves().size();
      Bits bits;
      for (std::size_t l = leaf; l < leaf + count; ++l) {
        for (VarId v : m.input_vars_[l]) {
          ASSIGN_OR_RETURN(Bdd b, mgr().Var(v));
          bits.push_back(b);
        }
      }
      leaf += count;
      scope_.emplace_back(program_.params[p].name, std::move(bits));
    }

    ASSIGN_OR_RETURN(m.output_bdds_, Eval(*program_.body));

    m.weights_ = WeightMap(layout_.num_vars());
    for (const CoinVar& c : m.coin_vars_) {
      m.weights_.Set(c.var, c.bias, Rational(1) - c.bias);
    }
    m.stats_.num_vars = layout_.num_vars();
    m.stats_.coin_vars = static_cast<std::uint32_t>(m.coin_vars_.size());
    m.stats_.input_vars = m.stats_.num_vars - m.stats_.coin_vars;
    m.stats_.node_count = m.NodeCount();
    m.stats_.allocated_nodes = mgr().allocated_nodes();
    m.stats_.compile_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return std::move(m);
  }

 private:
  BddManager& mgr() { return model_->manager_; }

  absl::StatusOr<Bdd> NextCoin(const Rational& bias) {
    const VarId v = layout_.coins()[coin_cursor_++];
    model_->coin_vars_.push_back({v, bias});
    return mgr().Var(v);
  }

  Bits Constant(std::uint64_t value, int width) {
    Bits out;
    for (int b = 0; b < width; ++b)
      out.push_back(mgr().Const((value >> b) & 1));
    return out;
  }

  absl::StatusOr<Bits> IteBits(Bdd c, const Bits& t, const Bits& e) {
    Bits out;
    for (std::size_t i = 0; i < t.size(); ++i) {
      ASSIGN_OR_RETURN(Bdd b, mgr().Ite(c, t[i], e[i]));
      out.push_back(b);
    }
    return out;
  }

  absl::StatusOr<Bits> Add(const Bits& a, const Bits& b, bool saturating) {
    Bits sum;
    Bdd carry = mgr().False();
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSIGN_OR_RETURN(Bdd half, mgr().Apply(BoolOp::kXor, a[i], b[i]));
      ASSIGN_OR_RETURN(Bdd s, mgr().Apply(BoolOp::kXor, half, carry));
      ASSIGN_OR_RETURN(Bdd both, mgr().Apply(BoolOp::kAnd, a[i], b[i]));
      ASSIGN_OR_RETURN(Bdd prop, mgr().Apply(BoolOp::kAnd, half, carry));
      ASSIGN_OR_RETURN(carry, mgr().Apply(BoolOp::kOr, both, prop));
      sum.push_back(s);
    }
    if (saturating) {
      for (Bdd& s : sum) {
        ASSIGN_OR_RETURN(s, mgr().Apply(BoolOp::kOr, s, carry));
      }
    }
    return sum;
  }

  // a >= b: the most significant differing bit decides.
  absl::StatusOr<Bdd> GreaterEq(const Bits& a, const Bits& b) {
    Bdd ge = mgr().True();
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSIGN_OR_RETURN(Bdd differ, mgr().Apply(BoolOp::kXor, a[i], b[i]));
      ASSIGN_OR_RETURN(ge, mgr().Ite(differ, a[i], ge));
    }
    return ge;
  }

  absl::StatusOr<Bdd> Equal(const Bits& a, const Bits& b) {
    Bdd eq = mgr().True();
    for (std::size_t i = a.size(); i-- > 0;) {
      ASSIGN_OR_RETURN(Bdd same, mgr().Apply(BoolOp::kIff, a[i], b[i]));
      ASSIGN_OR_RETURN(eq, mgr().Apply(BoolOp::kAnd, eq, same));
    }
    return eq;
  }

  absl::StatusOr<Bits> Eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::kBoolConst:
        return Bits{mgr().Const(e.bool_value)};
      case ExprKind::kIntConst:
        return Constant(e.int_value, e.width);
      case ExprKind::kVar:
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
          if (it->first == e.name) return it->second;
        }
        return absl::NotFoundError(
            absl::StrCat("unbound variable '", e.name, "'"));
      case ExprKind::kFlip: {
        ASSIGN_OR_RETURN(Bdd coin, NextCoin(e.probability));
        return Bits{coin};
      }
      case ExprKind::kCategorical: {
        const std::vector<Rational> biases = ChainBiases(e.weights);
        std::vector<Bdd> coins;
        for (const Rational& bias : biases) {
          ASSIGN_OR_RETURN(Bdd coin, NextCoin(bias));
          coins.push_back(coin);
        }
        Bits value = Constant(e.weights.size() - 1, e.width);
        for (std::size_t j = biases.size(); j-- > 0;) {
          ASSIGN_OR_RETURN(value,
                           IteBits(coins[j], Constant(j, e.width), value));
        }
        return value;
      }
      case ExprKind::kIte: {
        ASSIGN_OR_RETURN(Bits c, Eval(*e.children[0]));
        ASSIGN_OR_RETURN(Bits t, Eval(*e.children[1]));
        ASSIGN_OR_RETURN(Bits f, Eval(*e.children[2]));
        return IteBits(c[0], t, f);
      }
      case ExprKind::kNot: {
        ASSIGN_OR_RETURN(Bits a, Eval(*e.children[0]));
        ASSIGN_OR_RETURN(Bdd r, mgr().Not(a[0]));
        return Bits{r};
      }
      case ExprKind::kAnd:
      case ExprKind::kOr:
      case ExprKind::kXor:
      case ExprKind::kIff: {
        ASSIGN_OR_RETURN(Bits a, Eval(*e.children[0]));
        ASSIGN_OR_RETURN(Bits b, Eval(*e.children[1]));
        const BoolOp op = e.kind == ExprKind::kAnd   ? BoolOp::kAnd
                          : e.kind == ExprKind::kOr  ? BoolOp::kOr
                          : e.kind == ExprKind::kXor ? BoolOp::kXor
                                                     : BoolOp::kIff;
        ASSIGN_OR_RETURN(Bdd r, mgr().Apply(op, a[0], b[0]));
        return Bits{r};
      }
      case ExprKind::kLet: {
        ASSIGN_OR_RETURN(Bits bound, Eval(*e.children[0]));
        scope_.emplace_back(e.name, std::move(bound));
        auto body = Eval(*e.children[1]);
        scope_.pop_back();
        return body;
      }
      case ExprKind::kTuple: {
        Bits out;
        for (const auto& c : e.children) {
          ASSIGN_OR_RETURN(Bits b, Eval(*c));
          out.insert(out.end(), b.begin(), b.end());
        }
        return out;
      }
      case ExprKind::kIntAdd: {
        ASSIGN_OR_RETURN(Bits a, Eval(*e.children[0]));
        ASSIGN_OR_RETURN(Bits b, Eval(*e.children[1]));
        return Add(a, b, e.saturating);
      }
      case ExprKind::kIntGe:
      case ExprKind::kIntEq: {
        ASSIGN_OR_RETURN(Bits a, Eval(*e.children[0]));
        ASSIGN_OR_RETURN(Bits b, Eval(*e.children[1]));
        if (e.kind == ExprKind::kIntGe) {
          ASSIGN_OR_RETURN(Bdd r, GreaterEq(a, b));
          return Bits{r};
        }
        ASSIGN_OR_RETURN(Bdd r, Equal(a, b));
        return Bits{r};
      }
    }
    return absl::InternalError("unknown expression kind");
  }

  const Program& program_;
  Layout layout_;
  std::optional<CompiledModel> model_;
  std::vector<std::pair<std::string, Bits>> scope_;
  std::size_t coin_cursor_ = 0;
};

absl::StatusOr<CompiledModel> Compile(const ValidatedProgram& program,
                                      const CompileOptions& options) {
  ModelBuilder builder(program, options);
  return builder.Build(program);
}

absl::Status CompiledModel::CheckInput(const Valuation& x) const {
  if (x.size() != input_leaves_.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "input has ", x.size(), " entries, expected ", input_leaves_.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int bits = LeafBits(input_leaves_[i]);
    if (bits < 64 && (x[i] >> bits) != 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("input entry ", i, " = ", x[i], " outside ",
                       input_leaves_[i].ToString()));
    }
  }
  return absl::OkStatus();
}

absl::Status CompiledModel::CheckOutput(const Valuation& y) const {
  if (y.size() != output_leaves_.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "output has ", y.size(), " entries, expected ", output_leaves_.size()));
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    const int bits = LeafBits(output_leaves_[i]);
    if (bits < 64 && (y[i] >> bits) != 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("output entry ", i, " = ", y[i], " outside ",
                       output_leaves_[i].ToString()));
    }
  }
  return absl::OkStatus();
}

std::vector<std::int8_t> CompiledModel::FixInputs(const Valuation& x) const {
  std::vector<std::int8_t> fixed(manager_.num_vars(), -1);
  for (std::size_t l = 0; l < input_vars_.size(); ++l) {
    for (std::size_t b = 0; b < input_vars_[l].size(); ++b) {
      fixed[input_vars_[l][b]] = static_cast<std::int8_t>((x[l] >> b) & 1);
    }
  }
  return fixed;
}

PartialAssignment CompiledModel::InputAssignment(const Valuation& x) const {
  PartialAssignment a;
  for (std::size_t l = 0; l < input_vars_.size(); ++l) {
    for (std::size_t b = 0; b < input_vars_[l].size(); ++b) {
      a[input_vars_[l][b]] = (x[l] >> b) & 1;
    }
  }
  return a;
}

Valuation CompiledModel::UnpackOutput(std::uint64_t packed) const {
  Valuation y;
  int offset = 0;
  for (const Type& leaf : output_leaves_) {
    const int bits = LeafBits(leaf);
    const std::uint64_t mask =
        bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    y.push_back((packed >> offset) & mask);
    offset += bits;
  }
  return y;
}

std::uint64_t CompiledModel::PackOutput(const Valuation& y) const {
  std::uint64_t packed = 0;
  int offset = 0;
  for (std::size_t i = 0; i < output_leaves_.size(); ++i) {
    packed |= y[i] << offset;
    offset += LeafBits(output_leaves_[i]);
  }
  return packed;
}

namespace {

// Product traversal of the output diagrams under a fixed input. Input levels
// follow the input; coin levels branch with their weights. Coins that no
// diagram tests sum out to 1.
//
// Output bits that have reached a terminal are factored out of the memo key
// (the terminal is replaced by 0 and its bit re-attached by the caller), so
// states that differ only in already-decided bits share one entry. For
// randomized response this keeps one state per level.
class OutputWalk {
 public:
  OutputWalk(const BddManager& m, const WeightMap& w,
             std::vector<std::int8_t> fixed)
      : m_(m), w_(w), fixed_(std::move(fixed)) {}

  using Dist = absl::flat_hash_map<std::uint64_t, Rational>;

  Dist Joint(std::vector<std::uint32_t> state) {
    Normalize(&state);
    const std::uint64_t decided = TakeDecided(&state);
    Dist out;
    for (const auto& [y, p] : JointKey(state)) out.emplace(y | decided, p);
    return out;
  }

  Rational Point(std::vector<std::uint32_t> state, std::uint64_t target) {
    target_ = target;
    Normalize(&state);
    if (!Agrees(state, nullptr)) return Rational(0);
    TakeDecided(&state);
    return PointKey(state);
  }

 private:
  // Distribution over the bits still open in `key`.
  const Dist& JointKey(const std::vector<std::uint32_t>& key) {
    if (auto it = joint_memo_.find(key); it != joint_memo_.end()) {
      return it->second;
    }
    Dist out;
    const std::optional<VarId> v = Top(key);
    if (!v) {
      out.emplace(0, Rational(1));
    } else {
      for (const bool high : {false, true}) {
        const Rational& w = high ? w_.positive(*v) : w_.negative(*v);
        if (w.IsZero()) continue;
        std::vector<std::uint32_t> child = Branch(key, *v, high);
        Normalize(&child);
        const std::uint64_t decided = TakeDecided(&child);
        for (const auto& [y, p] : JointKey(child)) {
          out[y | decided].AddProduct(w, p);
        }
      }
    }
    return joint_memo_.emplace(key, std::move(out)).first->second;
  }

  Rational PointKey(const std::vector<std::uint32_t>& key) {
    const std::optional<VarId> v = Top(key);
    if (!v) return Rational(1);
    if (auto it = point_memo_.find(key); it != point_memo_.end()) {
      return it->second;
    }
    Rational out;
    for (const bool high : {false, true}) {
      const Rational& w = high ? w_.positive(*v) : w_.negative(*v);
      if (w.IsZero()) continue;
      std::vector<std::uint32_t> child = Branch(key, *v, high);
      Normalize(&child);
      if (!Agrees(child, &key)) continue;
      TakeDecided(&child);
      out.AddProduct(w, PointKey(child));
    }
    point_memo_.emplace(key, out);
    return out;
  }

  void Normalize(std::vector<std::uint32_t>* state) const {
    for (std::uint32_t& n : *state) {
      while (n > 1 && fixed_[m_.LevelOf(n)] >= 0) {
        n = fixed_[m_.LevelOf(n)] ? m_.HighOf(n) : m_.LowOf(n);
      }
    }
  }

  // Packs the bits of positions sitting on the TRUE terminal and resets
  // every terminal to FALSE.
  static std::uint64_t TakeDecided(std::vector<std::uint32_t>* state) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < state->size(); ++i) {
      if ((*state)[i] == 1) {
        bits |= std::uint64_t{1} << i;
        (*state)[i] = 0;
      }
    }
    return bits;
  }

  // Positions that became terminal since `parent` match the target. With no
  // parent every terminal is checked.
  bool Agrees(const std::vector<std::uint32_t>& state,
              const std::vector<std::uint32_t>* parent) const {
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (state[i] > 1 || (parent && (*parent)[i] <= 1)) continue;
      if (state[i] != ((target_ >> i) & 1)) return false;
    }
    return true;
  }

  std::optional<VarId> Top(const std::vector<std::uint32_t>& state) const {
    std::optional<VarId> top;
    for (std::uint32_t n : state) {
      if (n > 1 && (!top || m_.LevelOf(n) < *top)) top = m_.LevelOf(n);
    }
    return top;
  }

  std::vector<std::uint32_t> Branch(const std::vector<std::uint32_t>& state,
                                    VarId v, bool high) const {
    std::vector<std::uint32_t> next = state;
    for (std::uint32_t& n : next) {
      if (n > 1 && m_.LevelOf(n) == v) n = high ? m_.HighOf(n) : m_.LowOf(n);
    }
    return next;
  }

  const BddManager& m_;
  const WeightMap& w_;
  std::vector<std::int8_t> fixed_;
  std::uint64_t target_ = 0;
  absl::flat_hash_map<std::vector<std::uint32_t>, Dist> joint_memo_;
  absl::flat_hash_map<std::vector<std::uint32_t>, Rational> point_memo_;
};

std::vector<std::uint32_t> RootState(const std::vector<Bdd>& roots) {
  std::vector<std::uint32_t> state;
  for (const Bdd& b : roots) state.push_back(b.node());
  return state;
}

}  // namespace

absl::StatusOr<Rational> CompiledModel::ProbOf(const Valuation& x,
                                               const Valuation& y) const {
  RETURN_IF_ERROR(CheckInput(x));
  RETURN_IF_ERROR(CheckOutput(y));
  if (relational_) {
    PartialAssignment a = InputAssignment(x);
    for (std::size_t l = 0; l < output_vars_.size(); ++l) {
      for (std::size_t b = 0; b < output_vars_[l].size(); ++b) {
        a[output_vars_[l][b]] = (y[l] >> b) & 1;
      }
    }
    return manager_.Wmc(phi_, weights_.Condition(a));
  }
  OutputWalk walk(manager_, weights_, FixInputs(x));
  return walk.Point(RootState(output_bdds_), PackOutput(y));
}

absl::StatusOr<Distribution> CompiledModel::JointDistribution(
    const Valuation& x) const {
  RETURN_IF_ERROR(CheckInput(x));
  Distribution out;
  if (relational_) {
    int bits = 0;
    for (const Type& leaf : output_leaves_) bits += LeafBits(leaf);
    for (std::uint64_t packed = 0; packed < (std::uint64_t{1} << bits);
         ++packed) {
      const Valuation y = UnpackOutput(packed);
      ASSIGN_OR_RETURN(Rational p, ProbOf(x, y));
      if (!p.IsZero()) out.emplace_back(y, std::move(p));
    }
  } else {
    OutputWalk walk(manager_, weights_, FixInputs(x));
    for (const auto& [packed, p] : walk.Joint(RootState(output_bdds_))) {
      if (!p.IsZero()) out.emplace_back(UnpackOutput(packed), p);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

absl::StatusOr<Rational> CompiledModel::ProbOfMaterialized(
    const Valuation& x, const Valuation& y) const {
  RETURN_IF_ERROR(CheckInput(x));
  RETURN_IF_ERROR(CheckOutput(y));
  BddManager m = manager_.Fork();
  PartialAssignment a = InputAssignment(x);
  if (relational_) {
    for (std::size_t l = 0; l < output_vars_.size(); ++l) {
      for (std::size_t b = 0; b < output_vars_[l].size(); ++b) {
        a[output_vars_[l][b]] = (y[l] >> b) & 1;
      }
    }
    ASSIGN_OR_RETURN(Bdd r, m.Restrict(m.Adopt(phi_), a));
    return m.Wmc(r, weights_.Condition(a));
  }
  const std::uint64_t target = PackOutput(y);
  Bdd conj = m.True();
  for (std::size_t i = 0; i < output_bdds_.size(); ++i) {
    ASSIGN_OR_RETURN(Bdd f, m.Restrict(m.Adopt(output_bdds_[i]), a));
    ASSIGN_OR_RETURN(Bdd eq,
                     m.Apply(BoolOp::kIff, f, m.Const((target >> i) & 1)));
    ASSIGN_OR_RETURN(conj, m.Apply(BoolOp::kAnd, conj, eq));
  }
  return m.Wmc(conj, weights_.Condition(a));
}

absl::StatusOr<std::size_t> CompiledModel::ConditionedNodeCount(
    const Valuation& x) const {
  RETURN_IF_ERROR(CheckInput(x));
  BddManager m = manager_.Fork();
  const PartialAssignment a = InputAssignment(x);
  std::vector<Bdd> roots;
  if (relational_) {
    ASSIGN_OR_RETURN(Bdd r, m.Restrict(m.Adopt(phi_), a));
    roots.push_back(r);
  } else {
    for (const Bdd& f : output_bdds_) {
      ASSIGN_OR_RETURN(Bdd r, m.Restrict(m.Adopt(f), a));
      roots.push_back(r);
    }
  }
  return m.NodeCount(roots);
}

std::size_t CompiledModel::NodeCount() const {
  if (relational_) return manager_.NodeCount(phi_);
  return manager_.NodeCount(output_bdds_);
}

std::string CompiledModel::ToDot() const {
  if (relational_)
    return manager_.ToDot(std::span<const Bdd>(&phi_, 1), var_names_);
  return manager_.ToDot(output_bdds_, var_names_);
}

absl::StatusOr<CompiledModel> ManualRrWbf(int n, const Rational& lambda) {
  if (n < 1) return absl::InvalidArgumentError("n must be at least 1");
  if (lambda < Rational(0) || lambda > Rational(1)) {
    return absl::InvalidArgumentError("lambda must lie in [0, 1]");
  }
  const auto start = std::chrono::steady_clock::now();
  CompiledModel model(BddManager(static_cast<std::uint32_t>(3 * n)));
  BddManager& m = model.manager_;
  model.relational_ = true;
  model.weights_ = WeightMap(3 * n);
  Bdd phi = m.True();
  for (int i = 0; i < n; ++i) {
    const VarId xv = 3 * i, tv = 3 * i + 1, yv = 3 * i + 2;
    model.input_leaves_.push_back(Type::Bool());
    model.output_leaves_.push_back(Type::Bool());
    model.input_vars_.push_back({xv});
    model.output_vars_.push_back({yv});
    model.coin_vars_.push_back({tv, lambda});
    model.weights_.Set(tv, lambda, Rational(1) - lambda);
    model.var_names_.push_back(absl::StrCat("x", i + 1));
    model.var_names_.push_back(absl::StrCat("t", i + 1));
    model.var_names_.push_back(absl::StrCat("y", i + 1));
    ASSIGN_OR_RETURN(Bdd x, m.Var(xv));
    ASSIGN_OR_RETURN(Bdd t, m.Var(tv));
    ASSIGN_OR_RETURN(Bdd y, m.Var(yv));
    ASSIGN_OR_RETURN(Bdd not_t, m.Not(t));
    ASSIGN_OR_RETURN(Bdd not_x, m.Not(x));
    ASSIGN_OR_RETURN(Bdd keep, m.Apply(BoolOp::kAnd, not_t, x));
    ASSIGN_OR_RETURN(Bdd flip, m.Apply(BoolOp::kAnd, t, not_x));
    ASSIGN_OR_RETURN(Bdd out, m.Apply(BoolOp::kOr, keep, flip));
    ASSIGN_OR_RETURN(Bdd eq, m.Apply(BoolOp::kIff, y, out));
    ASSIGN_OR_RETURN(phi, m.Apply(BoolOp::kAnd, phi, eq));
  }
  model.phi_ = phi;
  model.stats_.num_vars = 3 * n;
  model.stats_.coin_vars = n;
  model.stats_.input_vars = 2 * n;
  model.stats_.node_count = model.NodeCount();
  model.stats_.allocated_nodes = m.allocated_nodes();
  model.stats_.compile_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return model;
}

}  // namespace dpbound
