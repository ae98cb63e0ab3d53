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

#include "dpbound/oracle.h"

#include <algorithm>
#include <map>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpbound/status_macros.h"

namespace dpbound {

namespace {

// Concrete values are flattened leaves, the same way types flatten.
using Leaves = std::vector<std::uint64_t>;

void Profile(const Expr& e, CoinProfile* out) {
  if (e.kind == ExprKind::kFlip) {
    out->coins.push_back({static_cast<int>(out->coins.size()), e.probability});
  } else if (e.kind == ExprKind::kCategorical) {
    Rational left(1);
    for (std::size_t j = 0; j + 1 < e.weights.size(); ++j) {
      Rational bias = left.IsZero() ? Rational(0) : e.weights[j] / left;
      out->coins.push_back({static_cast<int>(out->coins.size()), bias});
      left -= e.weights[j];
    }
  }
  for (const auto& c : e.children) Profile(*c, out);
}

class Evaluator {
 public:
  Evaluator(const ValidatedProgram& program, const std::vector<bool>& coins)
      : program_(program), coins_(coins) {}

  absl::StatusOr<Leaves> Run(const Valuation& x) {
    cursor_ = 0;
    env_.clear();
    std::size_t leaf = 0;
    for (const Param& p : program_.program.params) {
      const std::size_t count = p.type.Leaves().size();
      env_.emplace_back(p.name,
                        Leaves(x.begin() + leaf, x.begin() + leaf + count));
      leaf += count;
    }
    return Eval(*program_.program.body);
  }

 private:
  // Coins the subtree owns, used to skip the branch an if does not take.
  std::size_t CoinsIn(const Expr& e) {
    if (auto it = coin_count_.find(&e); it != coin_count_.end()) {
      return it->second;
    }
    std::size_t n = 0;
    if (e.kind == ExprKind::kFlip) n = 1;
    if (e.kind == ExprKind::kCategorical) n = e.weights.size() - 1;
    for (const auto& c : e.children) n += CoinsIn(*c);
    coin_count_[&e] = n;
    return n;
  }

  std::uint64_t Mask(const Expr& e) const {
    const int w = program_.TypeOf(e).width();
    return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
  }

  absl::StatusOr<Leaves> Eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::kBoolConst:
        return Leaves{e.bool_value ? 1u : 0u};
      case ExprKind::kIntConst:
        return Leaves{e.int_value};
      case ExprKind::kVar:
        for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
          if (it->first == e.name) return it->second;
        }
        return absl::NotFoundError(absl::StrCat("unbound '", e.name, "'"));
      case ExprKind::kFlip:
        return Leaves{coins_[cursor_++] ? 1u : 0u};
      case ExprKind::kCategorical: {
        const std::size_t k = e.weights.size();
        std::uint64_t value = k - 1;
        for (std::size_t j = 0; j + 1 < k; ++j) {
          if (coins_[cursor_ + j]) {
            value = j;
            break;
          }
        }
        cursor_ += k - 1;
        return Leaves{value};
      }
      case ExprKind::kIte: {
        ASSIGN_OR_RETURN(Leaves c, Eval(*e.children[0]));
        if (c[0]) {
          ASSIGN_OR_RETURN(Leaves v, Eval(*e.children[1]));
          cursor_ += CoinsIn(*e.children[2]);
          return v;
        }
        cursor_ += CoinsIn(*e.children[1]);
        return Eval(*e.children[2]);
      }
      case ExprKind::kNot: {
        ASSIGN_OR_RETURN(Leaves a, Eval(*e.children[0]));
        return Leaves{a[0] ? 0u : 1u};
      }
      case ExprKind::kAnd:
      case ExprKind::kOr:
      case ExprKind::kXor:
      case ExprKind::kIff: {
        ASSIGN_OR_RETURN(Leaves a, Eval(*e.children[0]));
        ASSIGN_OR_RETURN(Leaves b, Eval(*e.children[1]));
        bool r = false;
        switch (e.kind) {
          case ExprKind::kAnd:
            r = a[0] && b[0];
            break;
          case ExprKind::kOr:
            r = a[0] || b[0];
            break;
          case ExprKind::kXor:
            r = a[0] != b[0];
            break;
          default:
            r = a[0] == b[0];
            break;
        }
        return Leaves{r ? 1u : 0u};
      }
      case ExprKind::kLet: {
        ASSIGN_OR_RETURN(Leaves bound, Eval(*e.children[0]));
        env_.emplace_back(e.name, std::move(bound));
        auto body = Eval(*e.children[1]);
        env_.pop_back();
        return body;
      }
      case ExprKind::kTuple: {
        Leaves out;
        for (const auto& c : e.children) {
          ASSIGN_OR_RETURN(Leaves v, Eval(*c));
          out.insert(out.end(), v.begin(), v.end());
        }
        return out;
      }
      case ExprKind::kIntAdd: {
        ASSIGN_OR_RETURN(Leaves a, Eval(*e.children[0]));
        ASSIGN_OR_RETURN(Leaves b, Eval(*e.children[1]));
        const std::uint64_t mask = Mask(e);
        const std::uint64_t sum = a[0] + b[0];  // widths <= 62: no overflow
        if (e.saturating) return Leaves{std::min(sum, mask)};
        return Leaves{sum & mask};
      }
      case ExprKind::kIntGe:
      case ExprKind::kIntEq: {
        ASSIGN_OR_RETURN(Leaves a, Eval(*e.children[0]));
        ASSIGN_OR_RETURN(Leaves b, Eval(*e.children[1]));
        const bool r = e.kind == ExprKind::kIntGe ? a[0] >= b[0] : a[0] == b[0];
        return Leaves{r ? 1u : 0u};
      }
    }
    return absl::InternalError("unknown expression kind");
  }

  const ValidatedProgram& program_;
  const std::vector<bool>& coins_;
  std::size_t cursor_ = 0;
  std::vector<std::pair<std::string, Leaves>> env_;
  absl::flat_hash_map<const Expr*, std::size_t> coin_count_;
};

absl::Status CheckInputShape(const ValidatedProgram& program,
                             const Valuation& x) {
  std::vector<Type> leaves;
  for (const Param& p : program.program.params) {
    for (const Type& t : p.type.Leaves()) leaves.push_back(t);
  }
  if (leaves.size() != x.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "input has ", x.size(), " entries, expected ", leaves.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int bits = leaves[i].is_bool() ? 1 : leaves[i].width();
    if ((x[i] >> bits) != 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("input entry ", i, " out of range"));
    }
  }
  return absl::OkStatus();
}

// Distribution of every input, indexed by input code.
absl::StatusOr<std::vector<std::map<PointCode, Rational>>> AllDistributions(
    const Mechanism& mech, const OracleOptions& options) {
  if (mech.input_domain.size() > options.input_cap) {
    return absl::ResourceExhaustedError(
        absl::StrCat("oracle refuses ", mech.input_domain.size(),
                     " inputs; the cap is ", options.input_cap));
  }
  std::vector<std::map<PointCode, Rational>> out(mech.input_domain.size());
  for (PointCode x = 0; x < mech.input_domain.size(); ++x) {
    ASSIGN_OR_RETURN(Distribution d,
                     EnumerateDistribution(
                         mech.program, mech.input_domain.Decode(x), options));
    for (auto& [y, p] : d) {
      ASSIGN_OR_RETURN(PointCode code, mech.output_domain.Encode(y));
      out[x][code] = std::move(p);
    }
  }
  return out;
}

Rational MassOf(const std::map<PointCode, Rational>& d, PointCode y) {
  auto it = d.find(y);
  return it == d.end() ? Rational(0) : it->second;
}

}  // namespace

CoinProfile ProfileCoins(const Program& program) {
  CoinProfile profile;
  if (program.body) Profile(*program.body, &profile);
  return profile;
}

absl::StatusOr<Distribution> EnumerateDistribution(
    const ValidatedProgram& program, const Valuation& x,
    const OracleOptions& options) {
  RETURN_IF_ERROR(CheckInputShape(program, x));
  const CoinProfile profile = ProfileCoins(program.program);
  const std::size_t c = profile.coins.size();
  if (c > static_cast<std::size_t>(options.coin_cap)) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "program has ", c, " coins; the oracle cap is ", options.coin_cap));
  }
  std::map<Valuation, Rational> masses;
  std::vector<bool> coins(c, false);
  Evaluator eval(program, coins);
  absl::Status error;
  // Depth-first over coin values carrying the prefix weight; zero-weight
  // branches are pruned.
  auto rec = [&](auto& self, std::size_t i, const Rational& weight) -> void {
    if (!error.ok()) return;
    if (i == c) {
      auto y = eval.Run(x);
      if (!y.ok()) {
        error = y.status();
        return;
      }
      masses[*y] += weight;
      return;
    }
    const Rational& bias = profile.coins[i].bias;
    const Rational off = Rational(1) - bias;
    if (!off.IsZero()) {
      coins[i] = false;
      self(self, i + 1, weight * off);
    }
    if (!bias.IsZero()) {
      coins[i] = true;
      self(self, i + 1, weight * bias);
    }
  };
  rec(rec, 0, Rational(1));
  RETURN_IF_ERROR(error);
  Distribution out;
  for (auto& [y, p] : masses) {
    if (!p.IsZero()) out.emplace_back(y, std::move(p));
  }
  return out;
}

absl::StatusOr<PrivacyReport> OraclePrivacyBound(const Mechanism& mech,
                                                 const OracleOptions& options) {
  ASSIGN_OR_RETURN(auto dists, AllDistributions(mech, options));
  PrivacyReport report;
  report.solver_runs = dists.size();
  for (PointCode x = 0; x < dists.size(); ++x) {
    for (PointCode xp : mech.input_domain.Neighbors(x)) {
      for (PointCode y = 0; y < mech.output_domain.size(); ++y) {
        ++report.triples_scanned;
        const Rational a = MassOf(dists[x], y);
        const Rational b = MassOf(dists[xp], y);
        if (b.IsZero()) {
          if (a.IsZero()) {
            ++report.skipped_zero;
          } else if (!report.p.infinite) {
            report.p.infinite = true;
            report.witness = Triple{x, xp, y};
          }
          continue;
        }
        if (report.p.infinite) continue;
        Rational ratio = a / b;
        if (ratio > report.p.value) {
          report.p.value = std::move(ratio);
          report.witness = Triple{x, xp, y};
        }
      }
    }
  }
  return report;
}

absl::StatusOr<std::vector<Rational>> OracleIntervalMasses(
    const Mechanism& mech, std::uint64_t alpha, const OracleOptions& options) {
  if (!mech.targets || mech.output_domain.arity() != 1) {
    return absl::FailedPreconditionError(
        "accuracy needs a target map and a one-coordinate output");
  }
  ASSIGN_OR_RETURN(auto dists, AllDistributions(mech, options));
  std::vector<Rational> masses;
  for (PointCode x = 0; x < dists.size(); ++x) {
    const std::uint64_t v = (*mech.targets)(mech.input_domain.Decode(x));
    Rational sum;
    for (const auto& [y, p] : dists[x]) {
      const std::uint64_t gap = y > v ? y - v : v - y;
      if (gap <= alpha) sum += p;
    }
    masses.push_back(std::move(sum));
  }
  return masses;
}

absl::StatusOr<AccuracyReport> OracleAccuracyBound(
    const Mechanism& mech, std::uint64_t alpha, const OracleOptions& options) {
  ASSIGN_OR_RETURN(std::vector<Rational> masses,
                   OracleIntervalMasses(mech, alpha, options));
  if (masses.empty()) return absl::InvalidArgumentError("empty input domain");
  AccuracyReport report;
  report.alpha = alpha;
  report.solver_runs = masses.size();
  report.p = masses[0];
  for (PointCode x = 1; x < masses.size(); ++x) {
    if (masses[x] < report.p) {
      report.p = masses[x];
      report.witness = x;
    }
  }
  report.beta = Rational(1) - report.p;
  return report;
}

}  // namespace dpbound
