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

#include "dpbound/synthesis.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "dpbound/status_macros.h"

namespace dpbound {

namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int ResolveJobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

absl::Status CoverageError(absl::string_view what, const Domain& in,
                           const Domain& out, PointCode x, PointCode y) {
  return absl::FailedPreconditionError(absl::StrCat(
      "coverage violation: ", what, " needs (", in.FormatCode(x), ", ",
      out.FormatCode(y), ") but the inference set lacks it"));
}

// The clipped interval [V_x - alpha, V_x + alpha] within Y.
absl::StatusOr<std::pair<std::uint64_t, std::uint64_t>> Interval(
    const Mechanism& mech, PointCode x, std::uint64_t alpha) {
  if (!mech.targets) {
    return absl::FailedPreconditionError(absl::StrCat(
        "mechanism '", mech.name, "' has no target map for accuracy"));
  }
  if (mech.output_domain.arity() != 1) {
    return absl::FailedPreconditionError(
        "accuracy needs a one-coordinate integer output");
  }
  const std::uint64_t v = (*mech.targets)(mech.input_domain.Decode(x));
  const std::uint64_t top = mech.output_domain.size() - 1;
  const std::uint64_t lo = alpha >= v ? 0 : v - alpha;
  const std::uint64_t hi =
      alpha >= top ? top : std::min<std::uint64_t>(top, v + alpha);
  if (lo > top) {
    return absl::InvalidArgumentError(
        absl::StrCat("target ", v, " of ", mech.input_domain.FormatCode(x),
                     " is more than alpha away from every output"));
  }
  return std::make_pair(lo, hi);
}

}  // namespace

std::vector<std::pair<IoPair, Rational>> ProbMatrix::Entries() const {
  std::vector<std::pair<IoPair, Rational>> out(values_.begin(), values_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::make_pair(a.first.x, a.first.y) <
           std::make_pair(b.first.x, b.first.y);
  });
  return out;
}

absl::StatusOr<InferenceResult> Inference(const CompiledModel& model,
                                          const Mechanism& mech,
                                          const InferenceSet& set,
                                          const SynthesisOptions& options) {
  const auto start = Clock::now();
  if (!(set.input() == mech.input_domain) ||
      !(set.output() == mech.output_domain)) {
    return absl::InvalidArgumentError(
        "inference set domains differ from the mechanism's");
  }
  // Group the pairs by canonical input: each group is one solver run.
  struct Task {
    PointCode x;
    std::vector<std::pair<std::size_t, PointCode>> wanted;  // pair index, y
  };
  std::vector<Task> tasks;
  absl::flat_hash_map<PointCode, std::size_t> task_of;
  const auto& pairs = set.pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const IoPair c =
        set.canonicalizer() ? set.canonicalizer()(pairs[i]) : pairs[i];
    auto [it, inserted] = task_of.try_emplace(c.x, tasks.size());
    if (inserted) tasks.push_back({c.x, {}});
    tasks[it->second].wanted.emplace_back(i, c.y);
  }

  std::vector<Rational> values(pairs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  absl::Status error;
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      auto dist = model.JointDistribution(mech.input_domain.Decode(task.x));
      absl::flat_hash_map<PointCode, const Rational*> by_code;
      absl::Status status = dist.status();
      if (status.ok()) {
        for (const auto& [y, p] : *dist) {
          auto code = mech.output_domain.Encode(y);
          if (!code.ok()) {
            status = absl::InternalError(
                absl::StrCat("probability mass on an output outside Y: ",
                             code.status().message()));
            break;
          }
          by_code[*code] = &p;
        }
      }
      if (!status.ok()) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (error.ok()) error = status;
        next = tasks.size();
        return;
      }
      for (const auto& [index, y] : task.wanted) {
        auto it = by_code.find(y);
        values[index] = it == by_code.end() ? Rational(0) : *it->second;
      }
    }
  };
  const int jobs = std::min<int>(ResolveJobs(options.jobs),
                                 std::max<std::size_t>(tasks.size(), 1));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  RETURN_IF_ERROR(error);

  InferenceResult result;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    result.matrix.Set(pairs[i].x, pairs[i].y, std::move(values[i]));
  }
  result.solver_runs = tasks.size();
  result.seconds = SecondsSince(start);
  return result;
}

std::string Ratio::ToString() const {
  return infinite ? "inf" : value.ToString();
}

double Ratio::ToDouble() const {
  return infinite ? std::numeric_limits<double>::infinity() : value.ToDouble();
}

double PrivacyReport::Epsilon() const {
  if (p.infinite) return std::numeric_limits<double>::infinity();
  if (p.value.IsZero()) return -std::numeric_limits<double>::infinity();
  return std::log(p.value.ToDouble());
}

absl::StatusOr<PrivacyReport> ScanPrivacy(const ProbMatrix& matrix,
                                          const PrivacySet& set) {
  const auto start = Clock::now();
  // Dense snapshot so the inner loop avoids hashing. Each entry carries a
  // double approximation used to discard triples that clearly cannot beat
  // the running maximum; every survivor is compared exactly.
  const std::uint64_t ny = set.output().size();
  const std::uint64_t cells = set.input().size() * ny;
  struct Cell {
    const Rational* p = nullptr;
    double approx = 0;
  };
  std::vector<Cell> dense;
  const bool use_dense = cells <= (std::uint64_t{1} << 26);
  if (use_dense) {
    dense.resize(cells);
    for (PointCode x = 0; x < set.input().size(); ++x) {
      for (PointCode y = 0; y < ny; ++y) {
        if (const Rational* p = matrix.Find(x, y)) {
          dense[x * ny + y] = {p, p->ToDouble()};
        }
      }
    }
  }
  auto lookup = [&](PointCode x, PointCode y) -> Cell {
    if (use_dense) return dense[x * ny + y];
    const Rational* p = matrix.Find(x, y);
    return {p, p ? p->ToDouble() : 0.0};
  };

  PrivacyReport report;
  double best = 0;
  RETURN_IF_ERROR(set.ForEach([&](const Triple& t) -> absl::Status {
    const Cell a = lookup(t.x, t.y);
    const Cell b = lookup(t.x_prime, t.y);
    if (a.p == nullptr) {
      return CoverageError("privacy set", set.input(), set.output(), t.x, t.y);
    }
    if (b.p == nullptr) {
      return CoverageError("privacy set", set.input(), set.output(), t.x_prime,
                           t.y);
    }
    ++report.triples_scanned;
    if (b.p->IsZero()) {
      if (a.p->IsZero()) {
        ++report.skipped_zero;
      } else if (!report.p.infinite) {
        report.p.infinite = true;
        report.witness = t;
      }
      return absl::OkStatus();
    }
    if (report.p.infinite) return absl::OkStatus();
    // Safe discard only when both doubles are normal and the margin is wide.
    if (std::isnormal(a.approx) && std::isnormal(b.approx) &&
        std::isnormal(best) && a.approx < best * b.approx * (1 - 1e-9)) {
      return absl::OkStatus();
    }
    if (CompareQuotient(*a.p, *b.p, report.p.value) > 0) {
      report.p.value = *a.p / *b.p;
      report.witness = t;
      best = report.p.value.ToDouble();
    }
    return absl::OkStatus();
  }));
  report.synthesis_seconds = SecondsSince(start);
  return report;
}

absl::Status CheckPrivacyCoverage(const PrivacySet& privacy,
                                  const InferenceSet& inference) {
  if (!(privacy.input() == inference.input()) ||
      !(privacy.output() == inference.output())) {
    return absl::InvalidArgumentError(
        "privacy and inference sets use different domains");
  }
  if (inference.exhaustive()) return absl::OkStatus();
  return privacy.ForEach([&](const Triple& t) -> absl::Status {
    if (!inference.Contains(t.x, t.y)) {
      return CoverageError("privacy set", privacy.input(), privacy.output(),
                           t.x, t.y);
    }
    if (!inference.Contains(t.x_prime, t.y)) {
      return CoverageError("privacy set", privacy.input(), privacy.output(),
                           t.x_prime, t.y);
    }
    return absl::OkStatus();
  });
}

absl::StatusOr<PrivacyReport> PrivacyBound(const CompiledModel& model,
                                           const Mechanism& mech,
                                           const PrivacySet& privacy,
                                           const InferenceSet& inference,
                                           const SynthesisOptions& options) {
  RETURN_IF_ERROR(CheckPrivacyCoverage(privacy, inference));
  ASSIGN_OR_RETURN(InferenceResult inf,
                   Inference(model, mech, inference, options));
  ASSIGN_OR_RETURN(PrivacyReport report, ScanPrivacy(inf.matrix, privacy));
  report.solver_runs = inf.solver_runs;
  report.inference_seconds = inf.seconds;
  return report;
}

absl::StatusOr<Rational> IntervalMass(const ProbMatrix& matrix,
                                      const Mechanism& mech, PointCode x,
                                      std::uint64_t alpha) {
  ASSIGN_OR_RETURN(auto range, Interval(mech, x, alpha));
  Rational sum;
  for (std::uint64_t y = range.first; y <= range.second; ++y) {
    const Rational* p = matrix.Find(x, y);
    if (p == nullptr) {
      return CoverageError("accuracy set", mech.input_domain,
                           mech.output_domain, x, y);
    }
    sum += *p;
  }
  return sum;
}

absl::Status CheckAccuracyCoverage(const Mechanism& mech,
                                   const AccuracySet& accuracy,
                                   std::uint64_t alpha,
                                   const InferenceSet& inference) {
  for (PointCode x : accuracy.inputs) {
    if (x >= mech.input_domain.size()) {
      return absl::OutOfRangeError(
          absl::StrCat("accuracy input ", x, " outside the input domain"));
    }
    ASSIGN_OR_RETURN(auto range, Interval(mech, x, alpha));
    for (std::uint64_t y = range.first; y <= range.second; ++y) {
      if (!inference.Contains(x, y)) {
        return CoverageError("accuracy set", mech.input_domain,
                             mech.output_domain, x, y);
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<AccuracyReport> ScanAccuracy(const ProbMatrix& matrix,
                                            const Mechanism& mech,
                                            const AccuracySet& accuracy,
                                            std::uint64_t alpha) {
  const auto start = Clock::now();
  if (accuracy.inputs.empty()) {
    return absl::InvalidArgumentError("accuracy set is empty");
  }
  AccuracyReport report;
  report.alpha = alpha;
  bool first = true;
  for (PointCode x : accuracy.inputs) {
    ASSIGN_OR_RETURN(Rational mass, IntervalMass(matrix, mech, x, alpha));
    if (first || mass < report.p) {
      report.p = std::move(mass);
      report.witness = x;
      first = false;
    }
  }
  report.beta = Rational(1) - report.p;
  report.synthesis_seconds = SecondsSince(start);
  return report;
}

absl::StatusOr<AccuracyReport> AccuracyBound(const CompiledModel& model,
                                             const Mechanism& mech,
                                             const AccuracySet& accuracy,
                                             std::uint64_t alpha,
                                             const InferenceSet& inference,
                                             const SynthesisOptions& options) {
  if (accuracy.inputs.empty()) {
    return absl::InvalidArgumentError("accuracy set is empty");
  }
  RETURN_IF_ERROR(CheckAccuracyCoverage(mech, accuracy, alpha, inference));
  ASSIGN_OR_RETURN(InferenceResult inf,
                   Inference(model, mech, inference, options));
  ASSIGN_OR_RETURN(AccuracyReport report,
                   ScanAccuracy(inf.matrix, mech, accuracy, alpha));
  report.solver_runs = inf.solver_runs;
  report.inference_seconds = inf.seconds;
  return report;
}

absl::StatusOr<RankResult> RankAccuracy(const CompiledModel& model,
                                        const Mechanism& mech,
                                        const AccuracySet& accuracy,
                                        std::uint64_t alpha,
                                        const InferenceSet& inference,
                                        std::size_t k,
                                        const SynthesisOptions& options) {
  RETURN_IF_ERROR(CheckAccuracyCoverage(mech, accuracy, alpha, inference));
  ASSIGN_OR_RETURN(InferenceResult inf,
                   Inference(model, mech, inference, options));
  const auto start = Clock::now();
  RankResult result;
  for (PointCode x : accuracy.inputs) {
    ASSIGN_OR_RETURN(Rational mass, IntervalMass(inf.matrix, mech, x, alpha));
    result.entries.push_back({x, std::move(mass)});
  }
  std::stable_sort(
      result.entries.begin(), result.entries.end(),
      [](const RankedInput& a, const RankedInput& b) { return a.p < b.p; });
  if (result.entries.size() > k) result.entries.resize(k);
  result.solver_runs = inf.solver_runs;
  result.inference_seconds = inf.seconds;
  result.synthesis_seconds = SecondsSince(start);
  return result;
}

absl::StatusOr<InferenceSet> ExhaustiveInferenceSet(const Mechanism& mech,
                                                    std::uint64_t cap) {
  return InferenceSet::Exhaustive(mech.input_domain, mech.output_domain, cap);
}

absl::StatusOr<PrivacySet> ExhaustivePrivacySet(const Mechanism& mech,
                                                std::uint64_t cap) {
  PrivacySet set =
      PrivacySet::Exhaustive(mech.input_domain, mech.output_domain);
  if (set.size() > cap) {
    return absl::ResourceExhaustedError(
        absl::StrCat("exhaustive privacy set would hold ", set.size(),
                     " triples; the cap is ", cap));
  }
  return set;
}

absl::StatusOr<AccuracySet> ExhaustiveAccuracySet(const Mechanism& mech,
                                                  std::uint64_t cap) {
  return AccuracySet::Exhaustive(mech.input_domain, cap);
}

namespace {

// Ratio of a neighbor triple; nullopt for 0/0.
std::optional<Ratio> TripleRatio(const ProbMatrix& m, const Triple& t) {
  const Rational& a = *m.Find(t.x, t.y);
  const Rational& b = *m.Find(t.x_prime, t.y);
  if (b.IsZero()) {
    if (a.IsZero()) return std::nullopt;
    return Ratio{true, Rational(0)};
  }
  return Ratio{false, a / b};
}

absl::StatusOr<ProbMatrix> ExhaustiveMatrix(const CompiledModel& model,
                                            const Mechanism& mech,
                                            std::uint64_t cap,
                                            const SynthesisOptions& options) {
  ASSIGN_OR_RETURN(InferenceSet all, ExhaustiveInferenceSet(mech, cap));
  ASSIGN_OR_RETURN(InferenceResult inf, Inference(model, mech, all, options));
  return std::move(inf.matrix);
}

}  // namespace

absl::StatusOr<SetValidation> ValidatePrivacySet(
    const CompiledModel& model, const Mechanism& mech, const PrivacySet& set,
    std::uint64_t cap, const SynthesisOptions& options) {
  if (!(set.input() == mech.input_domain) ||
      !(set.output() == mech.output_domain)) {
    return absl::InvalidArgumentError(
        "privacy set domains differ from the mechanism's");
  }
  ASSIGN_OR_RETURN(PrivacySet all, ExhaustivePrivacySet(mech, cap));
  ASSIGN_OR_RETURN(ProbMatrix m, ExhaustiveMatrix(model, mech, cap, options));

  absl::flat_hash_set<Rational> realized;
  bool realizes_infinity = false;
  RETURN_IF_ERROR(set.ForEach([&](const Triple& t) {
    if (auto r = TripleRatio(m, t)) {
      if (r->infinite) {
        realizes_infinity = true;
      } else {
        realized.insert(r->value);
      }
    }
    return absl::OkStatus();
  }));

  SetValidation out;
  const absl::Status scan = all.ForEach([&](const Triple& t) -> absl::Status {
    auto r = TripleRatio(m, t);
    if (!r) return absl::OkStatus();
    const bool hit =
        r->infinite ? realizes_infinity : realized.contains(r->value);
    if (hit) return absl::OkStatus();
    out.valid = false;
    out.missing_triple = t;
    out.message = absl::StrCat(
        "ratio ", r->ToString(), " of (", mech.input_domain.FormatCode(t.x),
        ", ", mech.input_domain.FormatCode(t.x_prime), ", ",
        mech.output_domain.FormatCode(t.y), ") is not realized by the set");
    return absl::CancelledError();
  });
  if (!scan.ok() && !absl::IsCancelled(scan)) return scan;
  return out;
}

absl::StatusOr<SetValidation> ValidateAccuracySet(
    const CompiledModel& model, const Mechanism& mech, const AccuracySet& set,
    std::uint64_t alpha, std::uint64_t cap, const SynthesisOptions& options) {
  for (PointCode x : set.inputs) {
    if (x >= mech.input_domain.size()) {
      return absl::OutOfRangeError(
          absl::StrCat("accuracy input ", x, " outside the input domain"));
    }
  }
  ASSIGN_OR_RETURN(ProbMatrix m, ExhaustiveMatrix(model, mech, cap, options));
  absl::flat_hash_set<Rational> realized;
  for (PointCode x : set.inputs) {
    ASSIGN_OR_RETURN(Rational mass, IntervalMass(m, mech, x, alpha));
    realized.insert(std::move(mass));
  }
  SetValidation out;
  for (PointCode x = 0; x < mech.input_domain.size(); ++x) {
    ASSIGN_OR_RETURN(Rational mass, IntervalMass(m, mech, x, alpha));
    if (realized.contains(mass)) continue;
    out.valid = false;
    out.missing_input = x;
    out.message = absl::StrCat("interval mass ", mass.ToString(), " of ",
                               mech.input_domain.FormatCode(x),
                               " is not realized by the set");
    break;
  }
  return out;
}

}  // namespace dpbound
