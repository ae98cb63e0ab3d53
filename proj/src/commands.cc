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

#include "dpbound/commands.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "dpbound/compiler.h"
#include "dpbound/prob_lang.h"
#include "dpbound/status_macros.h"
#include "dpbound/synthesis.h"
#include "json.hpp"

namespace dpbound {

namespace {

using nlohmann::json;

std::string MechName(const CommandFlags& flags) {
  return flags.program_path.empty() ? flags.mech : "program";
}

bool HasPrivacySets(const std::string& mech) { return mech == "rr"; }
bool HasAccuracySets(const std::string& mech) { return mech == "rrcount"; }

absl::StatusOr<std::string> ResolveMode(const CommandFlags& flags,
                                        const std::string& mech, bool privacy) {
  const bool has_sets = privacy ? HasPrivacySets(mech) : HasAccuracySets(mech);
  if (flags.mode.empty())
    return std::string(has_sets ? "restricted" : "exhaustive");
  if (flags.mode == "exhaustive") return flags.mode;
  if (flags.mode == "restricted") {
    if (!has_sets) {
      return absl::InvalidArgumentError(
          absl::StrCat("no restricted ", privacy ? "privacy" : "accuracy",
                       " sets for '", mech, "'; use --mode exhaustive"));
    }
    return flags.mode;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mode '", flags.mode, "'"));
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SynthesisOptions Synth(const CommandFlags& flags) {
  SynthesisOptions options;
  options.jobs = flags.jobs;
  return options;
}

// Mechanism plus its compiled model and the parameter echo of a report.
struct Prepared {
  Mechanism mech;
  std::optional<CompiledModel> model;
  RunReport base;
};

absl::StatusOr<Prepared> Prepare(const CommandFlags& flags,
                                 const std::string& command) {
  Prepared p;
  ASSIGN_OR_RETURN(p.mech, BuildMechanism(flags));
  CompileOptions options;
  options.node_budget = flags.node_budget;
  ASSIGN_OR_RETURN(CompiledModel model, Compile(p.mech.program, options));
  RunReport& r = p.base;
  r.command = command;
  r.mechanism = p.mech.name;
  if (p.mech.name == "program") {
    r.program = flags.program_path;
  } else {
    r.n = flags.n;
    if (p.mech.name == "above") {
      r.k = flags.k;
      r.threshold = flags.threshold;
      r.lambda1 = flags.lambda1;
      r.lambda2 = flags.lambda2;
    } else {
      r.lambda = flags.lambda;
    }
  }
  ASSIGN_OR_RETURN(std::size_t conditioned,
                   model.ConditionedNodeCount(p.mech.input_domain.Decode(0)));
  r.node_count = conditioned;
  r.node_count_unconditioned = model.NodeCount();
  r.num_vars = model.stats().num_vars;
  r.build_seconds = model.stats().compile_seconds;
  p.model.emplace(std::move(model));
  return p;
}

absl::StatusOr<RunReport> Privacy(const CommandFlags& flags,
                                  const std::string& mode) {
  ASSIGN_OR_RETURN(Prepared p, Prepare(flags, "privacy"));
  RunReport r = std::move(p.base);
  r.mode = mode;
  PrivacyReport rep;
  if (mode == "restricted") {
    ASSIGN_OR_RETURN(RrSets sets, RrSymmetrySets(flags.n));
    r.set_size = sets.privacy.size();
    ASSIGN_OR_RETURN(rep, PrivacyBound(*p.model, p.mech, sets.privacy,
                                       sets.inference, Synth(flags)));
  } else {
    ASSIGN_OR_RETURN(InferenceSet inference,
                     ExhaustiveInferenceSet(p.mech, flags.set_cap));
    ASSIGN_OR_RETURN(PrivacySet privacy,
                     ExhaustivePrivacySet(p.mech, flags.set_cap));
    r.set_size = privacy.size();
    ASSIGN_OR_RETURN(
        rep, PrivacyBound(*p.model, p.mech, privacy, inference, Synth(flags)));
  }
  r.bound = rep.p;
  if (rep.witness) {
    r.witness_x = p.mech.input_domain.FormatCode(rep.witness->x);
    r.witness_x_prime = p.mech.input_domain.FormatCode(rep.witness->x_prime);
    r.witness_y = p.mech.output_domain.FormatCode(rep.witness->y);
  }
  r.solver_runs = rep.solver_runs;
  r.triples_scanned = rep.triples_scanned;
  r.skipped_zero = rep.skipped_zero;
  r.inference_seconds = rep.inference_seconds;
  r.synthesis_seconds = rep.synthesis_seconds;
  return r;
}

// Accuracy sets for the resolved mode.
struct AccuracySets {
  InferenceSet inference;
  AccuracySet accuracy;
};

absl::StatusOr<AccuracySets> AccuracySetsFor(const CommandFlags& flags,
                                             const Mechanism& mech,
                                             const std::string& mode) {
  if (mode == "restricted") {
    ASSIGN_OR_RETURN(RrcountSets sets,
                     RrcountSymmetrySets(flags.n, flags.alpha));
    return AccuracySets{std::move(sets.inference), std::move(sets.accuracy)};
  }
  ASSIGN_OR_RETURN(InferenceSet inference,
                   ExhaustiveInferenceSet(mech, flags.set_cap));
  ASSIGN_OR_RETURN(AccuracySet accuracy,
                   ExhaustiveAccuracySet(mech, flags.set_cap));
  return AccuracySets{std::move(inference), std::move(accuracy)};
}

absl::StatusOr<RunReport> Accuracy(const CommandFlags& flags,
                                   const std::string& mode) {
  ASSIGN_OR_RETURN(Prepared p, Prepare(flags, "accuracy"));
  RunReport r = std::move(p.base);
  r.mode = mode;
  r.alpha = flags.alpha;
  ASSIGN_OR_RETURN(AccuracySets sets, AccuracySetsFor(flags, p.mech, mode));
  r.set_size = sets.accuracy.inputs.size();
  ASSIGN_OR_RETURN(AccuracyReport rep,
                   AccuracyBound(*p.model, p.mech, sets.accuracy, flags.alpha,
                                 sets.inference, Synth(flags)));
  r.bound.value = rep.p;
  r.witness_x = p.mech.input_domain.FormatCode(rep.witness);
  r.solver_runs = rep.solver_runs;
  r.inference_seconds = rep.inference_seconds;
  r.synthesis_seconds = rep.synthesis_seconds;
  return r;
}

std::string ReportCsvHeader() {
  return "command,mechanism,n,mode,bound_exact,bound_float,solver_runs,"
         "node_count,build_seconds,inference_seconds,synthesis_seconds\n";
}

std::string ReportCsvRow(const RunReport& r) {
  return absl::StrCat(
      r.command, ",", r.mechanism, ",", r.n ? absl::StrCat(*r.n) : "", ",",
      r.mode, ",", r.bound.ToString(), ",",
      r.bound.infinite ? "inf" : ShortestDouble(r.bound.value.ToDouble()), ",",
      r.solver_runs, ",", r.node_count, ",", ShortestDouble(r.build_seconds),
      ",", ShortestDouble(r.inference_seconds), ",",
      ShortestDouble(r.synthesis_seconds), "\n");
}

absl::StatusOr<std::string> Format(const CommandFlags& flags,
                                   const std::string& fallback) {
  const std::string f = flags.format.empty() ? fallback : flags.format;
  if (f != "json" && f != "csv") {
    return absl::InvalidArgumentError(absl::StrCat("unknown format '", f, "'"));
  }
  return f;
}

absl::StatusOr<std::string> RenderReports(const CommandFlags& flags,
                                          const std::vector<RunReport>& reps,
                                          bool single) {
  ASSIGN_OR_RETURN(std::string format, Format(flags, "json"));
  if (format == "json") {
    return (single ? ToJson(reps.front()) : ToJson(reps)) + "\n";
  }
  std::string out = ReportCsvHeader();
  for (const RunReport& r : reps) out += ReportCsvRow(r);
  return out;
}

absl::StatusOr<std::string> Infer(const CommandFlags& flags) {
  ASSIGN_OR_RETURN(Prepared p, Prepare(flags, "infer"));
  ASSIGN_OR_RETURN(InferenceSet inference,
                   ExhaustiveInferenceSet(p.mech, flags.set_cap));
  ASSIGN_OR_RETURN(InferenceResult inf,
                   Inference(*p.model, p.mech, inference, Synth(flags)));
  ASSIGN_OR_RETURN(std::string format, Format(flags, "csv"));
  const auto entries = inf.matrix.Entries();
  if (format == "json") {
    json arr = json::array();
    for (const auto& [xy, prob] : entries) {
      arr.push_back({{"x", p.mech.input_domain.FormatCode(xy.x)},
                     {"y", p.mech.output_domain.FormatCode(xy.y)},
                     {"p_exact", prob.ToString()},
                     {"p_float", prob.ToDouble()}});
    }
    return arr.dump(2) + "\n";
  }
  std::string out = "x,y,p_exact,p_float\n";
  for (const auto& [xy, prob] : entries) {
    absl::StrAppend(&out, CsvField(p.mech.input_domain.FormatCode(xy.x)), ",",
                    CsvField(p.mech.output_domain.FormatCode(xy.y)), ",",
                    prob.ToString(), ",", ShortestDouble(prob.ToDouble()),
                    "\n");
  }
  return out;
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return 2;
    case absl::StatusCode::kResourceExhausted:
      return 3;
    default:
      return 1;
  }
}

absl::StatusOr<std::size_t> NodeBudgetFromEnv(std::size_t fallback) {
  const char* env = std::getenv("DPB_NODE_BUDGET");
  if (env == nullptr || *env == '\0') return fallback;
  std::uint64_t value;
  if (!absl::SimpleAtoi(env, &value) || value == 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "DPB_NODE_BUDGET must be a positive integer, got '", env, "'"));
  }
  return static_cast<std::size_t>(value);
}

absl::StatusOr<Mechanism> BuildMechanism(const CommandFlags& flags) {
  if (!flags.program_path.empty()) {
    ASSIGN_OR_RETURN(std::string text, ReadFile(flags.program_path));
    ASSIGN_OR_RETURN(Program program, Parse(text));
    ASSIGN_OR_RETURN(ValidatedProgram validated, Validate(program));
    return FromProgram(std::move(validated));
  }
  if (flags.mech == "rr") return Rr(flags.n, flags.lambda);
  if (flags.mech == "rrcount") return Rrcount(flags.n, flags.lambda);
  if (flags.mech == "above") {
    return AboveThreshold(flags.n, flags.k, flags.threshold, flags.lambda1,
                          flags.lambda2);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism '", flags.mech, "'"));
}

absl::StatusOr<RunReport> PrivacyReportFor(const CommandFlags& flags) {
  ASSIGN_OR_RETURN(std::string mode, ResolveMode(flags, MechName(flags), true));
  return Privacy(flags, mode);
}

absl::StatusOr<RunReport> AccuracyReportFor(const CommandFlags& flags) {
  ASSIGN_OR_RETURN(std::string mode,
                   ResolveMode(flags, MechName(flags), false));
  return Accuracy(flags, mode);
}

absl::StatusOr<std::vector<RankRow>> RankRows(const CommandFlags& flags) {
  if (flags.top == 0) return absl::InvalidArgumentError("k must be positive");
  ASSIGN_OR_RETURN(std::string mode,
                   ResolveMode(flags, MechName(flags), false));
  ASSIGN_OR_RETURN(Prepared p, Prepare(flags, "rank"));
  ASSIGN_OR_RETURN(AccuracySets sets, AccuracySetsFor(flags, p.mech, mode));
  ASSIGN_OR_RETURN(RankResult ranked,
                   RankAccuracy(*p.model, p.mech, sets.accuracy, flags.alpha,
                                sets.inference, flags.top, Synth(flags)));
  std::vector<RankRow> rows;
  for (const RankedInput& e : ranked.entries) {
    rows.push_back({p.mech.input_domain.FormatCode(e.x), e.p});
  }
  return rows;
}

absl::StatusOr<std::vector<SweepRow>> SweepRows(const CommandFlags& flags) {
  if (!flags.program_path.empty() ||
      (flags.mech != "rr" && flags.mech != "rrcount")) {
    return absl::InvalidArgumentError(
        "sweep runs randomized response; use --mech rr or rrcount");
  }
  std::vector<Rational> grid = flags.lambdas;
  if (grid.empty()) {
    for (int i = 1; i <= 9; ++i) grid.push_back(Rational(i, 10));
  }
  std::vector<SweepRow> rows;
  for (const Rational& lambda : grid) {
    if (lambda <= Rational(0) || lambda >= Rational(1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("lambda ", lambda.ToString(), " outside (0,1)"));
    }
    CommandFlags f = flags;
    f.lambda = lambda;
    f.mode = "restricted";
    f.mech = "rr";
    ASSIGN_OR_RETURN(RunReport privacy, Privacy(f, "restricted"));
    f.mech = "rrcount";
    ASSIGN_OR_RETURN(RunReport accuracy, Accuracy(f, "restricted"));
    rows.push_back({lambda, privacy.bound, accuracy.bound.value});
  }
  return rows;
}

absl::StatusOr<std::vector<RunReport>> BenchReports(const CommandFlags& flags) {
  const int hi = flags.n_max < 0 ? flags.n : flags.n_max;
  if (flags.n_min < 1 || hi < flags.n_min) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad bench range [", flags.n_min, ", ", hi, "]"));
  }
  const std::string mech = MechName(flags);
  // Counting is benchmarked on accuracy, everything else on privacy.
  const bool privacy = mech != "rrcount";
  std::vector<RunReport> out;
  for (int n = flags.n_min; n <= hi; ++n) {
    CommandFlags f = flags;
    f.n = n;
    ASSIGN_OR_RETURN(RunReport ex, privacy ? Privacy(f, "exhaustive")
                                           : Accuracy(f, "exhaustive"));
    out.push_back(std::move(ex));
    if (privacy ? HasPrivacySets(mech) : HasAccuracySets(mech)) {
      ASSIGN_OR_RETURN(RunReport re, privacy ? Privacy(f, "restricted")
                                             : Accuracy(f, "restricted"));
      out.push_back(std::move(re));
    }
  }
  return out;
}

absl::StatusOr<std::string> RunCommand(absl::string_view command,
                                       const CommandFlags& flags) {
  if (command == "privacy") {
    ASSIGN_OR_RETURN(RunReport r, PrivacyReportFor(flags));
    return RenderReports(flags, {r}, true);
  }
  if (command == "accuracy") {
    ASSIGN_OR_RETURN(RunReport r, AccuracyReportFor(flags));
    return RenderReports(flags, {r}, true);
  }
  if (command == "bench") {
    ASSIGN_OR_RETURN(std::vector<RunReport> reps, BenchReports(flags));
    return RenderReports(flags, reps, false);
  }
  if (command == "infer") return Infer(flags);
  if (command == "rank") {
    ASSIGN_OR_RETURN(std::vector<RankRow> rows, RankRows(flags));
    ASSIGN_OR_RETURN(std::string format, Format(flags, "csv"));
    if (format == "json") {
      json arr = json::array();
      for (const RankRow& r : rows) {
        arr.push_back({{"input", r.input},
                       {"one_minus_beta_exact", r.one_minus_beta.ToString()},
                       {"one_minus_beta_float", r.one_minus_beta.ToDouble()}});
      }
      return arr.dump(2) + "\n";
    }
    std::string out = "input,one_minus_beta_exact,one_minus_beta_float\n";
    for (const RankRow& r : rows) {
      absl::StrAppend(&out, CsvField(r.input), ",", r.one_minus_beta.ToString(),
                      ",", ShortestDouble(r.one_minus_beta.ToDouble()), "\n");
    }
    return out;
  }
  if (command == "sweep") {
    ASSIGN_OR_RETURN(std::vector<SweepRow> rows, SweepRows(flags));
    ASSIGN_OR_RETURN(std::string format, Format(flags, "csv"));
    if (format == "json") {
      json arr = json::array();
      for (const SweepRow& r : rows) {
        json row = {{"lambda", r.lambda.ToString()},
                    {"e_eps_exact", r.e_eps.ToString()},
                    {"one_minus_beta_exact", r.one_minus_beta.ToString()},
                    {"one_minus_beta_float", r.one_minus_beta.ToDouble()}};
        if (r.e_eps.infinite) {
          row["e_eps_float"] = nullptr;
        } else {
          row["e_eps_float"] = r.e_eps.value.ToDouble();
        }
        arr.push_back(row);
      }
      return arr.dump(2) + "\n";
    }
    std::string out =
        "lambda,e_eps_exact,e_eps_float,one_minus_beta_exact,"
        "one_minus_beta_float\n";
    for (const SweepRow& r : rows) {
      absl::StrAppend(
          &out, r.lambda.ToString(), ",", r.e_eps.ToString(), ",",
          r.e_eps.infinite ? "inf" : ShortestDouble(r.e_eps.ToDouble()), ",",
          r.one_minus_beta.ToString(), ",",
          ShortestDouble(r.one_minus_beta.ToDouble()), "\n");
    }
    return out;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown command '", command, "'"));
}

}  // namespace dpbound
