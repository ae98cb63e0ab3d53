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

// The batch commands behind the dpbound tool. Each command returns its full
// output text or an error; nothing is printed on a failing path.

#ifndef DPBOUND_COMMANDS_H_
#define DPBOUND_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dpbound/mechanisms.h"
#include "dpbound/rational.h"
#include "dpbound/report.h"
#include "dpbound/sets.h"

namespace dpbound {

struct CommandFlags {
  // rr, rrcount or above. Ignored when program_path is set.
  std::string mech = "rr";
  int n = 2;
  Rational lambda = Rational(1, 5);
  std::uint64_t alpha = 1;
  // Query range of above threshold.
  std::uint64_t k = 3;
  std::uint64_t threshold = 2;
  Rational lambda1 = Rational(1, 2);
  Rational lambda2 = Rational(1, 2);
  // exhaustive or restricted. Empty picks restricted when the mechanism has
  // symmetry sets for the command, exhaustive otherwise.
  std::string mode;
  // Inference workers; <= 0 means the hardware concurrency.
  int jobs = 0;
  // json or csv. Empty picks the command's default.
  std::string format;
  std::string program_path;
  // Rows kept by rank.
  std::size_t top = 4;
  // Sweep grid; empty means 1/10, 2/10, ..., 9/10.
  std::vector<Rational> lambdas;
  // Bench range; n_max < 0 means n.
  int n_min = 2;
  int n_max = -1;
  std::size_t node_budget = 10'000'000;
  std::uint64_t set_cap = kDefaultSetCap;
};

// 0 on success, 2 for validation and coverage failures, 3 when a resource cap
// is hit, 1 otherwise.
int ExitCodeFor(const absl::Status& status);

// Node budget from DPB_NODE_BUDGET, or `fallback` when unset. Malformed
// values are an error.
absl::StatusOr<std::size_t> NodeBudgetFromEnv(std::size_t fallback);

absl::StatusOr<Mechanism> BuildMechanism(const CommandFlags& flags);

absl::StatusOr<RunReport> PrivacyReportFor(const CommandFlags& flags);
absl::StatusOr<RunReport> AccuracyReportFor(const CommandFlags& flags);

// Inputs ascending by 1 - beta with ties in input order, at most flags.top
// rows.
struct RankRow {
  std::string input;
  Rational one_minus_beta;
};
absl::StatusOr<std::vector<RankRow>> RankRows(const CommandFlags& flags);

// Randomized-response sweep: e^eps of the bit-vector mechanism and 1 - beta of
// the counting mechanism at flags.alpha, per lambda.
struct SweepRow {
  Rational lambda;
  Ratio e_eps;
  Rational one_minus_beta;
};
absl::StatusOr<std::vector<SweepRow>> SweepRows(const CommandFlags& flags);

// Exhaustive then restricted for each n in [n_min, n_max]. Restricted only
// where the mechanism has symmetry sets.
absl::StatusOr<std::vector<RunReport>> BenchReports(const CommandFlags& flags);

// Runs a subcommand (privacy, accuracy, rank, sweep, bench, infer) and
// renders its output.
absl::StatusOr<std::string> RunCommand(absl::string_view command,
                                       const CommandFlags& flags);

}  // namespace dpbound

#endif  // DPBOUND_COMMANDS_H_
