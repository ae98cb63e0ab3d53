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

// dpbound: exact privacy and accuracy bounds for discrete randomized
// algorithms.
//
//   dpbound privacy --mech rr --n 8 --lambda 1/5 --mode restricted
//   dpbound accuracy --mech rrcount --n 2 --lambda 1/5 --alpha 1
//   dpbound rank --mech rrcount --n 8 --lambda 1/5 --alpha 3 --k 4
//   dpbound sweep --n 8 --alpha 3
//   dpbound bench --mech rr --n-min 2 --n-max 8
//   dpbound infer --program examples/coin.dpp

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_split.h"
#include "dpbound/commands.h"
#include "dpbound/rational.h"

namespace {

struct RawFlags {
  std::string lambda = "1/5";
  std::string lambda1 = "1/2";
  std::string lambda2 = "1/2";
  std::size_t k = 0;
};

void AddCommon(CLI::App* cmd, dpbound::CommandFlags* f, RawFlags* raw) {
  cmd->add_option("--mech", f->mech, "rr, rrcount or above")
      ->check(CLI::IsMember({"rr", "rrcount", "above"}));
  cmd->add_option("--n", f->n, "Number of clients or queries")
      ->check(CLI::Range(1, 62));
  cmd->add_option("--lambda", raw->lambda,
                  "Flip probability; sweep takes a comma list");
  cmd->add_option("--alpha", f->alpha, "Accuracy radius");
  cmd->add_option("--k", raw->k, "Query range for above; rows kept for rank");
  cmd->add_option("--threshold", f->threshold, "Above-threshold T");
  cmd->add_option("--lambda1", raw->lambda1, "Threshold noise parameter");
  cmd->add_option("--lambda2", raw->lambda2, "Query noise parameter");
  cmd->add_option("--mode", f->mode, "exhaustive or restricted")
      ->check(CLI::IsMember({"exhaustive", "restricted"}));
  cmd->add_option("--jobs", f->jobs, "Inference workers (0: all cores)");
  cmd->add_option("--format", f->format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--program", f->program_path, "Program file (.dpp)");
}

bool ParseRational(const std::string& text, const char* flag,
                   dpbound::Rational* out) {
  auto r = dpbound::Rational::FromString(text);
  if (!r.ok()) {
    std::cerr << "error: " << flag << ": " << r.status().message() << "\n";
    return false;
  }
  *out = *r;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact differential privacy and accuracy bounds"};
  app.require_subcommand(1);
  dpbound::CommandFlags flags;
  RawFlags raw;

  std::vector<CLI::App*> cmds;
  for (const char* name :
       {"privacy", "accuracy", "rank", "sweep", "bench", "infer"}) {
    CLI::App* cmd = app.add_subcommand(name);
    AddCommon(cmd, &flags, &raw);
    cmds.push_back(cmd);
  }
  cmds[0]->description("Maximum likelihood ratio e^eps");
  cmds[1]->description("Minimum success probability 1 - beta");
  cmds[2]->description("Inputs with the lowest 1 - beta, as CSV");
  cmds[3]->description("e^eps and 1 - beta over a lambda grid, as CSV");
  cmds[4]->description("Exhaustive and restricted runs over a range of n");
  cmds[5]->description("Dump the exhaustive probability matrix");
  cmds[4]->add_option("--n-min", flags.n_min, "First n");
  cmds[4]->add_option("--n-max", flags.n_max, "Last n (default --n)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  // rrcount is the only mechanism with a target map.
  if (command == "rank" && chosen->count("--mech") == 0) flags.mech = "rrcount";
  if (chosen->count("--k") > 0) {
    if (command == "rank") {
      flags.top = raw.k;
    } else {
      flags.k = raw.k;
    }
  }
  if (command == "sweep" && chosen->count("--lambda") > 0) {
    for (absl::string_view part : absl::StrSplit(raw.lambda, ',')) {
      dpbound::Rational r;
      if (!ParseRational(std::string(part), "--lambda", &r)) return 2;
      flags.lambdas.push_back(r);
    }
  } else if (!ParseRational(raw.lambda, "--lambda", &flags.lambda)) {
    return 2;
  }
  if (!ParseRational(raw.lambda1, "--lambda1", &flags.lambda1) ||
      !ParseRational(raw.lambda2, "--lambda2", &flags.lambda2)) {
    return 2;
  }
  auto budget = dpbound::NodeBudgetFromEnv(flags.node_budget);
  if (!budget.ok()) {
    std::cerr << "error: " << budget.status().message() << "\n";
    return 2;
  }
  flags.node_budget = *budget;

  auto out = dpbound::RunCommand(command, flags);
  if (!out.ok()) {
    std::cerr << "error: " << out.status().message() << "\n";
    return dpbound::ExitCodeFor(out.status());
  }
  std::cout << *out;
  return 0;
}
