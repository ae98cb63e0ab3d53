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

// Machine-readable run reports. Rationals travel as "num/den" strings next to
// a float; an infinite ratio is "inf" with a null float.

#ifndef DPBOUND_REPORT_H_
#define DPBOUND_REPORT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dpbound/rational.h"
#include "dpbound/synthesis.h"

namespace dpbound {

// One bound computation. `bound` is e^eps for privacy runs and 1 - beta for
// accuracy runs.
struct RunReport {
  std::string command;
  std::string mechanism;
  // Parameters as given, rationals in canonical form. Absent ones omitted.
  std::optional<int> n;
  std::optional<Rational> lambda;
  std::optional<std::uint64_t> k;
  std::optional<std::uint64_t> threshold;
  std::optional<Rational> lambda1;
  std::optional<Rational> lambda2;
  std::optional<std::uint64_t> alpha;
  std::string program;
  std::string mode;

  Ratio bound;
  // Formatted points; x_prime only for privacy.
  std::string witness_x;
  std::string witness_x_prime;
  std::string witness_y;

  std::uint64_t solver_runs = 0;
  std::uint64_t triples_scanned = 0;
  std::uint64_t skipped_zero = 0;
  std::uint64_t set_size = 0;
  // Output diagrams restricted to the first input, and unrestricted.
  std::uint64_t node_count = 0;
  std::uint64_t node_count_unconditioned = 0;
  std::uint64_t num_vars = 0;

  double build_seconds = 0;
  double inference_seconds = 0;
  double synthesis_seconds = 0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

std::string ToJson(const RunReport& report, int indent = 2);
std::string ToJson(const std::vector<RunReport>& reports, int indent = 2);
absl::StatusOr<RunReport> RunReportFromJson(absl::string_view text);

// Shortest decimal that parses back to the same double.
std::string ShortestDouble(double value);

// CSV quoting for a single field.
std::string CsvField(absl::string_view text);

}  // namespace dpbound

#endif  // DPBOUND_REPORT_H_
