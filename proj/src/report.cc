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

#include "dpbound/report.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_replace.h"
#include "dpbound/status_macros.h"
#include "json.hpp"

namespace dpbound {

namespace {

using nlohmann::json;

json RatioJson(const Ratio& r) {
  json j;
  j["exact"] = r.ToString();
  if (r.infinite) {
    j["float"] = nullptr;
  } else {
    j["float"] = r.value.ToDouble();
  }
  return j;
}

json ReportJson(const RunReport& r) {
  json j;
  j["command"] = r.command;
  j["mechanism"] = r.mechanism;
  json params = json::object();
  if (r.n) params["n"] = *r.n;
  if (r.lambda) params["lambda"] = r.lambda->ToString();
  if (r.k) params["k"] = *r.k;
  if (r.threshold) params["threshold"] = *r.threshold;
  if (r.lambda1) params["lambda1"] = r.lambda1->ToString();
  if (r.lambda2) params["lambda2"] = r.lambda2->ToString();
  if (r.alpha) params["alpha"] = *r.alpha;
  if (!r.program.empty()) params["program"] = r.program;
  j["params"] = params;
  j["mode"] = r.mode;
  j["bound"] = RatioJson(r.bound);
  if (r.command == "privacy") {
    // ln p, informational only.
    if (r.bound.infinite) {
      j["epsilon"] = nullptr;
    } else {
      j["epsilon"] = std::log(r.bound.value.ToDouble());
    }
  }
  json witness = json::object();
  if (!r.witness_x.empty()) witness["x"] = r.witness_x;
  if (!r.witness_x_prime.empty()) witness["x_prime"] = r.witness_x_prime;
  if (!r.witness_y.empty()) witness["y"] = r.witness_y;
  j["witness"] = witness;
  j["solver_runs"] = r.solver_runs;
  j["triples_scanned"] = r.triples_scanned;
  j["skipped_zero"] = r.skipped_zero;
  j["set_size"] = r.set_size;
  j["bdd"] = {{"node_count", r.node_count},
              {"node_count_unconditioned", r.node_count_unconditioned},
              {"num_vars", r.num_vars}};
  j["times"] = {{"build_seconds", r.build_seconds},
                {"inference_seconds", r.inference_seconds},
                {"synthesis_seconds", r.synthesis_seconds}};
  return j;
}

absl::StatusOr<Rational> RationalField(const json& j, const char* key) {
  if (!j.at(key).is_string()) {
    return absl::InvalidArgumentError(absl::StrCat(key, " must be a string"));
  }
  return Rational::FromString(j.at(key).get<std::string>());
}

absl::StatusOr<RunReport> ParseReport(const json& j) {
  RunReport r;
  r.command = j.at("command").get<std::string>();
  r.mechanism = j.at("mechanism").get<std::string>();
  const json& p = j.at("params");
  if (p.contains("n")) r.n = p["n"].get<int>();
  if (p.contains("lambda")) {
    ASSIGN_OR_RETURN(r.lambda, RationalField(p, "lambda"));
  }
  if (p.contains("k")) r.k = p["k"].get<std::uint64_t>();
  if (p.contains("threshold"))
    r.threshold = p["threshold"].get<std::uint64_t>();
  if (p.contains("lambda1")) {
    ASSIGN_OR_RETURN(r.lambda1, RationalField(p, "lambda1"));
  }
  if (p.contains("lambda2")) {
    ASSIGN_OR_RETURN(r.lambda2, RationalField(p, "lambda2"));
  }
  if (p.contains("alpha")) r.alpha = p["alpha"].get<std::uint64_t>();
  if (p.contains("program")) r.program = p["program"].get<std::string>();
  r.mode = j.at("mode").get<std::string>();

  const std::string exact = j.at("bound").at("exact").get<std::string>();
  if (exact == "inf") {
    r.bound.infinite = true;
  } else {
    ASSIGN_OR_RETURN(r.bound.value, Rational::FromString(exact));
  }
  const json& w = j.at("witness");
  if (w.contains("x")) r.witness_x = w["x"].get<std::string>();
  if (w.contains("x_prime"))
    r.witness_x_prime = w["x_prime"].get<std::string>();
  if (w.contains("y")) r.witness_y = w["y"].get<std::string>();
  r.solver_runs = j.at("solver_runs").get<std::uint64_t>();
  r.triples_scanned = j.at("triples_scanned").get<std::uint64_t>();
  r.skipped_zero = j.at("skipped_zero").get<std::uint64_t>();
  r.set_size = j.at("set_size").get<std::uint64_t>();
  const json& b = j.at("bdd");
  r.node_count = b.at("node_count").get<std::uint64_t>();
  r.node_count_unconditioned =
      b.at("node_count_unconditioned").get<std::uint64_t>();
  r.num_vars = b.at("num_vars").get<std::uint64_t>();
  const json& t = j.at("times");
  r.build_seconds = t.at("build_seconds").get<double>();
  r.inference_seconds = t.at("inference_seconds").get<double>();
  r.synthesis_seconds = t.at("synthesis_seconds").get<double>();
  return r;
}

}  // namespace

std::string ToJson(const RunReport& report, int indent) {
  return ReportJson(report).dump(indent);
}

std::string ToJson(const std::vector<RunReport>& reports, int indent) {
  json arr = json::array();
  for (const RunReport& r : reports) arr.push_back(ReportJson(r));
  return arr.dump(indent);
}

absl::StatusOr<RunReport> RunReportFromJson(absl::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr,
                       /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("report is not a JSON object");
  }
  try {
    return ParseReport(j);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed report: ", e.what()));
  }
}

std::string ShortestDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string CsvField(absl::string_view text) {
  if (text.find_first_of(",\"\n") == absl::string_view::npos) {
    return std::string(text);
  }
  return absl::StrCat("\"", absl::StrReplaceAll(text, {{"\"", "\"\""}}), "\"");
}

}  // namespace dpbound
