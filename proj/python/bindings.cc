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

// Python bindings. Exact values cross the boundary as fractions.Fraction;
// parameters accept anything whose str() is a rational ("1/5", "0.2", 3).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dpbound/commands.h"
#include "dpbound/compiler.h"
#include "dpbound/mechanisms.h"
#include "dpbound/oracle.h"
#include "dpbound/prob_lang.h"
#include "dpbound/rational.h"
#include "dpbound/synthesis.h"

namespace py = pybind11;

namespace dpbound {
namespace {

template <typename T>
T Unwrap(absl::StatusOr<T> s) {
  if (!s.ok()) {
    if (s.status().code() == absl::StatusCode::kResourceExhausted) {
      throw std::runtime_error(std::string(s.status().message()));
    }
    throw py::value_error(std::string(s.status().message()));
  }
  return *std::move(s);
}

Rational ToRational(const py::handle& obj) {
  return Unwrap(Rational::FromString(py::str(obj).cast<std::string>()));
}

py::object ToFraction(const Rational& r) {
  static py::object fraction =
      py::module_::import("fractions").attr("Fraction");
  py::int_ num = py::reinterpret_steal<py::int_>(
      PyLong_FromString(r.NumeratorString().c_str(), nullptr, 10));
  py::int_ den = py::reinterpret_steal<py::int_>(
      PyLong_FromString(r.DenominatorString().c_str(), nullptr, 10));
  return fraction(num, den);
}

py::object RatioToPy(const Ratio& r) {
  if (r.infinite) return py::float_(std::numeric_limits<double>::infinity());
  return ToFraction(r.value);
}

// A mechanism together with its compiled model.
struct PyMechanism {
  Mechanism mech;
  std::unique_ptr<CompiledModel> model;
};

std::shared_ptr<PyMechanism> Wrap(Mechanism mech) {
  auto out = std::make_shared<PyMechanism>();
  out->mech = std::move(mech);
  out->model =
      std::make_unique<CompiledModel>(Unwrap(Compile(out->mech.program)));
  return out;
}

py::dict PrivacyDict(const PyMechanism& m, const PrivacyReport& r) {
  py::dict d;
  d["p"] = RatioToPy(r.p);
  if (r.witness) {
    d["witness"] =
        py::make_tuple(m.mech.input_domain.Decode(r.witness->x),
                       m.mech.input_domain.Decode(r.witness->x_prime),
                       m.mech.output_domain.Decode(r.witness->y));
  } else {
    d["witness"] = py::none();
  }
  d["solver_runs"] = r.solver_runs;
  d["triples_scanned"] = r.triples_scanned;
  return d;
}

py::dict Privacy(const PyMechanism& m, const std::string& mode, int jobs) {
  SynthesisOptions options;
  options.jobs = jobs;
  if (mode == "restricted") {
    if (m.mech.name != "rr") {
      throw py::value_error("restricted privacy sets exist only for rr");
    }
    RrSets sets = Unwrap(RrSymmetrySets(m.mech.params.n));
    return PrivacyDict(m, Unwrap(PrivacyBound(*m.model, m.mech, sets.privacy,
                                              sets.inference, options)));
  }
  if (mode != "exhaustive") throw py::value_error("unknown mode " + mode);
  InferenceSet inference = Unwrap(ExhaustiveInferenceSet(m.mech));
  PrivacySet privacy = Unwrap(ExhaustivePrivacySet(m.mech));
  return PrivacyDict(
      m, Unwrap(PrivacyBound(*m.model, m.mech, privacy, inference, options)));
}

py::dict Accuracy(const PyMechanism& m, std::uint64_t alpha,
                  const std::string& mode, int jobs) {
  SynthesisOptions options;
  options.jobs = jobs;
  AccuracyReport r;
  if (mode == "restricted") {
    if (m.mech.name != "rrcount") {
      throw py::value_error("restricted accuracy sets exist only for rrcount");
    }
    RrcountSets sets = Unwrap(RrcountSymmetrySets(m.mech.params.n, alpha));
    r = Unwrap(AccuracyBound(*m.model, m.mech, sets.accuracy, alpha,
                             sets.inference, options));
  } else if (mode == "exhaustive") {
    InferenceSet inference = Unwrap(ExhaustiveInferenceSet(m.mech));
    AccuracySet accuracy = Unwrap(ExhaustiveAccuracySet(m.mech));
    r = Unwrap(
        AccuracyBound(*m.model, m.mech, accuracy, alpha, inference, options));
  } else {
    throw py::value_error("unknown mode " + mode);
  }
  py::dict d;
  d["p"] = ToFraction(r.p);
  d["beta"] = ToFraction(r.beta);
  d["witness"] = m.mech.input_domain.Decode(r.witness);
  d["solver_runs"] = r.solver_runs;
  return d;
}

py::dict DistToPy(const Distribution& dist) {
  py::dict d;
  for (const auto& [y, p] : dist) d[py::tuple(py::cast(y))] = ToFraction(p);
  return d;
}

CommandFlags FlagsFrom(const py::kwargs& kw) {
  CommandFlags f;
  for (const auto& [key_obj, value] : kw) {
    const std::string key = py::str(key_obj);
    if (key == "mech")
      f.mech = value.cast<std::string>();
    else if (key == "n")
      f.n = value.cast<int>();
    else if (key == "lambda_")
      f.lambda = ToRational(value);
    else if (key == "alpha")
      f.alpha = value.cast<std::uint64_t>();
    else if (key == "k")
      f.k = value.cast<std::uint64_t>();
    else if (key == "top")
      f.top = value.cast<std::size_t>();
    else if (key == "threshold")
      f.threshold = value.cast<std::uint64_t>();
    else if (key == "lambda1")
      f.lambda1 = ToRational(value);
    else if (key == "lambda2")
      f.lambda2 = ToRational(value);
    else if (key == "mode")
      f.mode = value.cast<std::string>();
    else if (key == "jobs")
      f.jobs = value.cast<int>();
    else if (key == "format")
      f.format = value.cast<std::string>();
    else if (key == "program")
      f.program_path = value.cast<std::string>();
    else if (key == "n_min")
      f.n_min = value.cast<int>();
    else if (key == "n_max")
      f.n_max = value.cast<int>();
    else if (key == "lambdas") {
      for (const auto& v : value) f.lambdas.push_back(ToRational(v));
    } else {
      throw py::type_error("unknown flag " + key);
    }
  }
  return f;
}

}  // namespace
}  // namespace dpbound

PYBIND11_MODULE(_core, m) {
  using namespace dpbound;  // NOLINT
  m.doc() =
      "Exact privacy and accuracy bounds for discrete randomized algorithms";

  py::class_<PyMechanism, std::shared_ptr<PyMechanism>>(m, "Mechanism")
      .def_property_readonly("name",
                             [](const PyMechanism& p) { return p.mech.name; })
      .def_property_readonly(
          "input_size",
          [](const PyMechanism& p) { return p.mech.input_domain.size(); })
      .def_property_readonly(
          "output_size",
          [](const PyMechanism& p) { return p.mech.output_domain.size(); })
      .def("inputs",
           [](const PyMechanism& p) {
             std::vector<Valuation> out;
             for (PointCode x = 0; x < p.mech.input_domain.size(); ++x) {
               out.push_back(p.mech.input_domain.Decode(x));
             }
             return out;
           })
      .def(
          "prob",
          [](const PyMechanism& p, const Valuation& x, const Valuation& y) {
            return ToFraction(Unwrap(p.model->ProbOf(x, y)));
          },
          py::arg("x"), py::arg("y"))
      .def(
          "distribution",
          [](const PyMechanism& p, const Valuation& x) {
            return DistToPy(Unwrap(p.model->JointDistribution(x)));
          },
          py::arg("x"))
      .def(
          "oracle_distribution",
          [](const PyMechanism& p, const Valuation& x) {
            return DistToPy(Unwrap(EnumerateDistribution(p.mech.program, x)));
          },
          py::arg("x"))
      .def(
          "node_count",
          [](const PyMechanism& p, std::optional<Valuation> x) -> std::size_t {
            if (!x) return p.model->NodeCount();
            return Unwrap(p.model->ConditionedNodeCount(*x));
          },
          py::arg("x") = py::none())
      .def("privacy_bound", &Privacy, py::arg("mode") = "exhaustive",
           py::arg("jobs") = 1)
      .def("accuracy_bound", &Accuracy, py::arg("alpha"),
           py::arg("mode") = "exhaustive", py::arg("jobs") = 1)
      .def("__repr__", [](const PyMechanism& p) {
        return "<Mechanism " + p.mech.name + ">";
      });

  m.def(
      "rr",
      [](int n, py::object lambda) {
        return Wrap(Unwrap(Rr(n, ToRational(lambda))));
      },
      py::arg("n"), py::arg("lam"));
  m.def(
      "rrcount",
      [](int n, py::object lambda) {
        return Wrap(Unwrap(Rrcount(n, ToRational(lambda))));
      },
      py::arg("n"), py::arg("lam"));
  m.def(
      "above_threshold",
      [](int n, std::uint64_t k, std::uint64_t threshold, py::object l1,
         py::object l2) {
        return Wrap(Unwrap(
            AboveThreshold(n, k, threshold, ToRational(l1), ToRational(l2))));
      },
      py::arg("n"), py::arg("k"), py::arg("threshold"), py::arg("lambda1"),
      py::arg("lambda2"));
  m.def(
      "from_program",
      [](const std::string& text) {
        return Wrap(Unwrap(FromProgram(Unwrap(ParseAndValidate(text)))));
      },
      py::arg("text"));
  m.def(
      "render",
      [](const std::string& text) {
        return RenderProgram(Unwrap(Parse(text)));
      },
      py::arg("text"), "Parses a program and renders it canonically.");
  m.def(
      "run_command",
      [](const std::string& command, py::kwargs kw) {
        return Unwrap(RunCommand(command, FlagsFrom(kw)));
      },
      py::arg("command"),
      "Runs a CLI subcommand; flags as keywords (lambda_ for --lambda).");
}
