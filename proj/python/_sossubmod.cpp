// Copyright 2026 The sossubmod Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sossubmod/certify.hpp"
#include "sossubmod/dsopt.hpp"
#include "sossubmod/families.hpp"
#include "sossubmod/io.hpp"
#include "sossubmod/ratio.hpp"
#include "sossubmod/regression.hpp"

namespace py = pybind11;
using namespace sossubmod;

namespace {

SubsetMask mask_of(const std::vector<int>& subset, int n) {
  std::uint32_t m = 0;
  for (int i : subset) {
    if (i < 0 || i >= n) throw py::index_error("element " + std::to_string(i) + " out of range");
    m |= 1u << i;
  }
  return SubsetMask(m);
}

SetFunction make_setfunction(int n, const std::map<std::vector<int>, std::string>& terms) {
  SetFunction::Terms t;
  for (const auto& [subset, coeff] : terms) t[mask_of(subset, n).bits] += parse_rational(coeff);
  return SetFunction(n, std::move(t));
}

std::string dump(const io::Json& j) { return j.dump(); }

ToleranceProfile tolerance(const std::string& json) {
  return json.empty() ? ToleranceProfile{} : io::tolerance_from_json(io::Json::parse(json));
}

}  // namespace

PYBIND11_MODULE(_sossubmod, m) {
  m.doc() = "Exact set functions, t-sos submodularity certificates and applications";
  m.attr("__version__") = SOSSUBMOD_VERSION;

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
  py::register_exception<NotMonotoneError>(m, "NotMonotoneError", PyExc_ValueError);

  py::class_<SetFunction>(m, "SetFunction")
      .def(py::init(&make_setfunction), py::arg("n"), py::arg("terms"),
           "Multilinear coefficients keyed by sorted element tuples; values are decimal or p/q strings.")
      .def_static(
          "from_values",
          [](int n, const std::vector<std::string>& values) {
            std::vector<Rational> v;
            v.reserve(values.size());
            for (const auto& s : values) v.push_back(parse_rational(s));
            return mle_from_values(ValueTable(n, std::move(v)));
          },
          py::arg("n"), py::arg("values"))
      .def_static(
          "from_json", [](const std::string& s) { return io::setfunction_from_json(io::Json::parse(s)); },
          py::arg("text"))
      .def_property_readonly("n", &SetFunction::n)
      .def_property_readonly("degree", &SetFunction::degree)
      .def("terms",
           [](const SetFunction& f) {
             std::map<std::vector<int>, std::string> out;
             for (const auto& [mask, c] : f.terms()) out[SubsetMask(mask).indices()] = format_rational(c);
             return out;
           })
      .def(
          "value", [](const SetFunction& f, const std::vector<int>& s) { return format_rational(f.value(mask_of(s, f.n()))); },
          py::arg("subset"))
      .def(
          "values",
          [](const SetFunction& f) {
            std::vector<std::string> out;
            for (const auto& v : values_from_mle(f).values) out.push_back(format_rational(v));
            return out;
          })
      .def(
          "evaluate", [](const SetFunction& f, const std::vector<double>& x) {
            if (static_cast<int>(x.size()) != f.n()) throw py::value_error("point has the wrong dimension");
            return f.evaluate(x);
          },
          py::arg("x"))
      .def("to_json", [](const SetFunction& f) { return dump(io::to_json(f)); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(-py::self)
      .def(py::self == py::self)
      .def("__repr__", [](const SetFunction& f) {
        return "<SetFunction n=" + std::to_string(f.n()) + " degree=" + std::to_string(f.degree()) +
               " terms=" + std::to_string(f.terms().size()) + ">";
      });

  m.def(
      "brute_force_submodular",
      [](const SetFunction& f) {
        const BruteForceResult r = brute_force_submodular(f);
        py::dict out;
        out["submodular"] = r.submodular;
        out["modular"] = r.modular;
        if (r.witness) {
          out["witness"] = py::make_tuple(r.witness->i, r.witness->j, SubsetMask(r.witness->vertex).indices(),
                                          format_rational(r.witness->second_derivative));
        }
        return out;
      },
      py::arg("f"));

  m.def(
      "certify_json",
      [](const SetFunction& f, int t, int jobs, const std::string& tol) {
        py::gil_scoped_release release;
        return dump(io::to_json(is_t_sos_submodular(f, t, tolerance(tol), jobs)));
      },
      py::arg("f"), py::arg("t"), py::arg("jobs") = 1, py::arg("tolerance") = "");

  m.def(
      "minimal_t",
      [](const SetFunction& f, int jobs, const std::string& tol) {
        MinimalTResult r;
        {
          py::gil_scoped_release release;
          r = minimal_t(f, tolerance(tol), jobs);
        }
        py::dict out;
        out["status"] = to_string(r.status);
        out["t"] = r.status == MinimalTStatus::FOUND ? py::object(py::int_(r.t)) : py::none();
        out["t_min"] = r.range.t_min;
        out["t_max"] = r.range.t_max;
        out["modular"] = r.modular;
        return out;
      },
      py::arg("f"), py::arg("jobs") = 1, py::arg("tolerance") = "");

  m.def(
      "check_characterization",
      [](const SetFunction& f, const std::string& which, int t) {
        return std::string(to_string(check_characterization(f, characterization_from_string(which), t).verdict));
      },
      py::arg("f"), py::arg("which"), py::arg("t"));

  m.def(
      "build_family", [](const std::string& spec) { return build(io::familyspec_from_json(io::Json::parse(spec))); },
      py::arg("spec_json"));
  m.def("random_setfunction", &random_setfunction, py::arg("n"), py::arg("d"), py::arg("lo"), py::arg("hi"),
        py::arg("seed"));

  m.def("gamma_star", &gamma_star_bruteforce, py::arg("f"));
  m.def(
      "gamma_trunc",
      [](const SetFunction& f, int k, int t, std::optional<double> lo, std::optional<double> hi) {
        GammaBound b;
        {
          py::gil_scoped_release release;
          b = gamma_trunc_sos(f, k, t, lo, hi);
        }
        py::dict out;
        out["gamma"] = b.gamma;
        out["m"] = b.m;
        out["M"] = b.M;
        out["status"] = to_string(b.status);
        out["residual"] = b.residual;
        return out;
      },
      py::arg("f"), py::arg("k"), py::arg("t"), py::arg("m") = py::none(), py::arg("M") = py::none());

  m.def(
      "decompose_json",
      [](const SetFunction& f, const std::string& method, int t) {
        py::gil_scoped_release release;
        if (method == "trivial") return dump(io::to_json(trivial_decomposition(f)));
        if (method == "tsos") return dump(io::to_json(tsos_irreducible_decomposition(f, t)));
        throw std::invalid_argument("method must be 'trivial' or 'tsos'");
      },
      py::arg("f"), py::arg("method"), py::arg("t") = 2);

  m.def(
      "ssp",
      [](const SetFunction& f, const std::string& decomposition, std::uint64_t seed, int max_iterations) {
        const Decomposition d = io::decomposition_from_json(io::Json::parse(decomposition));
        if (d.G - d.H != f) throw py::value_error("decomposition does not match f");
        const SspTrace tr = ssp(f, d, seed, max_iterations);
        py::list iterates;
        for (const auto& s : tr.iterates) iterates.append(s.indices());
        py::dict out;
        out["iterates"] = iterates;
        out["objective"] = tr.objective;
        out["termination"] = tr.termination;
        out["stalled_steps"] = tr.stalled_steps;
        return out;
      },
      py::arg("f"), py::arg("decomposition_json"), py::arg("seed"), py::arg("max_iterations") = 1000);

  m.def(
      "exact_min",
      [](const SetFunction& f) {
        const MinimumResult r = exact_min_bruteforce(f);
        return py::make_tuple(r.set.indices(), r.value);
      },
      py::arg("f"));

  m.def(
      "fit_json",
      [](const std::string& csv, const std::string& method, int k, int t, double lambda) {
        const Dataset d = io::dataset_from_csv(csv);
        RegressionModel model;
        {
          py::gil_scoped_release release;
          model = fit(d, {method_from_string(method), k, t, lambda, {}});
        }
        io::Json j;
        j["method"] = to_string(model.method);
        j["k"] = model.k;
        j["t"] = model.t;
        j["lambda"] = model.lambda;
        j["rmse_train"] = model.rmse_train;
        j["rmse_val"] = model.rmse_val;
        j["rmse_test"] = model.rmse_test;
        j["brute_force_submodular"] = model.brute_force_submodular;
        j["F"] = io::to_json(model.F);
        return dump(j);
      },
      py::arg("csv"), py::arg("method"), py::arg("k"), py::arg("t") = 0, py::arg("lam") = 0.0);

  m.def(
      "synthetic_csv",
      [](const std::string& kind, int n, int rows, double noise, std::uint64_t seed) {
        return io::dataset_to_csv(make_synthetic(synthetic_kind_from_string(kind), n, rows, noise, seed));
      },
      py::arg("kind"), py::arg("n"), py::arg("m"), py::arg("noise"), py::arg("seed"));
}
