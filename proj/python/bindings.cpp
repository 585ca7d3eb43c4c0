// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include <optional>
#include <sstream>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "meminv/circuit.hpp"
#include "meminv/dynamics.hpp"
#include "meminv/error.hpp"
#include "meminv/experiment.hpp"
#include "meminv/linear2x2.hpp"
#include "meminv/report_io.hpp"
#include "meminv/verify.hpp"

namespace py = pybind11;
using namespace meminv;

namespace {

py::int_ to_py(const BigInt& v) { return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(v.str().c_str(), nullptr, 10))); }

BigInt from_py(const py::int_& v) { return BigInt(py::str(v).cast<std::string>()); }

EmbeddingLayout layout_of(int n, std::optional<int> n_b) { return EmbeddingLayout{n, 0, n_b.value_or(n)}; }

py::dict solution_dict(const DecodedSolution& d) {
  py::dict out;
  out["b_hat"] = to_py(d.b_hat);
  out["b_bits"] = bits_to_string(d.b_bits);
  out["b_f"] = to_py(d.b_f);
  out["c_f"] = to_py(d.c_f);
  return out;
}

py::object parse_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

SimConfig make_config(std::uint64_t seed, double epsilon, double t_max, const std::string& model,
                      std::size_t record_every) {
  SimConfig config;
  config.seed = seed;
  config.epsilon = epsilon;
  config.t_max = t_max;
  config.model = model_kind_from_string(model);
  config.record_every = record_every;
  config.validate();
  return config;
}

Netlist inversion_netlist(int n, std::optional<int> n_b, std::optional<py::int_> a, std::optional<py::int_> c) {
  const auto layout = layout_of(n, n_b);
  Netlist net = build_inversion_circuit(layout);
  if (a || c) {
    if (!a || !c) throw Error(ErrorCode::InvalidLayout, "clamping needs both a and c");
    net = clamp_instance(net, EmbeddedInstance{from_py(*a), from_py(*c), layout});
  }
  return net;
}

}  // namespace

PYBIND11_MODULE(_meminv, m) {
  m.doc() = "Fixed-point inversion with self-organizing logic circuits";

  py::register_exception<Error>(m, "MeminvError", PyExc_ValueError);

  m.def(
      "oracle_divide",
      [](const py::int_& a, const py::int_& c, int n, std::optional<int> n_b) {
        return solution_dict(oracle_divide(EmbeddedInstance{from_py(a), from_py(c), layout_of(n, n_b)}));
      },
      py::arg("a"), py::arg("c"), py::arg("n"), py::arg("n_b") = py::none(),
      "Minimal (b_hat, c_f) with a * b_hat = c * 2^(n + n_b) + c_f.");

  m.def(
      "enumerate_solutions",
      [](const py::int_& a, const py::int_& c, int n, std::optional<int> n_b) {
        py::list out;
        for (const auto& s : enumerate_solutions(EmbeddedInstance{from_py(a), from_py(c), layout_of(n, n_b)}))
          out.append(solution_dict(s));
        return out;
      },
      py::arg("a"), py::arg("c"), py::arg("n"), py::arg("n_b") = py::none());

  m.def(
      "gate_census",
      [](int n, std::optional<int> n_b) {
        const auto g = count_gates(build_inversion_circuit(layout_of(n, n_b)));
        py::dict out;
        out["AND"] = g.and_count;
        out["OR"] = g.or_count;
        out["XOR"] = g.xor_count;
        out["total"] = g.total();
        return out;
      },
      py::arg("n"), py::arg("n_b") = py::none(), "Gate counts of the inversion circuit.");

  m.def(
      "export_netlist",
      [](int n, std::optional<int> n_b, std::optional<py::int_> a, std::optional<py::int_> c) {
        return export_netlist(inversion_netlist(n, n_b, a, c));
      },
      py::arg("n"), py::arg("n_b") = py::none(), py::arg("a") = py::none(), py::arg("c") = py::none(),
      "Netlist text of the inversion circuit, clamped when a and c are given.");

  m.def(
      "roundtrip_netlist", [](const std::string& text) { return export_netlist(import_netlist(text)); },
      py::arg("text"), "Parses netlist text and writes it back.");

  m.def(
      "count_assignments",
      [](const py::int_& a, const py::int_& c, int n, std::optional<int> n_b) {
        const auto layout = layout_of(n, n_b);
        const EmbeddedInstance inst{from_py(a), from_py(c), layout};
        const auto report = cross_check(clamp_instance(build_inversion_circuit(layout), inst), inst);
        return report.assignments;
      },
      py::arg("a"), py::arg("c"), py::arg("n"), py::arg("n_b") = py::none(),
      "Number of satisfying assignments of the clamped circuit, checked against the oracle.");

  m.def(
      "invert",
      [](const std::string& a, const std::string& c, int n, std::optional<int> n_b, std::uint64_t seed,
         double epsilon, double t_max, const std::string& model, bool normalize, std::size_t record_every) {
        ScalarRun spec{parse_literal(a, n), parse_literal(c, n), layout_of(n, n_b),
                       normalize ? EmbedMode::Strict : EmbedMode::Raw,
                       make_config(seed, epsilon, t_max, model, record_every)};
        ScalarOutcome out;
        {
          py::gil_scoped_release release;
          out = run_scalar(spec);
        }
        py::dict result = parse_json(report_to_json(out.report));
        result["exponent"] = out.exponent;
        result["sign"] = out.sign == Sign::Minus ? -1 : 1;
        result["oracle"] = out.oracle_exists ? py::object(solution_dict(out.oracle)) : py::object(py::none());
        result["verified"] = out.verified();
        py::list trace;
        for (const auto& s : out.trace.samples) trace.append(py::make_tuple(s.t, s.c));
        result["trace"] = trace;
        return result;
      },
      py::arg("a"), py::arg("c") = "1", py::arg("n") = 5, py::arg("n_b") = py::none(), py::arg("seed") = 0,
      py::arg("epsilon") = 0.01, py::arg("t_max") = 50000.0, py::arg("model") = "memcomputing",
      py::arg("normalize") = false, py::arg("record_every") = 100,
      "Runs the inversion circuit and returns the solve report, with the (t, C) trace.");

  m.def(
      "invert_matrix",
      [](const std::vector<long long>& entries, int n, int n_b, std::uint64_t seed, double t_max) {
        if (entries.size() != 4) throw Error(ErrorCode::InvalidLayout, "expected four entries a11, a12, a21, a22");
        const Matrix2 a{fixed_from_integer(entries[0], n), fixed_from_integer(entries[1], n),
                        fixed_from_integer(entries[2], n), fixed_from_integer(entries[3], n)};
        const auto config = make_config(seed, 0.01, t_max, "memcomputing", 100);
        MatrixInverseResult r;
        {
          py::gil_scoped_release release;
          r = invert_matrix(a, EmbeddingLayout{n, 0, n_b}, config);
        }
        return parse_json(matrix_result_to_json(r));
      },
      py::arg("entries"), py::arg("n") = 3, py::arg("n_b") = 0, py::arg("seed") = 0, py::arg("t_max") = 50000.0,
      "Inverts a 2x2 integer matrix, one circuit per column.");
}
