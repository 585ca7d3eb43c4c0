// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include "meminv/report_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "meminv/error.hpp"

namespace meminv {

namespace {

using nlohmann::ordered_json;

ordered_json big(const BigInt& v) {
  if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return v.convert_to<std::uint64_t>();
  return v.str();
}

ordered_json rational(const Rational& r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

ordered_json solution(const DecodedSolution& d) {
  return {{"b_hat", big(d.b_hat)}, {"b_bits", bits_to_string(d.b_bits)}, {"b_f", big(d.b_f)}, {"c_f", big(d.c_f)}};
}

std::string fixed_text(const FixedPointScalar& s) {
  return std::string(s.sign == Sign::Minus ? "-" : "+") + "2^" + std::to_string(s.exponent) + " * 0." +
         bits_to_string(s.mantissa);
}

ordered_json column(const ColumnReport& c) {
  ordered_json j{{"column", c.column},   {"seed", c.seed},     {"converged", c.converged}, {"t_c", number(c.t_c)},
                 {"steps", c.steps},     {"final_c", number(c.final_c)}, {"gates_ok", c.gates_ok}};
  if (c.decoded) {
    const auto& d = *c.decoded;
    j["decoded"] = {{"x", {rational(d.x[0]), rational(d.x[1])}},
                    {"slack", {big(d.slack[0]), big(d.slack[1])}},
                    {"identity_ok", d.identity_ok}};
  } else {
    j["decoded"] = nullptr;
  }
  return j;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error(ErrorCode::Io, "cannot format number");
  return std::string(buf, end);
}

ConfigEcho config_echo(const SimConfig& c) {
  ConfigEcho e{
      {"model", std::string(to_string(c.model))},
      {"seed", std::to_string(c.seed)},
      {"epsilon", format_double(c.epsilon)},
      {"t_max", format_double(c.t_max)},
      {"dt_initial", format_double(c.dt_initial)},
      {"record_every", std::to_string(c.record_every)},
      {"record_voltages", c.record_voltages ? "true" : "false"},
  };
  if (c.model == ModelKind::GradientFlow) {
    e.emplace_back("v_cap", format_double(c.v_cap));
    e.emplace_back("gamma", format_double(c.gradient.gamma));
    e.emplace_back("x_cap", format_double(c.gradient.x_cap));
    e.emplace_back("stability", format_double(c.gradient.stability));
  } else {
    const auto& m = c.memcomputing;
    e.emplace_back("alpha", format_double(m.alpha));
    e.emplace_back("beta", format_double(m.beta));
    e.emplace_back("gamma", format_double(m.gamma));
    e.emplace_back("delta", format_double(m.delta));
    e.emplace_back("mem_epsilon", format_double(m.epsilon));
    e.emplace_back("zeta", format_double(m.zeta));
    e.emplace_back("x_cap_per_clause", format_double(m.x_cap_per_clause));
    e.emplace_back("dv_max", format_double(m.dv_max));
  }
  return e;
}

std::string report_to_json(const SolveReport& r) {
  ordered_json j;
  j["converged"] = r.converged;
  j["t_c"] = number(r.t_c);
  j["decoded"] = r.decoded ? solution(*r.decoded) : ordered_json(nullptr);
  j["identity_ok"] = r.identity_ok ? ordered_json(*r.identity_ok) : ordered_json(nullptr);
  j["readout_flag"] = r.readout_flag ? ordered_json(std::string(to_string(*r.readout_flag))) : ordered_json(nullptr);
  j["steps"] = r.steps;
  j["final_c"] = number(r.final_c);
  j["gates_ok"] = r.gates_ok;
  return j.dump(2) + "\n";
}

std::string matrix_result_to_json(const MatrixInverseResult& r) {
  ordered_json j;
  if (r.x) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < 2; ++i) {
      rows.push_back({rational(r.x->value(i, 0)), rational(r.x->value(i, 1))});
    }
    j["x"] = rows;
    j["x_fixed"] = {{fixed_text(r.x->a11), fixed_text(r.x->a12)}, {fixed_text(r.x->a21), fixed_text(r.x->a22)}};
  } else {
    j["x"] = nullptr;
    j["x_fixed"] = nullptr;
  }
  j["columns"] = {column(r.columns[0]), column(r.columns[1])};
  j["residual"] = r.residual ? rational(*r.residual) : ordered_json(nullptr);
  j["kappa_bound"] = rational(r.kappa_bound);
  j["residual_ok"] = r.residual_ok;
  return j.dump(2) + "\n";
}

void write_trace_csv(std::ostream& out, const Trace& trace, const ConfigEcho& echo) {
  for (const auto& [key, value] : echo) out << "# " << key << '=' << value << '\n';
  const std::size_t nodes = trace.samples.empty() ? 0 : trace.samples.front().v.size();
  out << "t,C";
  for (std::size_t i = 0; i < nodes; ++i) out << ",v" << i;
  out << '\n';
  for (const auto& s : trace.samples) {
    out << format_double(s.t) << ',' << format_double(s.c);
    for (double v : s.v) out << ',' << format_double(v);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing trace");
}

TraceCsv read_trace_csv(std::istream& in) {
  TraceCsv csv;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::Parse, "trace line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail("config line without '='");
      csv.echo.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (csv.columns.empty()) {
      if (cells.size() < 2 || cells[0] != "t" || cells[1] != "C") fail("expected header starting with t,C");
      csv.columns = std::move(cells);
      continue;
    }
    if (cells.size() != csv.columns.size()) fail("expected " + std::to_string(csv.columns.size()) + " cells");
    std::vector<double> row;
    for (const auto& cell : cells) {
      double v = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) fail("bad number '" + cell + "'");
      row.push_back(v);
    }
    csv.rows.push_back(std::move(row));
  }
  if (csv.columns.empty()) fail("missing header");
  return csv;
}

}  // namespace meminv
