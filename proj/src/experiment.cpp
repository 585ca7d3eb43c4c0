// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include "meminv/experiment.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>

#include "meminv/circuit.hpp"
#include "meminv/error.hpp"

namespace meminv {

FixedPointScalar parse_literal(const std::string& text, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidLayout, "width must be at least 1");
  std::string body = text;
  Sign sign = Sign::Plus;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    sign = body[0] == '-' ? Sign::Minus : Sign::Plus;
    body.erase(0, 1);
  }
  if (body.empty()) throw Error(ErrorCode::Parse, "empty literal '" + text + "'");

  BigInt magnitude;
  if (body.size() > 2 && body[0] == '0' && (body[1] == 'b' || body[1] == 'B')) {
    magnitude = bits_to_int(bits_from_string(body.substr(2)));
  } else {
    for (char ch : body) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) throw Error(ErrorCode::Parse, "bad literal '" + text + "'");
    }
    magnitude = BigInt(body);
  }
  return FixedPointScalar{sign, n, int_to_bits(magnitude, n)};
}

std::string format_quotient(const Bits& bits, int exponent, Sign sign) {
  std::string out = (sign == Sign::Minus ? "-0." : "0.") + bits_to_string(bits);
  if (exponent != 0) out += " * 2^" + std::to_string(exponent);
  return out;
}

ScalarOutcome run_scalar(const ScalarRun& spec) {
  FixedPointScalar a = spec.a;
  FixedPointScalar c = spec.c;
  if (spec.mode == EmbedMode::Strict) {
    a = normalize(a.sign, a.exponent, a.mantissa);
    c = normalize(c.sign, c.exponent, c.mantissa);
  }
  ScalarOutcome out;
  out.instance = build_embedding(a, c, spec.layout, spec.mode);
  if (out.instance.c_int >= out.instance.a_int) {
    throw Error(ErrorCode::InvalidLayout, "the mantissa of c must be below that of a (normalize, or shift c)");
  }
  out.exponent = solve_exponent(a.exponent, c.exponent) + out.instance.exponent_adjust;
  out.sign = sign_of_quotient(a.sign, c.sign);
  try {
    out.oracle = oracle_divide(out.instance);
    out.oracle_exists = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SlackOverflow && e.code() != ErrorCode::QuotientOverflow) throw;
  }
  const Netlist netlist = clamp_instance(build_inversion_circuit(spec.layout), out.instance);
  auto [trace, report] = run(netlist, spec.layout, spec.config);
  out.trace = std::move(trace);
  out.report = std::move(report);
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  struct Job {
    std::size_t row;
    ScalarRun run;
  };
  std::vector<Job> jobs;
  std::vector<SweepRow> rows;
  for (int n : spec.sizes) {
    SweepRow row;
    row.bits = n;
    const EmbeddingLayout layout{n, 0, spec.n_b < 0 ? n : spec.n_b};
    layout.validate();
    const auto a = parse_literal(spec.a, n);
    const auto c = parse_literal(spec.c, n);
    for (auto seed : spec.seeds) {
      ScalarRun run{a, c, layout, EmbedMode::Raw, spec.config};
      run.config.seed = seed;
      jobs.push_back({rows.size(), run});
    }
    rows.push_back(std::move(row));
  }
  auto outcomes = parallel_map<ScalarOutcome>(jobs.size(), spec.jobs, [&](std::size_t i) { return run_scalar(jobs[i].run); });
  for (std::size_t i = 0; i < jobs.size(); ++i) rows[jobs[i].row].outcomes.push_back(std::move(outcomes[i]));

  for (auto& row : rows) {
    row.runs = row.outcomes.size();
    double sum = 0.0;
    for (const auto& o : row.outcomes) {
      if (o.verified()) {
        ++row.converged;
        sum += o.report.t_c;
      }
    }
    if (row.converged == 0) {
      row.mean_t_c = row.stddev_t_c = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    row.mean_t_c = sum / static_cast<double>(row.converged);
    double var = 0.0;
    for (const auto& o : row.outcomes) {
      if (o.verified()) var += (o.report.t_c - row.mean_t_c) * (o.report.t_c - row.mean_t_c);
    }
    row.stddev_t_c = std::sqrt(var / static_cast<double>(row.converged));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, const ConfigEcho& echo) {
  for (const auto& [key, value] : echo) out << "# " << key << '=' << value << '\n';
  out << "bits,mean_t_c,stddev_t_c,converged,runs,all_converged\n";
  for (const auto& r : rows) {
    out << r.bits << ',' << format_double(r.mean_t_c) << ',' << format_double(r.stddev_t_c) << ',' << r.converged
        << ',' << r.runs << ',' << (r.converged == r.runs ? 1 : 0) << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing sweep table");
}

}  // namespace meminv
