// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

// Serialization of run artifacts: SolveReport as JSON, traces as CSV under
// a "# key=value" configuration header.

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "meminv/dynamics.hpp"
#include "meminv/linear2x2.hpp"

namespace meminv {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Shortest decimal text that reads back as the same double.
std::string format_double(double value);

/// Every simulation parameter, defaults included, in a fixed order.
ConfigEcho config_echo(const SimConfig& config);

std::string report_to_json(const SolveReport& report);
std::string matrix_result_to_json(const MatrixInverseResult& result);

/// Header `t,C`, plus one `v<id>` column per node when voltages were recorded.
void write_trace_csv(std::ostream& out, const Trace& trace, const ConfigEcho& echo);

struct TraceCsv {
  ConfigEcho echo;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Throws Parse on malformed input.
TraceCsv read_trace_csv(std::istream& in);

}  // namespace meminv
