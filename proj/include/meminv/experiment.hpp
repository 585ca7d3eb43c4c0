// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

// Batch drivers shared by the command-line tool and the bindings: operand
// literals, scalar inversion runs and the size sweep.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "meminv/dynamics.hpp"
#include "meminv/embedding.hpp"
#include "meminv/report_io.hpp"

namespace meminv {

/// "10", "-3" (decimal integers, value = literal) or "0b01010" (mantissa
/// bits taken verbatim, left-padded to n). Decimal values become an n-bit
/// mantissa with exponent n, so the scalar equals the integer. Throws Parse
/// or InvalidLayout when the literal does not fit.
FixedPointScalar parse_literal(const std::string& text, int n);

struct ScalarRun {
  FixedPointScalar a;
  FixedPointScalar c;
  EmbeddingLayout layout;
  EmbedMode mode = EmbedMode::Raw;
  SimConfig config;
};

struct ScalarOutcome {
  EmbeddedInstance instance;
  DecodedSolution oracle;  // minimal solution; b_hat is meaningless if none exists
  bool oracle_exists = false;
  int exponent = 0;        // of the quotient, including any strict-mode adjustment
  Sign sign = Sign::Plus;
  Trace trace;
  SolveReport report;

  bool verified() const { return report.converged && report.identity_ok.value_or(false); }
};

/// Embeds, builds, clamps and simulates one scalar inversion.
ScalarOutcome run_scalar(const ScalarRun& run);

/// "0.00011", "-0.101 * 2^3" and similar.
std::string format_quotient(const Bits& bits, int exponent, Sign sign);

struct SweepSpec {
  std::string a = "2";
  std::string c = "1";
  std::vector<int> sizes{2, 3, 4, 5, 6};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  int n_b = -1;  // -1: n_b = n
  SimConfig config;
  unsigned jobs = 0;  // 0: hardware concurrency
};

struct SweepRow {
  int bits = 0;
  double mean_t_c = 0.0;    // over converged seeds
  double stddev_t_c = 0.0;  // population standard deviation, converged seeds
  std::size_t converged = 0;
  std::size_t runs = 0;
  std::vector<ScalarOutcome> outcomes;  // ordered like spec.seeds
};

/// One row per size, in the order given; seeds may run concurrently.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Config echo followed by `bits,mean_t_c,stddev_t_c,converged,runs,all_converged`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, const ConfigEcho& echo);

/// Evaluates `task(i)` for i in [0, count) on up to `jobs` threads; results
/// are ordered by i.
template <typename Result, typename Task>
std::vector<Result> parallel_map(std::size_t count, unsigned jobs, Task task);

}  // namespace meminv

#include "meminv/detail/parallel_map.hpp"
