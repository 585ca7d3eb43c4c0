// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "meminv/error.hpp"
#include "meminv/experiment.hpp"
#include "meminv/report_io.hpp"

using namespace meminv;
using nlohmann::json;

TEST(Json, ConvergedReportFields) {
  SolveReport r;
  r.converged = true;
  r.t_c = 12.5;
  r.decoded = make_solution(22, 2, {3, 0, 3});
  r.identity_ok = true;
  r.readout_flag = ReadoutFlag::Exact;
  r.steps = 40;
  r.final_c = 0.004;
  r.gates_ok = true;
  const auto j = json::parse(report_to_json(r));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"converged", "decoded", "final_c", "gates_ok", "identity_ok",
                                            "readout_flag", "steps", "t_c"}));
  EXPECT_EQ(j["t_c"], 12.5);
  EXPECT_EQ(j["decoded"]["b_hat"], 22);
  EXPECT_EQ(j["decoded"]["b_bits"], "010");
  EXPECT_EQ(j["decoded"]["b_f"], 6);
  EXPECT_EQ(j["decoded"]["c_f"], 2);
  EXPECT_EQ(j["readout_flag"], "exact");
  EXPECT_EQ(j["steps"], 40);
}

TEST(Json, NonConvergedUsesNulls) {
  SolveReport r;
  r.final_c = 0.7;
  const auto j = json::parse(report_to_json(r));
  EXPECT_EQ(j["converged"], false);
  EXPECT_TRUE(j["decoded"].is_null());
  EXPECT_TRUE(j["identity_ok"].is_null());
  EXPECT_TRUE(j["readout_flag"].is_null());
}

TEST(Json, LargeIntegersAreStrings) {
  SolveReport r;
  r.decoded = DecodedSolution{BigInt(1) << 80, Bits{1}, 0, 0};
  const auto j = json::parse(report_to_json(r));
  EXPECT_EQ(j["decoded"]["b_hat"], "1208925819614629174706176");
}

TEST(Csv, RoundTrip) {
  Trace t;
  t.samples = {{0.0, 1.0, {0.25, -0.5}}, {1.5, 0.125, {1.0 / 3.0, -1.0}}};
  SimConfig config;
  config.seed = 7;
  std::stringstream ss;
  write_trace_csv(ss, t, config_echo(config));
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("# model=memcomputing\n# seed=7\n", 0), 0u);
  EXPECT_NE(text.find("\nt,C,v0,v1\n"), std::string::npos);
  const auto csv = read_trace_csv(ss);
  EXPECT_EQ(csv.echo, config_echo(config));
  EXPECT_EQ(csv.columns, (std::vector<std::string>{"t", "C", "v0", "v1"}));
  ASSERT_EQ(csv.rows.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(csv.rows[i][0], t.samples[i].t);
    EXPECT_EQ(csv.rows[i][1], t.samples[i].c);
    EXPECT_EQ(csv.rows[i][2], t.samples[i].v[0]);
    EXPECT_EQ(csv.rows[i][3], t.samples[i].v[1]);
  }
}

TEST(Csv, ParseErrors) {
  for (const char* bad : {"", "x,y\n", "t,C\n1,2,3\n", "t,C\n1,abc\n", "# broken\nt,C\n"}) {
    std::stringstream ss(bad);
    EXPECT_THROW(read_trace_csv(ss), Error) << bad;
  }
}

TEST(Literals, Parse) {
  const auto a = parse_literal("3", 3);
  EXPECT_EQ(bits_to_string(a.mantissa), "011");
  EXPECT_EQ(a.exponent, 3);
  EXPECT_EQ(a.value(), 3);
  const auto b = parse_literal("-0b101", 3);
  EXPECT_EQ(b.sign, Sign::Minus);
  EXPECT_EQ(b.value(), -5);
  EXPECT_EQ(parse_literal("+0b1", 4).value(), 1);
  EXPECT_THROW(parse_literal("12a", 4), Error);
  EXPECT_THROW(parse_literal("", 4), Error);
  EXPECT_THROW(parse_literal("-", 4), Error);
  EXPECT_THROW(parse_literal("9", 3), Error);
  EXPECT_THROW(parse_literal("1", 0), Error);
}

TEST(Literals, FormatQuotient) {
  EXPECT_EQ(format_quotient(Bits{0, 1, 0}, 0, Sign::Plus), "0.010");
  EXPECT_EQ(format_quotient(Bits{1, 1}, 0, Sign::Minus), "-0.11");
  EXPECT_EQ(format_quotient(Bits{1, 1, 0}, 1, Sign::Plus), "0.110 * 2^1");
  EXPECT_EQ(format_quotient(Bits{1}, -2, Sign::Plus), "0.1 * 2^-2");
}

TEST(Scalar, RunAndValidate) {
  ScalarRun spec{parse_literal("3", 3), parse_literal("1", 3), {3, 0, 3}, EmbedMode::Raw, SimConfig{}};
  const auto out = run_scalar(spec);
  EXPECT_TRUE(out.verified());
  EXPECT_TRUE(out.oracle_exists);
  const auto all = enumerate_solutions(out.instance);
  EXPECT_NE(std::find(all.begin(), all.end(), *out.report.decoded), all.end());
  EXPECT_EQ(out.oracle, all.front());
  EXPECT_EQ(out.exponent, 0);
  spec.c = parse_literal("5", 3);
  EXPECT_THROW(run_scalar(spec), Error);
}

TEST(Sweep, SingleSize) {
  SweepSpec spec;
  spec.a = "3";
  spec.c = "1";
  spec.sizes = {3};
  spec.seeds = {0, 1, 2};
  spec.jobs = 2;
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].bits, 3);
  EXPECT_EQ(rows[0].runs, 3u);
  EXPECT_EQ(rows[0].converged, 3u);
  double mean = 0;
  for (const auto& o : rows[0].outcomes) mean += o.report.t_c / 3;
  EXPECT_NEAR(rows[0].mean_t_c, mean, 1e-9 * mean);
  EXPECT_GE(rows[0].stddev_t_c, 0.0);

  spec.jobs = 1;
  const auto again = run_sweep(spec);
  EXPECT_EQ(again[0].mean_t_c, rows[0].mean_t_c);

  std::stringstream ss;
  write_sweep_csv(ss, rows, config_echo(spec.config));
  EXPECT_NE(ss.str().find("\nbits,mean_t_c,stddev_t_c,converged,runs,all_converged\n3,"), std::string::npos);
}
