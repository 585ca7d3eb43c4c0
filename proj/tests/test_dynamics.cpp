// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "meminv/dynamics.hpp"
#include "meminv/error.hpp"
#include "meminv/verify.hpp"

using namespace meminv;

namespace {

Netlist clamped_inversion(int a, int c, const EmbeddingLayout& layout) {
  return clamp_instance(build_inversion_circuit(layout), EmbeddedInstance{BigInt(a), BigInt(c), layout});
}

// Penalty by listing all eight corners and keeping the satisfying ones.
double corner_penalty(GateKind kind, const Triple& v) {
  double best = 1e300;
  for (int m = 0; m < 8; ++m) {
    const bool b[3] = {(m & 4) != 0, (m & 2) != 0, (m & 1) != 0};
    if (!gate_holds(kind, b[0], b[1], b[2])) continue;
    double d = 0;
    for (int i = 0; i < 3; ++i) d += (v[i] - (b[i] ? 1.0 : -1.0)) * (v[i] - (b[i] ? 1.0 : -1.0));
    best = std::min(best, d / 4);
  }
  return best;
}

// Distance between the two smallest corner distances; small means near a
// Voronoi boundary where the penalty is not differentiable.
double boundary_margin(GateKind kind, const Triple& v) {
  std::vector<double> d;
  for (const auto& s : satisfying_corners(kind)) {
    double x = 0;
    for (int i = 0; i < 3; ++i) x += (v[i] - s[i]) * (v[i] - s[i]);
    d.push_back(x);
  }
  std::sort(d.begin(), d.end());
  return d[1] - d[0];
}

SimState corner_state(const Netlist& net, const std::vector<std::uint8_t>& bits, SimConfig config) {
  config.model = ModelKind::GradientFlow;
  auto state = init_state(net, config);
  for (std::size_t i = 0; i < bits.size(); ++i) state.v[i] = bits[i] ? 1.0 : -1.0;
  return state;
}

}  // namespace

TEST(Penalty, Examples) {
  EXPECT_DOUBLE_EQ(gate_penalty(GateKind::And, {1, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(gate_penalty(GateKind::And, {1, 1, -1}), 1.0);
  EXPECT_DOUBLE_EQ(gate_penalty(GateKind::Xor, {0, 0, 0}), 0.75);
}

TEST(Penalty, ZeroExactlyOnSatisfyingCorners) {
  for (auto kind : {GateKind::And, GateKind::Or, GateKind::Xor}) {
    for (int m = 0; m < 8; ++m) {
      const Triple v{m & 4 ? 1.0 : -1.0, m & 2 ? 1.0 : -1.0, m & 1 ? 1.0 : -1.0};
      EXPECT_EQ(gate_penalty(kind, v) == 0.0, gate_holds(kind, m & 4, m & 2, m & 1));
    }
  }
}

TEST(Penalty, MatchesCornerEnumeration) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (auto kind : {GateKind::And, GateKind::Or, GateKind::Xor}) {
    for (int k = 0; k < 1000; ++k) {
      const Triple v{u(rng), u(rng), u(rng)};
      EXPECT_NEAR(gate_penalty(kind, v), corner_penalty(kind, v), 1e-12);
    }
  }
}

TEST(Penalty, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const double h = 1e-6;
  for (auto kind : {GateKind::And, GateKind::Or, GateKind::Xor}) {
    int checked = 0;
    while (checked < 100) {
      const Triple v{u(rng), u(rng), u(rng)};
      if (boundary_margin(kind, v) < 1e-3) continue;
      const auto g = gate_penalty_gradient(kind, v);
      for (int i = 0; i < 3; ++i) {
        Triple hi = v, lo = v;
        hi[i] += h;
        lo[i] -= h;
        const double fd = (gate_penalty(kind, hi) - gate_penalty(kind, lo)) / (2 * h);
        EXPECT_LE(std::abs(fd - g[i]), 1e-5 * std::max(1.0, std::abs(g[i])));
      }
      ++checked;
    }
  }
}

TEST(Metric, Examples) {
  Netlist net;
  const auto n = net.add_nodes(3);
  net.add_gate(GateKind::And, n[0], n[1], n[2]);
  SimState s;
  s.v = {1, -1, 1};
  EXPECT_DOUBLE_EQ(convergence_metric(net, s), 0.0);
  s.v = {1, 0.2, -1};
  EXPECT_NEAR(convergence_metric(net, s), 0.8, 1e-15);
  s.v = {0, 0, 0};
  EXPECT_DOUBLE_EQ(convergence_metric(net, s), 1.0);
}

TEST(Metric, IgnoresNodesOffGates) {
  Netlist net;
  const auto n = net.add_nodes(4);
  net.add_gate(GateKind::Or, n[0], n[1], n[2]);
  SimState s;
  s.v = {1, 1, 1, 0};
  EXPECT_DOUBLE_EQ(convergence_metric(net, s), 0.0);
}

TEST(InitState, DeterministicAndClamped) {
  const EmbeddingLayout layout{3, 0, 3};
  const auto net = clamped_inversion(3, 1, layout);
  SimConfig config;
  config.seed = 42;
  const auto s1 = init_state(net, config);
  const auto s2 = init_state(net, config);
  EXPECT_EQ(s1, s2);
  config.seed = 43;
  EXPECT_NE(init_state(net, config).v, s1.v);
  for (const auto& c : net.clamps()) EXPECT_EQ(s1.v[index(c.node)], c.level);
  for (std::size_t i = 0; i < s1.v.size(); ++i) {
    EXPECT_GE(s1.v[i], -1.0);
    EXPECT_LE(s1.v[i], 1.0);
  }
  for (double x : s1.x) EXPECT_EQ(x, 1.0);
  for (double s : s1.s) EXPECT_EQ(s, 0.5);
}

TEST(InitState, UniformMean) {
  Netlist net;
  net.add_nodes(10000);
  SimConfig config;
  config.seed = 2024;
  const auto s = init_state(net, config);
  double sum = 0;
  for (double v : s.v) {
    EXPECT_GT(v, -1.0);
    EXPECT_LT(v, 1.0);
    sum += v;
  }
  EXPECT_LT(std::abs(sum / 10000.0), 0.05);
}

TEST(Step, SatisfiedCornerIsFixed) {
  Netlist net;
  const auto n = net.add_nodes(5);
  net.add_gate(GateKind::And, n[0], n[1], n[2]);
  net.add_gate(GateKind::Xor, n[2], n[3], n[4]);
  SimConfig config;
  const auto state = corner_state(net, {1, 0, 0, 1, 1}, config);
  for (auto kind : {ModelKind::GradientFlow, ModelKind::Memcomputing}) {
    config.model = kind;
    const auto model = make_model(net, config);
    auto start = init_state(*model, 0);
    start.v = state.v;
    EXPECT_EQ(step(*model, start, 0.5).v, start.v) << to_string(kind);
  }
  EXPECT_EQ(step(net, state, 0.5).v, state.v);
}

TEST(Step, OutputMovesTowardCorner) {
  Netlist net;
  const auto n = net.add_nodes(3);
  net.add_gate(GateKind::And, n[0], n[1], n[2]);
  net.clamp(n[0], 1);
  net.clamp(n[1], 1);
  for (auto kind : {ModelKind::GradientFlow, ModelKind::Memcomputing}) {
    SimConfig config;
    config.model = kind;
    const auto model = make_model(net, config);
    auto state = init_state(*model, 0);
    state.v[2] = -0.5;
    const auto next = step(*model, state, 0.01);
    EXPECT_GT(next.v[2], -0.5) << to_string(kind);
    EXPECT_EQ(next.v[0], 1.0);
    EXPECT_EQ(next.v[1], 1.0);
  }
}

TEST(Step, ZeroDtIsIdentity) {
  const auto net = clamped_inversion(3, 1, {3, 0, 3});
  SimConfig config;
  config.model = ModelKind::GradientFlow;
  const auto s = init_state(net, config);
  EXPECT_EQ(step(net, s, 0.0), s);
  EXPECT_THROW(step(net, s, -1.0), Error);
}

TEST(Step, RejectsStateOfAnotherModel) {
  const auto net = clamped_inversion(3, 1, {3, 0, 3});
  const auto s = init_state(net, SimConfig{});
  try {
    step(net, s, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidLayout);
  }
}

TEST(Step, NonFiniteDetected) {
  Netlist net;
  const auto n = net.add_nodes(3);
  net.add_gate(GateKind::Or, n[0], n[1], n[2]);
  SimConfig config;
  config.model = ModelKind::GradientFlow;
  auto s = init_state(net, config);
  s.v[0] = std::numeric_limits<double>::quiet_NaN();
  try {
    step(net, s, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
}

TEST(Step, ClampsStayExactAndBoxesHold) {
  const auto net = clamped_inversion(5, 2, {3, 0, 3});
  for (auto kind : {ModelKind::GradientFlow, ModelKind::Memcomputing}) {
    SimConfig config;
    config.model = kind;
    const auto model = make_model(net, config);
    auto state = init_state(*model, 9);
    Derivative d;
    for (int k = 0; k < 2000; ++k) {
      model->derivatives(state, d);
      state = step(*model, state, std::min(0.5, model->max_step(state, d)));
      for (const auto& c : net.clamps()) ASSERT_EQ(state.v[index(c.node)], c.level);
      for (double v : state.v) ASSERT_LE(std::abs(v), config.v_cap);
      for (double x : state.x) ASSERT_GE(x, 1.0);
      for (double s : state.s) {
        ASSERT_GE(s, 0.0);
        ASSERT_LE(s, 1.0);
      }
    }
  }
}

TEST(Memcomputing, ClausesPerGate) {
  Netlist net;
  const auto n = net.add_nodes(3);
  net.add_gate(GateKind::And, n[0], n[1], n[2]);
  EXPECT_EQ(MemcomputingModel(net).clause_count(), 4u);
  // XOR(x, x) = z leaves two reachable violating corners.
  Netlist tied;
  const auto m = tied.add_nodes(2);
  tied.add_gate(GateKind::Xor, m[0], m[0], m[1]);
  EXPECT_EQ(MemcomputingModel(tied).clause_count(), 2u);
}

TEST(Memcomputing, ConstantDriverSettlesToZero) {
  Netlist net;
  const auto m = net.add_nodes(2);
  net.add_gate(GateKind::Xor, m[0], m[0], m[1]);
  SimConfig config;
  const auto r = integrate(net, config);
  ASSERT_TRUE(r.converged);
  EXPECT_LT(r.state.v[1], 0.0);
}

TEST(Models, KindNames) {
  EXPECT_EQ(model_kind_from_string("memcomputing"), ModelKind::Memcomputing);
  EXPECT_EQ(model_kind_from_string("gradient"), ModelKind::GradientFlow);
  EXPECT_EQ(to_string(ModelKind::GradientFlow), "gradient");
  EXPECT_THROW(model_kind_from_string("spice"), Error);
}

TEST(Config, Validation) {
  SimConfig c;
  EXPECT_NO_THROW(c.validate());
  c.epsilon = 0;
  EXPECT_THROW(c.validate(), Error);
  c = SimConfig{};
  c.t_max = -1;
  EXPECT_THROW(c.validate(), Error);
  c = SimConfig{};
  c.dt_initial = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Decode, ThresholdAndRegisters) {
  const EmbeddingLayout layout{3, 0, 2};
  const auto net = clamped_inversion(5, 2, layout);
  SimState s = init_state(net, SimConfig{});
  for (auto id : net.reg("b")) s.v[index(id)] = 1.0;
  for (auto id : net.reg("b_f")) s.v[index(id)] = 0.0;  // ties read as 0
  for (auto id : net.reg("c_f")) s.v[index(id)] = -0.3;
  const auto d = decode(s, net, layout);
  EXPECT_EQ(bits_to_string(d.b_bits), "111");
  EXPECT_EQ(d.b_f, 0);
  EXPECT_EQ(d.c_f, 0);
  EXPECT_EQ(d.b_hat, 28);
}

TEST(Run, SmallInstanceConvergesToOracle) {
  const EmbeddingLayout layout{3, 0, 3};
  const auto net = clamped_inversion(3, 1, layout);
  SimConfig config;
  config.seed = 0;
  const auto [trace, report] = run(net, layout, config);
  ASSERT_TRUE(report.converged);
  EXPECT_TRUE(*report.identity_ok);
  EXPECT_TRUE(report.gates_ok);
  EXPECT_EQ(bits_to_string(report.decoded->b_bits), "010");
  EXPECT_LE(report.final_c, config.epsilon);
  EXPECT_GT(report.steps, 0u);
  ASSERT_GE(trace.samples.size(), 2u);
  for (std::size_t i = 1; i < trace.samples.size(); ++i) EXPECT_LT(trace.samples[i - 1].t, trace.samples[i].t);
  EXPECT_EQ(trace.samples.back().c, report.final_c);
  EXPECT_EQ(trace.samples.back().t, report.t_c);
}

TEST(Run, Deterministic) {
  const EmbeddingLayout layout{3, 0, 3};
  const auto net = clamped_inversion(5, 3, layout);
  SimConfig config;
  config.seed = 5;
  config.record_every = 7;
  config.record_voltages = true;
  const auto a = run(net, layout, config);
  const auto b = run(net, layout, config);
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second.steps, b.second.steps);
  EXPECT_EQ(a.second.t_c, b.second.t_c);
  EXPECT_EQ(a.second.decoded, b.second.decoded);
  EXPECT_EQ(a.first.samples.front().v.size(), net.node_count());
}

TEST(Run, SoundOnSmallInstances) {
  // Converged runs decode to a satisfying assignment and an oracle solution,
  // with the penalty near zero.
  for (int n = 2; n <= 3; ++n) {
    const EmbeddingLayout layout{n, 0, n};
    for (int a = 2; a < (1 << n); ++a) {
      for (int c = 1; c < a; ++c) {
        const auto net = clamped_inversion(a, c, layout);
        const auto instance = EmbeddedInstance{BigInt(a), BigInt(c), layout};
        const auto sat = brute_force_sat(net);
        for (std::uint64_t seed = 0; seed < 2; ++seed) {
          SimConfig config;
          config.seed = seed;
          const auto result = integrate(net, config);
          ASSERT_TRUE(result.converged) << a << "/" << c << " seed " << seed;
          const auto bits = threshold(result.state);
          EXPECT_TRUE(gates_satisfied(net, bits));
          const auto d = decode(result.state, net, layout);
          EXPECT_TRUE(verify_identity(d, instance));
          SatAssignment mine;
          for (std::size_t i = 0; i < bits.size(); ++i) {
            const auto id = NodeId(static_cast<std::uint32_t>(i));
            if (!net.is_clamped(id)) mine.bits.emplace(id, bits[i]);
          }
          EXPECT_TRUE(std::binary_search(sat.begin(), sat.end(), mine));
          EXPECT_LE(total_penalty(net, result.state), 3 * config.epsilon * config.epsilon * net.gates().size());
        }
      }
    }
  }
}

TEST(Run, UnsatisfiableNeverConverges) {
  const EmbeddingLayout layout{3, 0, 0};
  const auto net = clamped_inversion(3, 1, layout);
  for (auto kind : {ModelKind::Memcomputing, ModelKind::GradientFlow}) {
    SimConfig config;
    config.model = kind;
    config.t_max = kind == ModelKind::GradientFlow ? 100 : 300;
    const auto [trace, report] = run(net, layout, config);
    EXPECT_FALSE(report.converged);
    EXPECT_FALSE(report.decoded.has_value());
    EXPECT_FALSE(report.identity_ok.has_value());
    EXPECT_GT(report.final_c, 0.0);
    EXPECT_GE(trace.samples.back().t, config.t_max);
  }
}

TEST(Run, GradientFlowIsSoundWhenItConverges) {
  const EmbeddingLayout layout{2, 0, 2};
  const auto net = clamped_inversion(3, 2, layout);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    SimConfig config;
    config.model = ModelKind::GradientFlow;
    config.seed = seed;
    config.t_max = 100;
    const auto [trace, report] = run(net, layout, config);
    if (report.converged) {
      EXPECT_TRUE(*report.identity_ok);
      EXPECT_TRUE(report.gates_ok);
    }
  }
}
