// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "meminv/dynamics.hpp"
#include "meminv/error.hpp"
#include "meminv/verify.hpp"

using namespace meminv;

namespace {

EmbeddedInstance instance(int a, int c, const EmbeddingLayout& layout) {
  return EmbeddedInstance{BigInt(a), BigInt(c), layout};
}

Netlist clamped(int a, int c, const EmbeddingLayout& layout) {
  return clamp_instance(build_inversion_circuit(layout), instance(a, c, layout));
}

}  // namespace

TEST(BruteForce, ClampedAndGate) {
  Netlist net;
  const auto n = net.add_nodes(3);
  net.add_gate(GateKind::And, n[0], n[1], n[2]);
  net.clamp(n[2], 1);
  const auto sols = brute_force_sat(net);
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_EQ(sols[0].bits.at(n[0]), 1);
  EXPECT_EQ(sols[0].bits.at(n[1]), 1);
  EXPECT_FALSE(sols[0].bits.contains(n[2]));
}

TEST(BruteForce, ClampedXorGate) {
  Netlist net;
  const auto n = net.add_nodes(3);
  net.add_gate(GateKind::Xor, n[0], n[1], n[2]);
  net.clamp(n[2], 1);
  for (bool propagate : {true, false}) {
    const auto sols = brute_force_sat(net, {propagate, 26});
    ASSERT_EQ(sols.size(), 2u);
    EXPECT_EQ(sols[0].bits.at(n[0]), 0);
    EXPECT_EQ(sols[0].bits.at(n[1]), 1);
    EXPECT_EQ(sols[1].bits.at(n[0]), 1);
    EXPECT_EQ(sols[1].bits.at(n[1]), 0);
  }
}

TEST(BruteForce, Contradiction) {
  Netlist net;
  const auto n = net.add_nodes(3);
  net.add_gate(GateKind::Or, n[0], n[1], n[2]);
  net.clamp(n[0], 1);
  net.clamp(n[2], -1);
  EXPECT_TRUE(brute_force_sat(net).empty());
  EXPECT_TRUE(brute_force_sat(net, {false, 26}).empty());
}

TEST(BruteForce, UnconstrainedNodesEnumerate) {
  Netlist net;
  net.add_nodes(3);
  EXPECT_EQ(brute_force_sat(net).size(), 8u);
}

TEST(BruteForce, FullAssignmentSatisfiesGates) {
  const auto net = clamped(5, 3, {3, 0, 3});
  for (const auto& s : brute_force_sat(net)) EXPECT_TRUE(gates_satisfied(net, full_assignment(net, s)));
}

TEST(BruteForce, PropagationAgreesWithEnumeration) {
  // Small circuits keep plain enumeration within reach.
  for (auto layout : {EmbeddingLayout{2, 0, 0}, EmbeddingLayout{2, 0, 1}, EmbeddingLayout{2, 0, 2}}) {
    for (int a = 1; a < 4; ++a) {
      for (int c = 0; c < 4; ++c) {
        const auto net = clamped(a, c, layout);
        std::size_t floating = 0;
        for (std::size_t i = 0; i < net.node_count(); ++i)
          floating += net.is_clamped(NodeId(static_cast<std::uint32_t>(i))) ? 0 : 1;
        if (floating > 16) continue;
        EXPECT_EQ(brute_force_sat(net, {true, 26}), brute_force_sat(net, {false, 26}))
            << a << "/" << c << " nb " << layout.n_b;
      }
    }
  }
}

TEST(BruteForce, TooLarge) {
  Netlist net;
  net.add_nodes(30);
  try {
    brute_force_sat(net);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
  EXPECT_THROW(brute_force_sat(net, {false, 26}), Error);
  Netlist small;
  small.add_nodes(12);
  EXPECT_EQ(brute_force_sat(small, {true, 12}).size(), 4096u);
  EXPECT_THROW(brute_force_sat(small, {true, 11}), Error);
}

TEST(CrossCheck, Examples) {
  const EmbeddingLayout layout{3, 0, 3};
  const auto report = cross_check(clamped(3, 1, layout), instance(3, 1, layout));
  EXPECT_TRUE(report.bijective);
  // 3 * 22 = 64 + 2 and 3 * 23 = 64 + 5; both slacks fit in three bits.
  ASSERT_EQ(report.circuit.size(), 2u);
  EXPECT_EQ(report.circuit[0], SolutionKey(22, 2));
  EXPECT_EQ(report.circuit[1], SolutionKey(23, 5));
  EXPECT_EQ(report.assignments, 2u);
}

TEST(CrossCheck, UnsatisfiableInstance) {
  const EmbeddingLayout layout{3, 0, 0};
  const auto report = cross_check(clamped(3, 1, layout), instance(3, 1, layout));
  EXPECT_TRUE(report.circuit.empty());
  EXPECT_TRUE(report.oracle.empty());
  EXPECT_TRUE(report.bijective);
}

TEST(CrossCheck, AgreesWithOracleExhaustively) {
  for (int n = 2; n <= 4; ++n) {
    for (int nb : {0, 1, n}) {
      if (n == 4 && nb == 4) continue;
      const EmbeddingLayout layout{n, 0, nb};
      for (int a = 1; a < (1 << n); ++a) {
        for (int c = 0; c < (1 << n); c += (n == 4 ? 3 : 1)) {
          const auto report = cross_check(clamped(a, c, layout), instance(a, c, layout));
          ASSERT_TRUE(report.bijective) << n << " " << nb << " " << a << "/" << c;
          EXPECT_EQ(report.circuit.size(), report.oracle.size());
          EXPECT_EQ(report.circuit.size(), enumerate_solutions(instance(a, c, layout)).size());
        }
      }
    }
  }
}

TEST(CrossCheck, MismatchIsReported) {
  const EmbeddingLayout layout{3, 0, 3};
  try {
    cross_check(clamped(3, 1, layout), instance(5, 1, layout));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Mismatch);
  }
}

TEST(CrossCheck, ConvergedRunIsASolution) {
  const EmbeddingLayout layout{3, 0, 3};
  const auto net = clamped(7, 5, layout);
  const auto sols = brute_force_sat(net);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    SimConfig config;
    config.seed = seed;
    const auto result = integrate(net, config);
    ASSERT_TRUE(result.converged);
    const auto bits = threshold(result.state);
    SatAssignment mine;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      const auto id = NodeId(static_cast<std::uint32_t>(i));
      if (!net.is_clamped(id)) mine.bits.emplace(id, bits[i]);
    }
    EXPECT_TRUE(std::binary_search(sols.begin(), sols.end(), mine));
  }
}
