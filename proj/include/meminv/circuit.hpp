// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

// Self-organizing logic circuit netlists: three-terminal AND/OR/XOR gates
// over voltage nodes, clamps for known bits, and named registers.
//
// Register node lists are stored most-significant bit first.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "meminv/embedding.hpp"

namespace meminv {

enum class NodeId : std::uint32_t {};

constexpr std::size_t index(NodeId id) { return static_cast<std::size_t>(id); }

enum class GateKind : std::uint8_t { And, Or, Xor };

std::string_view to_string(GateKind kind);

/// Boolean semantics of the gate: out == kind(in1, in2).
constexpr bool gate_holds(GateKind kind, bool in1, bool in2, bool out) {
  switch (kind) {
    case GateKind::And: return out == (in1 && in2);
    case GateKind::Or: return out == (in1 || in2);
    case GateKind::Xor: return out == (in1 != in2);
  }
  return false;
}

struct Gate {
  GateKind kind;
  NodeId in1;
  NodeId in2;
  NodeId out;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct Clamp {
  NodeId node;
  std::int8_t level;  // +1 is Boolean 1, -1 is Boolean 0

  friend bool operator==(const Clamp&, const Clamp&) = default;
};

struct GateCensus {
  std::size_t and_count = 0;
  std::size_t or_count = 0;
  std::size_t xor_count = 0;

  std::size_t total() const { return and_count + or_count + xor_count; }
  friend bool operator==(const GateCensus&, const GateCensus&) = default;
};

class Netlist {
 public:
  NodeId add_node();
  std::vector<NodeId> add_nodes(std::size_t count);
  std::size_t node_count() const { return clamp_level_.size(); }
  bool has_node(NodeId id) const { return index(id) < node_count(); }

  void add_gate(GateKind kind, NodeId in1, NodeId in2, NodeId out);
  /// Creates a fresh output node driven by a new gate.
  NodeId add_gate_output(GateKind kind, NodeId in1, NodeId in2);

  void clamp(NodeId node, int level);
  std::optional<int> clamp_level(NodeId node) const;
  bool is_clamped(NodeId node) const { return clamp_level(node).has_value(); }

  void set_register(const std::string& name, std::vector<NodeId> nodes);
  bool has_register(const std::string& name) const { return registers_.contains(name); }
  /// Throws LayoutMismatch when the register is absent.
  const std::vector<NodeId>& reg(const std::string& name) const;

  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<Clamp>& clamps() const { return clamps_; }
  const std::map<std::string, std::vector<NodeId>>& registers() const { return registers_; }

  /// Nodes that appear on at least one gate terminal, ascending.
  std::vector<NodeId> terminal_nodes() const;

  friend bool operator==(const Netlist& x, const Netlist& y) {
    return x.clamp_level_.size() == y.clamp_level_.size() && x.gates_ == y.gates_ && x.clamps_ == y.clamps_ &&
           x.registers_ == y.registers_;
  }

 private:
  void require(NodeId id) const;

  std::vector<std::int8_t> clamp_level_;  // 0 for floating nodes
  std::vector<Gate> gates_;
  std::vector<Clamp> clamps_;
  std::map<std::string, std::vector<NodeId>> registers_;
};

struct AdderOutputs {
  NodeId sum;
  NodeId carry;
};

/// sum = x ^ y, carry = x & y.
AdderOutputs build_half_adder(Netlist& netlist, NodeId x, NodeId y);
/// Two XOR, two AND and one OR: x + y + cin = 2 * cout + sum.
AdderOutputs build_full_adder(Netlist& netlist, NodeId x, NodeId y, NodeId cin);

/// Schoolbook array multiplier over LSB-first operands; returns the
/// LSB-first product of width x.size() + y.size().
std::vector<NodeId> build_array_multiplier(Netlist& netlist, std::span<const NodeId> x_lsb,
                                           std::span<const NodeId> y_lsb);

/// Ripple-carry sum of two equal-width LSB-first operands modulo 2^width.
std::vector<NodeId> build_ripple_adder(Netlist& netlist, std::span<const NodeId> x_lsb, std::span<const NodeId> y_lsb);

/// XORs every magnitude bit with `sign`, then adds `sign` at the least
/// significant position. Input and output are MSB first; the final carry is
/// discarded so the output has the magnitude's width.
std::vector<NodeId> build_twos_complement_stage(Netlist& netlist, std::span<const NodeId> magnitude, NodeId sign);

/// a (n bits) times b_hat = b * 2^nb + b_f, wired so that the product bits
/// are, from the top, registers c (n), consistency (n) and c_f (nb).
/// Registers: a, b, b_f, c, consistency, c_f.
Netlist build_inversion_circuit(const EmbeddingLayout& layout);

/// Copy of `netlist` with a, c clamped to the instance and consistency
/// clamped to zero.
Netlist clamp_instance(const Netlist& netlist, const EmbeddedInstance& instance);

/// Reads a register's clamp levels as an unsigned integer (MSB first).
BigInt clamped_register_value(const Netlist& netlist, const std::string& name);
/// Reads a register from a 0/1 value per node (MSB first).
BigInt register_value(const Netlist& netlist, const std::vector<std::uint8_t>& bits, const std::string& name);

GateCensus count_gates(const Netlist& netlist);

/// Census that build_inversion_circuit produces, in closed form. With
/// m = n + n_b and n >= 2: AND = n*m + n + 2F, XOR = n + 2F, OR = F where
/// F = (n-1)(m-1) - 1 full adders; the total is 6*n*m - 3*n - 5*m.
/// For n = 1: m AND gates plus one XOR driving the constant top bit.
GateCensus inversion_gate_census(const EmbeddingLayout& layout);

/// Line-oriented text form, see docs in README ("Netlist format").
std::string export_netlist(const Netlist& netlist);
Netlist import_netlist(const std::string& text);

}  // namespace meminv
