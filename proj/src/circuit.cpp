// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include "meminv/circuit.hpp"

#include <algorithm>
#include <optional>

#include "meminv/error.hpp"

namespace meminv {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::And: return "AND";
    case GateKind::Or: return "OR";
    case GateKind::Xor: return "XOR";
  }
  return "?";
}

NodeId Netlist::add_node() {
  clamp_level_.push_back(0);
  return NodeId(static_cast<std::uint32_t>(clamp_level_.size() - 1));
}

std::vector<NodeId> Netlist::add_nodes(std::size_t count) {
  std::vector<NodeId> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(add_node());
  return out;
}

void Netlist::require(NodeId id) const {
  if (!has_node(id)) throw Error(ErrorCode::UnknownNode, "node " + std::to_string(index(id)) + " does not exist");
}

void Netlist::add_gate(GateKind kind, NodeId in1, NodeId in2, NodeId out) {
  require(in1);
  require(in2);
  require(out);
  gates_.push_back(Gate{kind, in1, in2, out});
}

NodeId Netlist::add_gate_output(GateKind kind, NodeId in1, NodeId in2) {
  require(in1);
  require(in2);
  const NodeId out = add_node();
  gates_.push_back(Gate{kind, in1, in2, out});
  return out;
}

void Netlist::clamp(NodeId node, int level) {
  require(node);
  if (level != 1 && level != -1) throw Error(ErrorCode::InvalidLayout, "clamp level must be +1 or -1");
  if (clamp_level_[index(node)] != 0) {
    throw Error(ErrorCode::DuplicateClamp, "node " + std::to_string(index(node)) + " is already clamped");
  }
  clamp_level_[index(node)] = static_cast<std::int8_t>(level);
  clamps_.push_back(Clamp{node, static_cast<std::int8_t>(level)});
}

std::optional<int> Netlist::clamp_level(NodeId node) const {
  require(node);
  const int level = clamp_level_[index(node)];
  if (level == 0) return std::nullopt;
  return level;
}

void Netlist::set_register(const std::string& name, std::vector<NodeId> nodes) {
  for (auto id : nodes) require(id);
  registers_[name] = std::move(nodes);
}

const std::vector<NodeId>& Netlist::reg(const std::string& name) const {
  auto it = registers_.find(name);
  if (it == registers_.end()) throw Error(ErrorCode::LayoutMismatch, "netlist has no register '" + name + "'");
  return it->second;
}

std::vector<NodeId> Netlist::terminal_nodes() const {
  std::vector<bool> seen(node_count(), false);
  for (const auto& g : gates_) {
    seen[index(g.in1)] = seen[index(g.in2)] = seen[index(g.out)] = true;
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(NodeId(static_cast<std::uint32_t>(i)));
  }
  return out;
}

AdderOutputs build_half_adder(Netlist& netlist, NodeId x, NodeId y) {
  const NodeId sum = netlist.add_gate_output(GateKind::Xor, x, y);
  const NodeId carry = netlist.add_gate_output(GateKind::And, x, y);
  return {sum, carry};
}

AdderOutputs build_full_adder(Netlist& netlist, NodeId x, NodeId y, NodeId cin) {
  const NodeId partial = netlist.add_gate_output(GateKind::Xor, x, y);
  const NodeId sum = netlist.add_gate_output(GateKind::Xor, partial, cin);
  const NodeId carry_xy = netlist.add_gate_output(GateKind::And, x, y);
  const NodeId carry_p = netlist.add_gate_output(GateKind::And, partial, cin);
  const NodeId cout = netlist.add_gate_output(GateKind::Or, carry_xy, carry_p);
  return {sum, cout};
}

std::vector<NodeId> build_array_multiplier(Netlist& netlist, std::span<const NodeId> x_lsb,
                                           std::span<const NodeId> y_lsb) {
  if (x_lsb.empty() || y_lsb.empty()) throw Error(ErrorCode::InvalidLayout, "multiplier operands must be nonempty");
  std::vector<NodeId> acc;
  for (std::size_t i = 0; i < x_lsb.size(); ++i) {
    std::vector<NodeId> row;
    row.reserve(y_lsb.size());
    for (auto y : y_lsb) row.push_back(netlist.add_gate_output(GateKind::And, x_lsb[i], y));
    if (i == 0) {
      acc = std::move(row);
      continue;
    }
    // Row i lands at bit offset i; bits below i are already final.
    std::optional<NodeId> carry;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const std::size_t k = i + j;
      if (k < acc.size()) {
        auto add = carry ? build_full_adder(netlist, acc[k], row[j], *carry) : build_half_adder(netlist, acc[k], row[j]);
        acc[k] = add.sum;
        carry = add.carry;
      } else if (carry) {
        auto add = build_half_adder(netlist, row[j], *carry);
        acc.push_back(add.sum);
        carry = add.carry;
      } else {
        acc.push_back(row[j]);
      }
    }
    if (carry) acc.push_back(*carry);
  }
  // Bits the accumulation never reaches are structurally zero (x ^ x).
  while (acc.size() < x_lsb.size() + y_lsb.size()) {
    acc.push_back(netlist.add_gate_output(GateKind::Xor, x_lsb[0], x_lsb[0]));
  }
  return acc;
}

std::vector<NodeId> build_ripple_adder(Netlist& netlist, std::span<const NodeId> x_lsb, std::span<const NodeId> y_lsb) {
  if (x_lsb.size() != y_lsb.size() || x_lsb.empty()) {
    throw Error(ErrorCode::InvalidLayout, "ripple adder needs equal, nonempty widths");
  }
  std::vector<NodeId> out;
  auto add = build_half_adder(netlist, x_lsb[0], y_lsb[0]);
  out.push_back(add.sum);
  for (std::size_t i = 1; i < x_lsb.size(); ++i) {
    add = build_full_adder(netlist, x_lsb[i], y_lsb[i], add.carry);
    out.push_back(add.sum);
  }
  return out;
}

std::vector<NodeId> build_twos_complement_stage(Netlist& netlist, std::span<const NodeId> magnitude, NodeId sign) {
  if (magnitude.empty()) throw Error(ErrorCode::InvalidLayout, "two's complement stage needs a nonempty magnitude");
  std::vector<NodeId> flipped;
  flipped.reserve(magnitude.size());
  for (auto bit : magnitude) flipped.push_back(netlist.add_gate_output(GateKind::Xor, bit, sign));
  // Ripple +sign from the least significant end.
  std::vector<NodeId> out(magnitude.size());
  NodeId carry = sign;
  for (std::size_t k = flipped.size(); k-- > 0;) {
    auto add = build_half_adder(netlist, flipped[k], carry);
    out[k] = add.sum;
    carry = add.carry;
  }
  return out;
}

Netlist build_inversion_circuit(const EmbeddingLayout& layout) {
  layout.validate();
  if (layout.n_a != 0) throw Error(ErrorCode::InvalidLayout, "reduce n_a to zero before building the circuit");
  const auto n = static_cast<std::size_t>(layout.n);
  const auto nb = static_cast<std::size_t>(layout.n_b);

  Netlist net;
  const auto a = net.add_nodes(n);
  const auto b = net.add_nodes(n);
  const auto b_f = net.add_nodes(nb);

  std::vector<NodeId> a_lsb(a.rbegin(), a.rend());
  std::vector<NodeId> b_hat_lsb(b_f.rbegin(), b_f.rend());
  b_hat_lsb.insert(b_hat_lsb.end(), b.rbegin(), b.rend());

  const auto product = build_array_multiplier(net, a_lsb, b_hat_lsb);

  auto msb_slice = [&](std::size_t lo, std::size_t count) {
    return std::vector<NodeId>(product.rbegin() + static_cast<std::ptrdiff_t>(product.size() - lo - count),
                               product.rend() - static_cast<std::ptrdiff_t>(lo));
  };
  net.set_register("a", a);
  net.set_register("b", b);
  net.set_register("b_f", b_f);
  net.set_register("c_f", msb_slice(0, nb));
  net.set_register("consistency", msb_slice(nb, n));
  net.set_register("c", msb_slice(nb + n, n));
  return net;
}

Netlist clamp_instance(const Netlist& netlist, const EmbeddedInstance& instance) {
  const auto& L = instance.layout;
  const auto n = static_cast<std::size_t>(L.n);
  if (L.n_a != 0 || netlist.reg("a").size() != n || netlist.reg("c").size() != n ||
      netlist.reg("consistency").size() != n || netlist.reg("b_f").size() != static_cast<std::size_t>(L.n_b)) {
    throw Error(ErrorCode::LayoutMismatch, "netlist registers do not match the instance layout");
  }
  Netlist out = netlist;
  auto clamp_bits = [&out](const std::vector<NodeId>& nodes, const Bits& bits) {
    for (std::size_t i = 0; i < nodes.size(); ++i) out.clamp(nodes[i], bits[i] ? 1 : -1);
  };
  clamp_bits(out.reg("a"), int_to_bits(instance.a_int, L.n));
  clamp_bits(out.reg("c"), int_to_bits(instance.c_int, L.n));
  clamp_bits(out.reg("consistency"), Bits(n, 0));
  return out;
}

BigInt register_value(const Netlist& netlist, const std::vector<std::uint8_t>& bits, const std::string& name) {
  BigInt v = 0;
  for (auto id : netlist.reg(name)) {
    v <<= 1;
    if (bits[index(id)]) v |= 1;
  }
  return v;
}

BigInt clamped_register_value(const Netlist& netlist, const std::string& name) {
  BigInt v = 0;
  for (auto id : netlist.reg(name)) {
    auto level = netlist.clamp_level(id);
    if (!level) throw Error(ErrorCode::LayoutMismatch, "register '" + name + "' is not clamped");
    v <<= 1;
    if (*level > 0) v |= 1;
  }
  return v;
}

GateCensus count_gates(const Netlist& netlist) {
  GateCensus census;
  for (const auto& g : netlist.gates()) {
    switch (g.kind) {
      case GateKind::And: ++census.and_count; break;
      case GateKind::Or: ++census.or_count; break;
      case GateKind::Xor: ++census.xor_count; break;
    }
  }
  return census;
}

GateCensus inversion_gate_census(const EmbeddingLayout& layout) {
  layout.validate();
  const auto n = static_cast<std::size_t>(layout.n);
  const auto m = n + static_cast<std::size_t>(layout.n_b);
  if (n == 1) return GateCensus{m, 0, 1};
  const std::size_t half_adders = n;
  const std::size_t full_adders = (n - 1) * (m - 1) - 1;
  return GateCensus{n * m + half_adders + 2 * full_adders, full_adders, half_adders + 2 * full_adders};
}

}  // namespace meminv
