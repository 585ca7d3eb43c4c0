// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

// Text format:
//
//   solc v1
//   node <id>                      ids dense, ascending from 0
//   gate <AND|OR|XOR> <in1> <in2> <out>
//   clamp <id> <+1|-1>
//   reg <name> <id...>             most-significant bit first
//
// Blank lines and lines starting with '#' are ignored on import.

#include <sstream>

#include "meminv/circuit.hpp"
#include "meminv/error.hpp"

namespace meminv {

namespace {

constexpr std::string_view kHeader = "solc v1";

[[noreturn]] void fail(std::size_t line_no, const std::string& msg) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": " + msg);
}

NodeId parse_id(std::istringstream& in, std::size_t line_no) {
  long long v = -1;
  if (!(in >> v) || v < 0 || v > static_cast<long long>(UINT32_MAX)) fail(line_no, "expected a node id");
  return NodeId(static_cast<std::uint32_t>(v));
}

}  // namespace

std::string export_netlist(const Netlist& netlist) {
  std::ostringstream out;
  out << kHeader << '\n';
  for (std::size_t i = 0; i < netlist.node_count(); ++i) out << "node " << i << '\n';
  for (const auto& g : netlist.gates()) {
    out << "gate " << to_string(g.kind) << ' ' << index(g.in1) << ' ' << index(g.in2) << ' ' << index(g.out) << '\n';
  }
  for (const auto& c : netlist.clamps()) out << "clamp " << index(c.node) << ' ' << (c.level > 0 ? "+1" : "-1") << '\n';
  for (const auto& [name, nodes] : netlist.registers()) {
    out << "reg " << name;
    for (auto id : nodes) out << ' ' << index(id);
    out << '\n';
  }
  return out.str();
}

Netlist import_netlist(const std::string& text) {
  std::istringstream doc(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  Netlist net;
  while (std::getline(doc, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) fail(line_no, "expected header '" + std::string(kHeader) + "'");
      header_seen = true;
      continue;
    }
    std::istringstream in(line);
    std::string keyword;
    in >> keyword;
    try {
      if (keyword == "node") {
        const NodeId id = parse_id(in, line_no);
        if (index(id) != net.node_count()) fail(line_no, "node ids must be dense and ascending");
        net.add_node();
      } else if (keyword == "gate") {
        std::string kind_name;
        in >> kind_name;
        GateKind kind;
        if (kind_name == "AND") kind = GateKind::And;
        else if (kind_name == "OR") kind = GateKind::Or;
        else if (kind_name == "XOR") kind = GateKind::Xor;
        else fail(line_no, "unknown gate kind '" + kind_name + "'");
        const NodeId in1 = parse_id(in, line_no);
        const NodeId in2 = parse_id(in, line_no);
        const NodeId out = parse_id(in, line_no);
        net.add_gate(kind, in1, in2, out);
      } else if (keyword == "clamp") {
        const NodeId id = parse_id(in, line_no);
        std::string level;
        in >> level;
        if (level != "+1" && level != "-1") fail(line_no, "clamp level must be +1 or -1");
        net.clamp(id, level == "+1" ? 1 : -1);
      } else if (keyword == "reg") {
        std::string name;
        if (!(in >> name)) fail(line_no, "register needs a name");
        std::vector<NodeId> nodes;
        long long v = 0;
        while (in >> v) {
          if (v < 0) fail(line_no, "negative node id");
          nodes.push_back(NodeId(static_cast<std::uint32_t>(v)));
        }
        if (!in.eof()) fail(line_no, "malformed register entry");
        net.set_register(name, std::move(nodes));
        continue;
      } else {
        fail(line_no, "unknown record '" + keyword + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Parse) throw;
      fail(line_no, e.what());
    }
    std::string trailing;
    if (in >> trailing) fail(line_no, "unexpected trailing token '" + trailing + "'");
  }
  if (!header_seen) fail(line_no, "missing header");
  return net;
}

}  // namespace meminv
