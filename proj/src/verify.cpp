// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include "meminv/verify.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "meminv/error.hpp"

namespace meminv {

namespace {

constexpr std::int8_t kUnknown = -1;

class Solver {
 public:
  explicit Solver(const Netlist& netlist) : netlist_(netlist), value_(netlist.node_count(), kUnknown) {
    incident_.resize(netlist.node_count());
    std::vector<bool> driven(netlist.node_count(), false);
    const auto& gates = netlist.gates();
    for (std::uint32_t g = 0; g < gates.size(); ++g) {
      for (NodeId id : {gates[g].in1, gates[g].in2, gates[g].out}) {
        auto& list = incident_[index(id)];
        if (list.empty() || list.back() != g) list.push_back(g);
      }
      driven[index(gates[g].out)] = true;
    }
    // Branch on undriven nodes first; once those are fixed, gate outputs follow.
    for (std::size_t i = 0; i < driven.size(); ++i) {
      if (!driven[i]) order_.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::size_t i = 0; i < driven.size(); ++i) {
      if (driven[i]) order_.push_back(static_cast<std::uint32_t>(i));
    }
    queued_.assign(gates.size(), false);
  }

  std::vector<SatAssignment> solve(std::size_t max_free) {
    for (const auto& c : netlist_.clamps()) {
      if (!assign(index(c.node), c.level > 0 ? 1 : 0)) return {};
    }
    for (std::uint32_t g = 0; g < netlist_.gates().size(); ++g) enqueue(g);
    if (!propagate()) return {};

    std::size_t free = 0;
    for (auto i : order_) free += value_[i] == kUnknown && !is_driven(i);
    if (free > max_free) {
      throw Error(ErrorCode::TooLarge, std::to_string(free) + " free nodes after propagation exceed the limit of " +
                                           std::to_string(max_free));
    }
    search();
    return std::move(found_);
  }

 private:
  bool is_driven(std::uint32_t node) const {
    for (auto g : incident_[node]) {
      if (index(netlist_.gates()[g].out) == node) return true;
    }
    return false;
  }

  void enqueue(std::uint32_t g) {
    if (!queued_[g]) {
      queued_[g] = true;
      queue_.push_back(g);
    }
  }

  bool assign(std::size_t node, std::int8_t bit) {
    if (value_[node] != kUnknown) return value_[node] == bit;
    value_[node] = bit;
    trail_.push_back(static_cast<std::uint32_t>(node));
    for (auto g : incident_[node]) enqueue(g);
    return true;
  }

  void clear_queue() {
    for (auto g : queue_) queued_[g] = false;
    queue_.clear();
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = kUnknown;
      trail_.pop_back();
    }
    clear_queue();
  }

  // Intersects each queued gate's truth table with the known values and
  // fixes every terminal on which all remaining rows agree.
  bool propagate() {
    while (!queue_.empty()) {
      const auto g = queue_.back();
      queue_.pop_back();
      queued_[g] = false;
      const Gate& gate = netlist_.gates()[g];
      const std::array<std::size_t, 3> t{index(gate.in1), index(gate.in2), index(gate.out)};
      int rows = 0;
      int all_ones = 0b111;
      int any_ones = 0;
      for (int corner = 0; corner < 8; ++corner) {
        const std::array<std::int8_t, 3> bit{static_cast<std::int8_t>((corner >> 2) & 1),
                                             static_cast<std::int8_t>((corner >> 1) & 1),
                                             static_cast<std::int8_t>(corner & 1)};
        if (!gate_holds(gate.kind, bit[0] != 0, bit[1] != 0, bit[2] != 0)) continue;
        bool fits = true;
        for (int k = 0; k < 3 && fits; ++k) {
          fits = value_[t[k]] == kUnknown || value_[t[k]] == bit[k];
          for (int j = 0; j < k && fits; ++j) fits = t[j] != t[k] || bit[j] == bit[k];
        }
        if (!fits) continue;
        ++rows;
        const int mask = (bit[0] << 2) | (bit[1] << 1) | bit[2];
        all_ones &= mask;
        any_ones |= mask;
      }
      if (rows == 0) {
        clear_queue();
        return false;
      }
      for (int k = 0; k < 3; ++k) {
        const int m = 4 >> k;
        if (value_[t[k]] != kUnknown) continue;
        if (all_ones & m) {
          assign(t[k], 1);
        } else if (!(any_ones & m)) {
          assign(t[k], 0);
        }
      }
    }
    return true;
  }

  void search() {
    const auto next = std::find_if(order_.begin(), order_.end(), [&](auto i) { return value_[i] == kUnknown; });
    if (next == order_.end()) {
      record();
      return;
    }
    for (std::int8_t bit : {0, 1}) {
      const auto mark = trail_.size();
      assign(*next, bit);
      if (propagate()) search();
      undo(mark);
    }
  }

  void record() {
    for (const auto& g : netlist_.gates()) {
      if (!gate_holds(g.kind, value_[index(g.in1)] != 0, value_[index(g.in2)] != 0, value_[index(g.out)] != 0)) return;
    }
    SatAssignment a;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      if (!netlist_.is_clamped(NodeId(static_cast<std::uint32_t>(i)))) {
        a.bits.emplace(NodeId(static_cast<std::uint32_t>(i)), static_cast<std::uint8_t>(value_[i]));
      }
    }
    found_.push_back(std::move(a));
  }

  const Netlist& netlist_;
  std::vector<std::int8_t> value_;
  std::vector<std::vector<std::uint32_t>> incident_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> trail_;
  std::vector<std::uint32_t> queue_;
  std::vector<bool> queued_;
  std::vector<SatAssignment> found_;
};

std::vector<SatAssignment> enumerate_plain(const Netlist& netlist, std::size_t max_free) {
  std::vector<NodeId> floating;
  std::vector<std::uint8_t> bits(netlist.node_count(), 0);
  for (std::size_t i = 0; i < netlist.node_count(); ++i) {
    const auto id = NodeId(static_cast<std::uint32_t>(i));
    if (auto level = netlist.clamp_level(id)) {
      bits[i] = *level > 0;
    } else {
      floating.push_back(id);
    }
  }
  if (floating.size() > max_free || floating.size() >= 63) {
    throw Error(ErrorCode::TooLarge,
                std::to_string(floating.size()) + " floating nodes exceed the limit of " + std::to_string(max_free));
  }
  std::vector<SatAssignment> found;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << floating.size()); ++mask) {
    for (std::size_t k = 0; k < floating.size(); ++k) bits[index(floating[k])] = (mask >> k) & 1;
    const bool ok = std::all_of(netlist.gates().begin(), netlist.gates().end(), [&](const Gate& g) {
      return gate_holds(g.kind, bits[index(g.in1)] != 0, bits[index(g.in2)] != 0, bits[index(g.out)] != 0);
    });
    if (!ok) continue;
    SatAssignment a;
    for (auto id : floating) a.bits.emplace(id, bits[index(id)]);
    found.push_back(std::move(a));
  }
  return found;
}

std::string format_keys(const std::vector<SolutionKey>& keys) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out << (i ? ", " : "") << '(' << keys[i].first << ',' << keys[i].second << ')';
  }
  out << '}';
  return out.str();
}

}  // namespace

std::vector<SatAssignment> brute_force_sat(const Netlist& netlist, const SatOptions& options) {
  auto found = options.propagate ? Solver(netlist).solve(options.max_free) : enumerate_plain(netlist, options.max_free);
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

std::vector<std::uint8_t> full_assignment(const Netlist& netlist, const SatAssignment& assignment) {
  std::vector<std::uint8_t> bits(netlist.node_count(), 0);
  for (const auto& c : netlist.clamps()) bits[index(c.node)] = c.level > 0;
  for (const auto& [id, bit] : assignment.bits) bits.at(index(id)) = bit;
  return bits;
}

CrossCheckReport cross_check(const Netlist& netlist, const EmbeddedInstance& instance, const SatOptions& options) {
  const auto& layout = instance.layout;
  CrossCheckReport report;
  const auto assignments = brute_force_sat(netlist, options);
  report.assignments = assignments.size();
  for (const auto& a : assignments) {
    const auto bits = full_assignment(netlist, a);
    const BigInt b_hat = (register_value(netlist, bits, "b") << layout.n_b) + register_value(netlist, bits, "b_f");
    report.circuit.emplace_back(b_hat, register_value(netlist, bits, "c_f"));
  }
  std::sort(report.circuit.begin(), report.circuit.end());
  for (const auto& sol : enumerate_solutions(instance)) report.oracle.emplace_back(sol.b_hat, sol.c_f);
  std::sort(report.oracle.begin(), report.oracle.end());

  const bool injective = std::adjacent_find(report.circuit.begin(), report.circuit.end()) == report.circuit.end();
  report.bijective = injective && report.circuit == report.oracle;
  if (!report.bijective) {
    throw Error(ErrorCode::Mismatch, "circuit " + format_keys(report.circuit) + " vs oracle " + format_keys(report.oracle));
  }
  return report;
}

}  // namespace meminv
