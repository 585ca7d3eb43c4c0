// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

// Exhaustive ground truth for small netlists: every Boolean assignment of the
// floating nodes that satisfies all gates, and its agreement with the
// arithmetic oracle.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "meminv/circuit.hpp"
#include "meminv/embedding.hpp"

namespace meminv {

struct SatAssignment {
  std::map<NodeId, std::uint8_t> bits;  // floating nodes only

  friend auto operator<=>(const SatAssignment&, const SatAssignment&) = default;
  friend bool operator==(const SatAssignment&, const SatAssignment&) = default;
};

struct SatOptions {
  // Propagate forced values through gates before and during the search. With
  // this off every floating node is enumerated directly.
  bool propagate = true;
  // Largest number of free variables the search may branch over.
  std::size_t max_free = 26;
};

/// All satisfying assignments, sorted. Throws TooLarge when more than
/// options.max_free floating gate-input nodes remain undetermined after the
/// clamps have been propagated (or, without propagation, when there are more
/// floating nodes than that).
std::vector<SatAssignment> brute_force_sat(const Netlist& netlist, const SatOptions& options = {});

/// Node values (0/1) for every node: clamp levels plus the assignment.
std::vector<std::uint8_t> full_assignment(const Netlist& netlist, const SatAssignment& assignment);

using SolutionKey = std::pair<BigInt, BigInt>;  // (b_hat, c_f)

struct CrossCheckReport {
  std::vector<SolutionKey> circuit;  // projections of brute_force_sat, sorted
  std::vector<SolutionKey> oracle;   // enumerate_solutions
  std::size_t assignments = 0;
  bool bijective = false;
};

/// Projects the satisfying assignments of an inversion netlist onto
/// (b_hat, c_f) and compares them with enumerate_solutions(instance). Throws
/// Mismatch, listing both sets, unless the projection is a bijection.
CrossCheckReport cross_check(const Netlist& netlist, const EmbeddedInstance& instance, const SatOptions& options = {});

}  // namespace meminv
