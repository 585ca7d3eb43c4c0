// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

// Continuous-time simulation of a clamped netlist.
//
// Two dynamics models share one integrator:
//
// GradientFlowModel: every gate g has a memory weight x_g >= 1 and a penalty
// E_g(v) = min over its four satisfying corners s of |v - s|^2 / 4. Voltages
// follow dv_i/dt = -sum_g x_g dE_g/dv_i and memories dx_g/dt = gamma x_g E_g.
//
// MemcomputingModel: each gate is expanded into the clauses that forbid its
// four violating corners. Clause m has a short-term memory s_m in [0, 1] and a
// long-term memory x_m >= 1; with d_i = 1 - q_i v_i over its literals,
//   C_m   = min_i d_i / 2
//   dv_n += x_m s_m G_nm + (1 + zeta x_m)(1 - s_m) R_nm
//   ds_m  = beta (s_m + eps)(C_m - gamma)
//   dx_m  = alpha (C_m - delta)
// where G_nm = q_n min_{j != n} d_j / 2 and R_nm = (q_n - v_n) / 2 for the
// literal attaining the minimum (0 otherwise). This is the default engine.
//
// In both models the fixed points with all gates satisfied are exactly the
// corners encoding satisfying assignments.

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "meminv/circuit.hpp"
#include "meminv/embedding.hpp"

namespace meminv {

enum class ModelKind { Memcomputing, GradientFlow };

std::string_view to_string(ModelKind kind);
/// Accepts "memcomputing" or "gradient"; throws Parse otherwise.
ModelKind model_kind_from_string(std::string_view name);

struct GradientFlowParams {
  double gamma = 1.0;
  double x_cap = 1e4;
  // Each explicit step satisfies dt * (largest relaxation rate) <= stability.
  double stability = 0.5;
};

struct MemcomputingParams {
  double alpha = 5.0;
  double beta = 20.0;
  double gamma = 0.25;
  double delta = 0.05;
  double epsilon = 1e-3;
  double zeta = 0.1;
  double x_cap_per_clause = 1e4;  // long-term memory cap is this times the clause count
  double dv_max = 0.3;            // largest voltage change per step
};

struct SimConfig {
  double epsilon = 0.01;
  double t_max = 50000.0;
  double dt_initial = 1.0;
  std::uint64_t seed = 0;
  std::size_t record_every = 100;  // steps between trace samples
  bool record_voltages = false;
  double v_cap = 1.5;
  ModelKind model = ModelKind::Memcomputing;
  GradientFlowParams gradient;
  MemcomputingParams memcomputing;

  /// Throws InvalidLayout on non-positive epsilon, t_max or dt_initial.
  void validate() const;
};

struct SimState {
  double t = 0.0;
  std::vector<double> v;  // per node
  std::vector<double> x;  // long-term memory, >= 1 (per gate or per clause)
  std::vector<double> s;  // short-term memory in [0, 1]; empty for the gradient flow

  friend bool operator==(const SimState&, const SimState&) = default;
};

struct TraceSample {
  double t = 0.0;
  double c = 0.0;
  std::vector<double> v;  // empty unless voltages are recorded

  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

struct Trace {
  std::vector<TraceSample> samples;

  friend bool operator==(const Trace&, const Trace&) = default;
};

using Triple = std::array<double, 3>;

/// The four satisfying (in1, in2, out) corners of a gate, as +/-1 voltages.
const std::array<Triple, 4>& satisfying_corners(GateKind kind);

double gate_penalty(GateKind kind, const Triple& v);
/// Gradient of gate_penalty; at Voronoi ties the first nearest corner wins.
Triple gate_penalty_gradient(GateKind kind, const Triple& v);

struct Derivative {
  std::vector<double> dv;
  std::vector<double> dx;
  std::vector<double> ds;
};

/// Vector field of a netlist's state. A model is bound to one netlist and
/// must leave clamped nodes with zero voltage derivative.
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual const Netlist& netlist() const = 0;
  /// Fresh memories for `state` (voltages already set).
  virtual void init_memory(SimState& state) const = 0;
  virtual void derivatives(const SimState& state, Derivative& d) const = 0;
  /// Maps a post-step state back into the admissible box.
  virtual void project(SimState& state) const = 0;
  /// Largest explicit step the model accepts at `state`.
  virtual double max_step(const SimState& state, const Derivative& d) const = 0;
};

class GradientFlowModel final : public DynamicsModel {
 public:
  GradientFlowModel(const Netlist& netlist, GradientFlowParams params = {}, double v_cap = 1.5);

  const Netlist& netlist() const override { return netlist_; }
  void init_memory(SimState& state) const override;
  void derivatives(const SimState& state, Derivative& d) const override;
  void project(SimState& state) const override;
  double max_step(const SimState& state, const Derivative& d) const override;

 private:
  const Netlist& netlist_;
  GradientFlowParams params_;
  double v_cap_;
};

class MemcomputingModel final : public DynamicsModel {
 public:
  explicit MemcomputingModel(const Netlist& netlist, MemcomputingParams params = {});

  const Netlist& netlist() const override { return netlist_; }
  void init_memory(SimState& state) const override;
  void derivatives(const SimState& state, Derivative& d) const override;
  void project(SimState& state) const override;
  double max_step(const SimState& state, const Derivative& d) const override;

  std::size_t clause_count() const { return clauses_.size(); }

 private:
  struct Clause {
    std::array<std::uint32_t, 3> var;
    std::array<double, 3> q;  // +1: literal true when v = +1
    std::uint8_t size;
  };

  const Netlist& netlist_;
  MemcomputingParams params_;
  std::vector<Clause> clauses_;
  std::vector<std::uint32_t> clamped_;
  double x_cap_;
};

std::unique_ptr<DynamicsModel> make_model(const Netlist& netlist, const SimConfig& config);

/// Clamped nodes at their level, floating nodes uniform on (-1, 1), memories
/// at their initial values. Deterministic in config.seed.
SimState init_state(const Netlist& netlist, const SimConfig& config);
SimState init_state(const DynamicsModel& model, std::uint64_t seed);

/// One explicit Euler step of exactly `dt`. Throws NonFinite if the result is
/// not finite and InvalidLayout if `state` was made for another model.
SimState step(const DynamicsModel& model, const SimState& state, double dt);
/// Gradient-flow step using config.gradient and config.v_cap.
SimState step(const Netlist& netlist, const SimState& state, double dt, const SimConfig& config = {});

/// max over gate terminals of the distance to the nearest logic level.
double convergence_metric(const Netlist& netlist, const SimState& state);
double total_penalty(const Netlist& netlist, const SimState& state);

/// Thresholded assignment, v > 0 reads as 1 (v == 0 reads as 0).
std::vector<std::uint8_t> threshold(const SimState& state);
bool gates_satisfied(const Netlist& netlist, const std::vector<std::uint8_t>& bits);

DecodedSolution decode(const SimState& state, const Netlist& netlist, const EmbeddingLayout& layout);

struct IntegrationResult {
  bool converged = false;
  double t_c = 0.0;
  double final_c = 0.0;
  std::size_t steps = 0;
  SimState state;
  Trace trace;
};

/// Integrates from the seeded initial state until C <= epsilon with every
/// gate satisfied by the thresholded bits, or until t >= t_max. The step halves when a step turns non-finite, regrows by 10%
/// per accepted step up to dt_initial, and never exceeds model.max_step.
IntegrationResult integrate(const DynamicsModel& model, const SimConfig& config);
IntegrationResult integrate(const Netlist& netlist, const SimConfig& config);

struct SolveReport {
  bool converged = false;
  double t_c = 0.0;
  std::optional<DecodedSolution> decoded;
  std::optional<bool> identity_ok;
  std::optional<ReadoutFlag> readout_flag;
  std::size_t steps = 0;
  double final_c = 0.0;
  bool gates_ok = false;  // thresholded final state satisfies every gate
};

/// Runs a netlist produced by build_inversion_circuit + clamp_instance. The
/// instance is recovered from the clamps of registers a and c.
std::pair<Trace, SolveReport> run(const Netlist& netlist, const EmbeddingLayout& layout, const SimConfig& config);

}  // namespace meminv
