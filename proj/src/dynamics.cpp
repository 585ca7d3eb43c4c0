// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include "meminv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "meminv/error.hpp"

namespace meminv {

namespace {

constexpr std::array<Triple, 4> kAndCorners{{{-1, -1, -1}, {-1, 1, -1}, {1, -1, -1}, {1, 1, 1}}};
constexpr std::array<Triple, 4> kOrCorners{{{-1, -1, -1}, {-1, 1, 1}, {1, -1, 1}, {1, 1, 1}}};
constexpr std::array<Triple, 4> kXorCorners{{{-1, -1, -1}, {-1, 1, 1}, {1, -1, 1}, {1, 1, -1}}};

// Nearest corner maximizes v.s because |s|^2 is the same for every corner.
std::size_t nearest_corner(const std::array<Triple, 4>& corners, const Triple& v) {
  std::size_t best = 0;
  double best_dot = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < corners.size(); ++k) {
    const double dot = v[0] * corners[k][0] + v[1] * corners[k][1] + v[2] * corners[k][2];
    if (dot > best_dot) {
      best_dot = dot;
      best = k;
    }
  }
  return best;
}

Triple terminals(const Gate& g, std::span<const double> v) { return {v[index(g.in1)], v[index(g.in2)], v[index(g.out)]}; }

}  // namespace

void SimConfig::validate() const {
  if (!(epsilon > 0) || !(t_max > 0) || !(dt_initial > 0)) {
    throw Error(ErrorCode::InvalidLayout, "epsilon, t_max and dt_initial must be positive");
  }
  if (!(v_cap >= 1.0)) throw Error(ErrorCode::InvalidLayout, "v_cap must be at least 1");
  if (record_every == 0) throw Error(ErrorCode::InvalidLayout, "record_every must be at least 1");
}

const std::array<Triple, 4>& satisfying_corners(GateKind kind) {
  switch (kind) {
    case GateKind::And: return kAndCorners;
    case GateKind::Or: return kOrCorners;
    case GateKind::Xor: return kXorCorners;
  }
  return kAndCorners;
}

double gate_penalty(GateKind kind, const Triple& v) {
  const auto& s = satisfying_corners(kind)[nearest_corner(satisfying_corners(kind), v)];
  double d2 = 0;
  for (int i = 0; i < 3; ++i) d2 += (v[i] - s[i]) * (v[i] - s[i]);
  return 0.25 * d2;
}

Triple gate_penalty_gradient(GateKind kind, const Triple& v) {
  const auto& s = satisfying_corners(kind)[nearest_corner(satisfying_corners(kind), v)];
  return {0.5 * (v[0] - s[0]), 0.5 * (v[1] - s[1]), 0.5 * (v[2] - s[2])};
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::Memcomputing ? "memcomputing" : "gradient";
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "memcomputing") return ModelKind::Memcomputing;
  if (name == "gradient") return ModelKind::GradientFlow;
  throw Error(ErrorCode::Parse, "unknown dynamics model '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Gradient flow

GradientFlowModel::GradientFlowModel(const Netlist& netlist, GradientFlowParams params, double v_cap)
    : netlist_(netlist), params_(params), v_cap_(v_cap) {}

void GradientFlowModel::init_memory(SimState& state) const {
  state.x.assign(netlist_.gates().size(), 1.0);
  state.s.clear();
}

void GradientFlowModel::derivatives(const SimState& state, Derivative& d) const {
  d.dv.assign(state.v.size(), 0.0);
  d.dx.resize(state.x.size());
  d.ds.clear();
  const auto& gates = netlist_.gates();
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const Gate& gate = gates[g];
    const Triple v = terminals(gate, state.v);
    const auto& s = satisfying_corners(gate.kind)[nearest_corner(satisfying_corners(gate.kind), v)];
    const double d0 = v[0] - s[0];
    const double d1 = v[1] - s[1];
    const double d2 = v[2] - s[2];
    const double w = 0.5 * state.x[g];
    d.dv[index(gate.in1)] -= w * d0;
    d.dv[index(gate.in2)] -= w * d1;
    d.dv[index(gate.out)] -= w * d2;
    d.dx[g] = params_.gamma * state.x[g] * 0.25 * (d0 * d0 + d1 * d1 + d2 * d2);
  }
  for (const auto& c : netlist_.clamps()) d.dv[index(c.node)] = 0.0;
}

void GradientFlowModel::project(SimState& state) const {
  for (auto& vi : state.v) vi = std::clamp(vi, -v_cap_, v_cap_);
  for (const auto& c : netlist_.clamps()) state.v[index(c.node)] = c.level;
  for (auto& xg : state.x) xg = std::clamp(xg, 1.0, params_.x_cap);
}

double GradientFlowModel::max_step(const SimState& state, const Derivative&) const {
  // Inside a corner's Voronoi cell each gate adds x_g / 2 to the (diagonal)
  // Hessian entry of every terminal it touches.
  thread_local std::vector<double> rate;
  rate.assign(state.v.size(), 0.0);
  const auto& gates = netlist_.gates();
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const double w = 0.5 * state.x[g];
    rate[index(gates[g].in1)] += w;
    rate[index(gates[g].in2)] += w;
    rate[index(gates[g].out)] += w;
  }
  for (const auto& c : netlist_.clamps()) rate[index(c.node)] = 0.0;
  const double worst = rate.empty() ? 0.0 : *std::max_element(rate.begin(), rate.end());
  return worst > 0 ? params_.stability / worst : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Memcomputing clause dynamics

MemcomputingModel::MemcomputingModel(const Netlist& netlist, MemcomputingParams params)
    : netlist_(netlist), params_(params) {
  for (const auto& g : netlist.gates()) {
    const std::array<std::uint32_t, 3> t{static_cast<std::uint32_t>(index(g.in1)),
                                         static_cast<std::uint32_t>(index(g.in2)),
                                         static_cast<std::uint32_t>(index(g.out))};
    for (int corner = 0; corner < 8; ++corner) {
      const std::array<bool, 3> bit{(corner & 4) != 0, (corner & 2) != 0, (corner & 1) != 0};
      if (gate_holds(g.kind, bit[0], bit[1], bit[2])) continue;
      // Corners that give one node two values cannot occur.
      bool reachable = true;
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) reachable = reachable && !(t[i] == t[j] && bit[i] != bit[j]);
      }
      if (!reachable) continue;
      Clause clause{{0, 0, 0}, {0, 0, 0}, 0};
      for (int k = 0; k < 3; ++k) {
        const bool duplicate = std::find(clause.var.begin(), clause.var.begin() + clause.size, t[k]) !=
                               clause.var.begin() + clause.size;
        if (duplicate) continue;
        clause.var[clause.size] = t[k];
        clause.q[clause.size] = bit[k] ? -1.0 : 1.0;
        ++clause.size;
      }
      clauses_.push_back(clause);
    }
  }
  for (const auto& c : netlist.clamps()) clamped_.push_back(static_cast<std::uint32_t>(index(c.node)));
  x_cap_ = std::max(1.0, params_.x_cap_per_clause * static_cast<double>(clauses_.size()));
}

void MemcomputingModel::init_memory(SimState& state) const {
  state.x.assign(clauses_.size(), 1.0);
  state.s.assign(clauses_.size(), 0.5);
}

void MemcomputingModel::derivatives(const SimState& state, Derivative& d) const {
  d.dv.assign(state.v.size(), 0.0);
  d.dx.resize(clauses_.size());
  d.ds.resize(clauses_.size());
  const auto& p = params_;
  for (std::size_t m = 0; m < clauses_.size(); ++m) {
    const Clause& cl = clauses_[m];
    std::array<double, 3> dist{};
    std::size_t best = 0;
    for (std::size_t k = 0; k < cl.size; ++k) {
      dist[k] = 1.0 - cl.q[k] * state.v[cl.var[k]];
      if (dist[k] < dist[best]) best = k;
    }
    const double c_m = 0.5 * dist[best];
    const double x = state.x[m];
    const double s = state.s[m];
    const double gradient_weight = x * s;
    const double rigidity_weight = (1.0 + p.zeta * x) * (1.0 - s);
    for (std::size_t k = 0; k < cl.size; ++k) {
      double others = 1.0;
      bool any = false;
      for (std::size_t j = 0; j < cl.size; ++j) {
        if (j == k) continue;
        others = any ? std::min(others, dist[j]) : dist[j];
        any = true;
      }
      double dv = gradient_weight * 0.5 * cl.q[k] * others;
      if (k == best) dv += rigidity_weight * 0.5 * (cl.q[k] - state.v[cl.var[k]]);
      d.dv[cl.var[k]] += dv;
    }
    d.ds[m] = p.beta * (s + p.epsilon) * (c_m - p.gamma);
    d.dx[m] = p.alpha * (c_m - p.delta);
  }
  for (auto id : clamped_) d.dv[id] = 0.0;
}

void MemcomputingModel::project(SimState& state) const {
  for (auto& vi : state.v) vi = std::clamp(vi, -1.0, 1.0);
  for (const auto& c : netlist_.clamps()) state.v[index(c.node)] = c.level;
  for (auto& x : state.x) x = std::clamp(x, 1.0, x_cap_);
  for (auto& s : state.s) s = std::clamp(s, 0.0, 1.0);
}

double MemcomputingModel::max_step(const SimState&, const Derivative& d) const {
  double worst = 0.0;
  for (double dv : d.dv) worst = std::max(worst, std::abs(dv));
  return worst > 0 ? params_.dv_max / worst : std::numeric_limits<double>::infinity();
}

std::unique_ptr<DynamicsModel> make_model(const Netlist& netlist, const SimConfig& config) {
  if (config.model == ModelKind::GradientFlow) {
    return std::make_unique<GradientFlowModel>(netlist, config.gradient, config.v_cap);
  }
  return std::make_unique<MemcomputingModel>(netlist, config.memcomputing);
}

// ---------------------------------------------------------------------------
// State and stepping

SimState init_state(const DynamicsModel& model, std::uint64_t seed) {
  const Netlist& netlist = model.netlist();
  SimState state;
  state.v.assign(netlist.node_count(), 0.0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < state.v.size(); ++i) {
    if (auto level = netlist.clamp_level(NodeId(static_cast<std::uint32_t>(i)))) {
      state.v[i] = *level;
      continue;
    }
    double sample = -1.0;
    while (sample == -1.0) sample = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    state.v[i] = sample;
  }
  model.init_memory(state);
  return state;
}

SimState init_state(const Netlist& netlist, const SimConfig& config) {
  return init_state(*make_model(netlist, config), config.seed);
}

namespace {

// Euler update of `from` along `d` into `to`; false if anything is non-finite.
bool euler_into(const DynamicsModel& model, const SimState& from, const Derivative& d, double dt, SimState& to) {
  to.t = from.t + dt;
  to.v.resize(from.v.size());
  to.x.resize(from.x.size());
  to.s.resize(from.s.size());
  bool finite = std::isfinite(to.t);
  for (std::size_t i = 0; i < from.v.size(); ++i) {
    to.v[i] = from.v[i] + dt * d.dv[i];
    finite = finite && std::isfinite(to.v[i]);
  }
  for (std::size_t k = 0; k < from.x.size(); ++k) {
    to.x[k] = from.x[k] + dt * d.dx[k];
    finite = finite && std::isfinite(to.x[k]);
  }
  for (std::size_t k = 0; k < from.s.size(); ++k) {
    to.s[k] = from.s[k] + dt * d.ds[k];
    finite = finite && std::isfinite(to.s[k]);
  }
  if (!finite) return false;
  model.project(to);
  return true;
}

}  // namespace

SimState step(const DynamicsModel& model, const SimState& state, double dt) {
  if (!(dt >= 0)) throw Error(ErrorCode::InvalidLayout, "dt must be non-negative");
  SimState shape;
  shape.v = state.v;
  model.init_memory(shape);
  if (state.v.size() != model.netlist().node_count() || shape.x.size() != state.x.size() ||
      shape.s.size() != state.s.size()) {
    throw Error(ErrorCode::InvalidLayout, "state does not match the model's netlist or memory layout");
  }
  if (dt == 0) return state;
  Derivative d;
  model.derivatives(state, d);
  SimState next;
  if (!euler_into(model, state, d, dt, next)) {
    throw Error(ErrorCode::NonFinite, "state became non-finite at t=" + std::to_string(state.t + dt));
  }
  return next;
}

SimState step(const Netlist& netlist, const SimState& state, double dt, const SimConfig& config) {
  return step(GradientFlowModel(netlist, config.gradient, config.v_cap), state, dt);
}

double convergence_metric(const Netlist& netlist, const SimState& state) {
  double worst = 0.0;
  auto visit = [&](NodeId id) {
    const double vi = state.v[index(id)];
    worst = std::max(worst, std::min(std::abs(vi - 1.0), std::abs(vi + 1.0)));
  };
  for (const auto& g : netlist.gates()) {
    visit(g.in1);
    visit(g.in2);
    visit(g.out);
  }
  return worst;
}

double total_penalty(const Netlist& netlist, const SimState& state) {
  double sum = 0.0;
  for (const auto& g : netlist.gates()) sum += gate_penalty(g.kind, terminals(g, state.v));
  return sum;
}

std::vector<std::uint8_t> threshold(const SimState& state) {
  std::vector<std::uint8_t> bits(state.v.size());
  std::transform(state.v.begin(), state.v.end(), bits.begin(), [](double v) { return v > 0 ? 1 : 0; });
  return bits;
}

bool gates_satisfied(const Netlist& netlist, const std::vector<std::uint8_t>& bits) {
  return std::all_of(netlist.gates().begin(), netlist.gates().end(), [&](const Gate& g) {
    return gate_holds(g.kind, bits[index(g.in1)] != 0, bits[index(g.in2)] != 0, bits[index(g.out)] != 0);
  });
}

DecodedSolution decode(const SimState& state, const Netlist& netlist, const EmbeddingLayout& layout) {
  const auto bits = threshold(state);
  const BigInt b = register_value(netlist, bits, "b");
  const BigInt b_f = register_value(netlist, bits, "b_f");
  const BigInt c_f = register_value(netlist, bits, "c_f");
  return make_solution((b << layout.n_b) + b_f, c_f, layout);
}

namespace {

double metric_over(std::span<const NodeId> nodes, const SimState& state) {
  double worst = 0.0;
  for (auto id : nodes) {
    const double vi = state.v[index(id)];
    worst = std::max(worst, std::min(std::abs(vi - 1.0), std::abs(vi + 1.0)));
  }
  return worst;
}

}  // namespace

IntegrationResult integrate(const DynamicsModel& model, const SimConfig& config) {
  config.validate();
  const auto terminals = model.netlist().terminal_nodes();
  IntegrationResult result;
  SimState state = init_state(model, config.seed);
  SimState next;
  Derivative d;
  double dt = config.dt_initial;
  double c = metric_over(terminals, state);

  auto record = [&] {
    TraceSample sample{state.t, c, {}};
    if (config.record_voltages) sample.v = state.v;
    result.trace.samples.push_back(std::move(sample));
  };
  record();

  // C alone can dip below epsilon while a violated corner is being left, so
  // convergence also requires the thresholded bits to satisfy every gate.
  auto settled = [&] { return c <= config.epsilon && gates_satisfied(model.netlist(), threshold(state)); };
  bool done = settled();
  while (!done && state.t < config.t_max) {
    model.derivatives(state, d);
    double h = std::min(dt, model.max_step(state, d));
    while (!euler_into(model, state, d, h, next)) {
      h *= 0.5;
      if (h < 1e-12) throw Error(ErrorCode::NonFinite, "step size underflow at t=" + std::to_string(state.t));
    }
    dt = std::min(h * 1.1, config.dt_initial);
    std::swap(state, next);
    ++result.steps;
    c = metric_over(terminals, state);
    done = settled();
    if (result.steps % config.record_every == 0) record();
  }
  if (result.trace.samples.back().t != state.t) record();

  result.converged = done;
  result.t_c = state.t;
  result.final_c = c;
  result.state = std::move(state);
  return result;
}

IntegrationResult integrate(const Netlist& netlist, const SimConfig& config) {
  return integrate(*make_model(netlist, config), config);
}

std::pair<Trace, SolveReport> run(const Netlist& netlist, const EmbeddingLayout& layout, const SimConfig& config) {
  const EmbeddedInstance instance{clamped_register_value(netlist, "a"), clamped_register_value(netlist, "c"), layout};
  auto result = integrate(netlist, config);

  SolveReport report;
  report.converged = result.converged;
  report.steps = result.steps;
  report.final_c = result.final_c;
  report.gates_ok = gates_satisfied(netlist, threshold(result.state));
  if (result.converged) {
    report.t_c = result.t_c;
    report.decoded = decode(result.state, netlist, layout);
    report.identity_ok = verify_identity(*report.decoded, instance);
    if (*report.identity_ok) report.readout_flag = classify_readout(report.decoded->b_bits, instance);
  }
  return {std::move(result.trace), std::move(report)};
}

}  // namespace meminv
