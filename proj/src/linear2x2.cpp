// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include "meminv/linear2x2.hpp"

#include <algorithm>
#include <future>

#include <boost/multiprecision/integer.hpp>

#include "meminv/error.hpp"

namespace meminv {

namespace {

Rational pow2(int e) {
  const BigInt p = BigInt(1) << std::abs(e);
  return e >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

int bit_length(const BigInt& v) { return v == 0 ? 0 : static_cast<int>(boost::multiprecision::msb(v)) + 1; }

int trailing_zeros(const BigInt& v) { return static_cast<int>(boost::multiprecision::lsb(v)); }

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

BigInt as_integer(const Rational& r) {
  if (denominator(r) != 1) throw Error(ErrorCode::InvalidLayout, "scaled entry is not an integer");
  return numerator(r);
}

std::vector<NodeId> reversed(std::span<const NodeId> nodes) { return {nodes.rbegin(), nodes.rend()}; }

void clamp_bits(Netlist& netlist, std::span<const NodeId> nodes_msb, const BigInt& value) {
  const Bits bits = int_to_bits(value, static_cast<int>(nodes_msb.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) netlist.clamp(nodes_msb[i], bits[i] ? 1 : -1);
}

const char* const kEntryNames[2][2] = {{"a11", "a12"}, {"a21", "a22"}};

}  // namespace

const FixedPointScalar& Matrix2::at(int row, int col) const {
  return row == 0 ? (col == 0 ? a11 : a12) : (col == 0 ? a21 : a22);
}

FixedPointScalar& Matrix2::at(int row, int col) {
  return row == 0 ? (col == 0 ? a11 : a12) : (col == 0 ? a21 : a22);
}

Rational Matrix2::determinant() const { return a11.value() * a22.value() - a12.value() * a21.value(); }

RationalMatrix to_rational(const Matrix2& m) {
  RationalMatrix r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) r[i][j] = m.value(i, j);
  }
  return r;
}

RationalMatrix exact_inverse(const Matrix2& m) {
  const Rational det = m.determinant();
  if (det == 0) throw Error(ErrorCode::Singular, "matrix has zero determinant");
  const auto a = to_rational(m);
  return {{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}};
}

Rational inf_norm(const RationalMatrix& m) {
  return std::max(abs(m[0][0]) + abs(m[0][1]), abs(m[1][0]) + abs(m[1][1]));
}

FixedPointScalar fixed_from_integer(long long value, int width) {
  const BigInt magnitude = value < 0 ? BigInt(-BigInt(value)) : BigInt(value);
  return FixedPointScalar{value < 0 ? Sign::Minus : Sign::Plus, width, int_to_bits(magnitude, width)};
}

SignedProductNodes build_signed_product(Netlist& netlist, std::span<const NodeId> a_magnitude, NodeId a_sign,
                                        std::span<const NodeId> x_magnitude, NodeId x_sign, int width, NodeId zero) {
  const auto a_lsb = reversed(a_magnitude);
  const auto x_lsb = reversed(x_magnitude);
  auto product = build_array_multiplier(netlist, a_lsb, x_lsb);
  if (width < 1) throw Error(ErrorCode::InvalidLayout, "product width must be positive");
  // Bits above `width` stay in the netlist but do not feed the result.
  product.resize(static_cast<std::size_t>(width), zero);
  const NodeId sign = netlist.add_gate_output(GateKind::Xor, a_sign, x_sign);
  return {build_twos_complement_stage(netlist, reversed(product), sign), sign};
}

ColumnSystem build_column_system(const Matrix2& a, int column_index, const EmbeddingLayout& layout) {
  layout.validate();
  if (layout.n_a != 0) throw Error(ErrorCode::LayoutMismatch, "linear systems do not use n_a padding");
  if (column_index != 1 && column_index != 2) throw Error(ErrorCode::InvalidLayout, "column index must be 1 or 2");
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (a.at(i, j).width() != layout.n) {
        throw Error(ErrorCode::LayoutMismatch, std::string(kEntryNames[i][j]) + " has width " +
                                                   std::to_string(a.at(i, j).width()) + ", expected " +
                                                   std::to_string(layout.n));
      }
    }
  }
  const Rational det = a.determinant();
  if (det == 0) throw Error(ErrorCode::Singular, "matrix has zero determinant");

  ColumnSystem sys;
  sys.column = column_index;
  sys.layout = layout;
  const int n = layout.n;

  // Every inverse entry is some +/-a_ij / det.
  Rational largest = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) largest = std::max(largest, abs(a.value(i, j)));
  }
  const Rational bound = largest / abs(det);
  int e = 0;
  while (bound >= pow2(e)) ++e;
  while (bound < pow2(e - 1)) --e;
  sys.x_exponent = e;

  int scale = e - n;  // keeps the rhs 2^(scale + n - e) integral
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto& entry = a.at(i, j);
      const BigInt m = entry.mantissa_int();
      if (m != 0) scale = std::max(scale, n - entry.exponent - trailing_zeros(m));
    }
  }
  sys.scale = scale;

  int w_a = 1;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      sys.a_int[i][j] = a.value(i, j) * pow2(scale);
      w_a = std::max(w_a, bit_length(as_integer(abs(sys.a_int[i][j]))));
    }
  }
  const BigInt unit = BigInt(1) << (scale + n - e);
  sys.rhs = {column_index == 1 ? unit : BigInt(0), column_index == 2 ? unit : BigInt(0)};
  // Row sums and the rhs must both fit the signed range, so that equality
  // modulo 2^width is equality of integers.
  BigInt extreme = unit;
  const BigInt x_max = (BigInt(1) << n) - 1;
  const BigInt slack_max = (BigInt(1) << layout.n_b) - 1;
  for (int i = 0; i < 2; ++i) {
    const BigInt row = as_integer(abs(sys.a_int[i][0]) + abs(sys.a_int[i][1])) * x_max + slack_max;
    extreme = std::max(extreme, row);
  }
  sys.width = bit_length(extreme) + 1;
  const int width = sys.width;

  Netlist& net = sys.netlist;
  const NodeId zero = net.add_node();
  net.clamp(zero, -1);
  net.set_register("zero", {zero});

  std::array<NodeId, 2> x_sign{};
  std::array<std::vector<NodeId>, 2> x_mag;
  for (int j = 0; j < 2; ++j) {
    const std::string name = "x" + std::to_string(j + 1);
    x_sign[j] = net.add_node();
    x_mag[j] = net.add_nodes(static_cast<std::size_t>(n));
    net.set_register(name + "_sign", {x_sign[j]});
    net.set_register(name, x_mag[j]);
  }

  std::optional<NodeId> one;
  if (layout.n_b > 0) {
    one = net.add_node();
    net.clamp(*one, 1);
    net.set_register("one", {*one});
  }

  for (int i = 0; i < 2; ++i) {
    std::array<std::vector<NodeId>, 2> terms;
    for (int j = 0; j < 2; ++j) {
      const std::string name = kEntryNames[i][j];
      const BigInt value = as_integer(sys.a_int[i][j]);
      const auto magnitude = net.add_nodes(static_cast<std::size_t>(w_a));
      const NodeId sign = net.add_node();
      clamp_bits(net, magnitude, value < 0 ? BigInt(-value) : value);
      net.clamp(sign, value < 0 ? 1 : -1);
      net.set_register(name, magnitude);
      net.set_register(name + "_sign", {sign});
      terms[j] = reversed(build_signed_product(net, magnitude, sign, x_mag[j], x_sign[j], width, zero).value);
    }
    auto sum = build_ripple_adder(net, terms[0], terms[1]);
    if (layout.n_b > 0) {
      const std::string name = "slack" + std::to_string(i + 1);
      const auto slack = net.add_nodes(static_cast<std::size_t>(layout.n_b));
      net.set_register(name, slack);
      std::vector<NodeId> extended(static_cast<std::size_t>(width - layout.n_b), zero);
      extended.insert(extended.end(), slack.begin(), slack.end());
      const auto negated = reversed(build_twos_complement_stage(net, extended, *one));
      sum = build_ripple_adder(net, sum, negated);
    }
    const auto sum_msb = reversed(sum);
    clamp_bits(net, sum_msb, sys.rhs[i]);
    net.set_register("eq" + std::to_string(i + 1), sum_msb);
  }
  return sys;
}

ColumnDecode decode_column(const ColumnSystem& system, const std::vector<std::uint8_t>& bits) {
  const Netlist& net = system.netlist;
  ColumnDecode d;
  std::array<BigInt, 2> signed_x;
  for (int j = 0; j < 2; ++j) {
    const std::string name = "x" + std::to_string(j + 1);
    d.magnitude[j] = register_value(net, bits, name);
    d.sign[j] = register_value(net, bits, name + "_sign") != 0 && d.magnitude[j] != 0 ? Sign::Minus : Sign::Plus;
    signed_x[j] = d.sign[j] == Sign::Minus ? BigInt(-d.magnitude[j]) : d.magnitude[j];
    d.x[j] = Rational(signed_x[j]) * pow2(system.x_exponent - system.layout.n);
  }
  d.identity_ok = true;
  for (int i = 0; i < 2; ++i) {
    const std::string name = "slack" + std::to_string(i + 1);
    d.slack[i] = net.has_register(name) ? register_value(net, bits, name) : BigInt(0);
    const Rational lhs = system.a_int[i][0] * Rational(signed_x[0]) + system.a_int[i][1] * Rational(signed_x[1]);
    d.identity_ok = d.identity_ok && lhs == Rational(system.rhs[i] + d.slack[i]);
  }
  return d;
}

namespace {

ColumnReport solve_column(const ColumnSystem& system, SimConfig config) {
  auto result = integrate(system.netlist, config);
  ColumnReport report;
  report.column = system.column;
  report.seed = config.seed;
  report.converged = result.converged;
  report.steps = result.steps;
  report.final_c = result.final_c;
  const auto bits = threshold(result.state);
  report.gates_ok = gates_satisfied(system.netlist, bits);
  if (result.converged) {
    report.t_c = result.t_c;
    report.decoded = decode_column(system, bits);
  }
  report.trace = std::move(result.trace);
  return report;
}

}  // namespace

MatrixInverseResult invert_matrix(const Matrix2& a, const EmbeddingLayout& layout, const SimConfig& config,
                                  bool parallel) {
  config.validate();
  const std::array<ColumnSystem, 2> systems{build_column_system(a, 1, layout), build_column_system(a, 2, layout)};
  std::array<SimConfig, 2> configs{config, config};
  configs[1].seed = config.seed + 1;

  MatrixInverseResult out;
  if (parallel) {
    auto second = std::async(std::launch::async, solve_column, std::cref(systems[1]), configs[1]);
    out.columns[0] = solve_column(systems[0], configs[0]);
    out.columns[1] = second.get();
  } else {
    for (int k = 0; k < 2; ++k) out.columns[k] = solve_column(systems[k], configs[k]);
  }

  const auto inverse = exact_inverse(a);
  out.kappa_bound = inf_norm(to_rational(a)) * inf_norm(inverse);

  const bool solved = std::all_of(out.columns.begin(), out.columns.end(), [](const ColumnReport& c) {
    return c.converged && c.decoded && c.decoded->identity_ok;
  });
  if (!solved) return out;

  Matrix2 x;
  RationalMatrix xr;
  for (int k = 0; k < 2; ++k) {
    const auto& d = *out.columns[k].decoded;
    for (int j = 0; j < 2; ++j) {
      x.at(j, k) = FixedPointScalar{d.sign[j], systems[k].x_exponent, int_to_bits(d.magnitude[j], layout.n)};
      xr[j][k] = d.x[j];
    }
  }
  const auto ar = to_rational(a);
  RationalMatrix residual;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) residual[i][k] = ar[i][0] * xr[0][k] + ar[i][1] * xr[1][k] - Rational(i == k ? 1 : 0);
  }
  out.x = x;
  out.residual = inf_norm(residual);
  out.residual_ok = *out.residual <= pow2(1 - layout.n) * out.kappa_bound;
  return out;
}

}  // namespace meminv
