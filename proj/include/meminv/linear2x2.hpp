// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

// 2x2 matrix inversion as two independent linear systems A x = e_k.
//
// Entries are scaled by a common power of two to integers A_ij. Each unknown
// is a sign bit plus an n-bit magnitude X_j, with x_j = +/-X_j 2^(e_x - n).
// Every product A_ij x_j is an array multiplier followed by a sign XOR and a
// two's-complement stage; the two products of a row are summed together with
// the negated slack register of that row and clamped to the scaled rhs:
//   A_i1 X_1 + A_i2 X_2 = B_i + slack_i,   0 <= slack_i < 2^nb.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "meminv/circuit.hpp"
#include "meminv/dynamics.hpp"
#include "meminv/embedding.hpp"

namespace meminv {

struct Matrix2 {
  FixedPointScalar a11, a12, a21, a22;

  /// Row-major, zero-based.
  const FixedPointScalar& at(int row, int col) const;
  FixedPointScalar& at(int row, int col);
  Rational value(int row, int col) const { return at(row, col).value(); }
  Rational determinant() const;

  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

using RationalMatrix = std::array<std::array<Rational, 2>, 2>;

RationalMatrix to_rational(const Matrix2& m);
/// Exact inverse; throws Singular for a zero determinant.
RationalMatrix exact_inverse(const Matrix2& m);
/// Maximum absolute row sum.
Rational inf_norm(const RationalMatrix& m);

/// Signed integer as a fixed-point scalar with the given mantissa width,
/// e.g. -3 at width 3 is -2^2 * 0.011. Throws InvalidLayout if it does not fit.
FixedPointScalar fixed_from_integer(long long value, int width);

struct ColumnSystem {
  Netlist netlist;
  int column = 1;        // 1 or 2
  EmbeddingLayout layout;
  int scale = 0;         // A_int = A * 2^scale
  int x_exponent = 0;    // x_j = +/-X_j * 2^(x_exponent - n)
  int width = 0;         // two's-complement width of the row sums
  RationalMatrix a_int;  // integer-valued entries of the scaled matrix
  std::array<BigInt, 2> rhs;
};

struct SignedProductNodes {
  std::vector<NodeId> value;  // `width` bits, two's complement, MSB first
  NodeId sign;                // XOR of the operand signs
};

/// (-1)^a_sign |a| times (-1)^x_sign |x| as a `width`-bit two's-complement
/// word (modulo 2^width). Magnitudes are MSB first; `zero` must be a node
/// fixed at 0 and is used to extend the unsigned product to `width` bits.
SignedProductNodes build_signed_product(Netlist& netlist, std::span<const NodeId> a_magnitude, NodeId a_sign,
                                        std::span<const NodeId> x_magnitude, NodeId x_sign, int width, NodeId zero);

/// Registers: x1_sign, x1, x2_sign, x2 (unknowns), slack1, slack2 (when
/// n_b > 0), a11..a22 with their _sign bits, and row sums eq1, eq2.
/// Throws Singular, or LayoutMismatch when an entry's width differs from n.
ColumnSystem build_column_system(const Matrix2& a, int column_index, const EmbeddingLayout& layout);

struct ColumnDecode {
  std::array<Sign, 2> sign{Sign::Plus, Sign::Plus};
  std::array<BigInt, 2> magnitude;
  std::array<BigInt, 2> slack;
  std::array<Rational, 2> x;
  bool identity_ok = false;  // A_int X = B + slack holds exactly
};

/// Reads the unknowns and slacks from a 0/1 value per node.
ColumnDecode decode_column(const ColumnSystem& system, const std::vector<std::uint8_t>& bits);

struct ColumnReport {
  int column = 1;
  bool converged = false;
  double t_c = 0.0;
  std::size_t steps = 0;
  double final_c = 0.0;
  bool gates_ok = false;
  std::uint64_t seed = 0;
  std::optional<ColumnDecode> decoded;
  Trace trace;
};

struct MatrixInverseResult {
  std::optional<Matrix2> x;  // present when both columns converged with a valid identity
  std::array<ColumnReport, 2> columns;
  std::optional<Rational> residual;  // ||A X - I||_inf, exact
  Rational kappa_bound;              // ||A||_inf ||A^-1||_inf
  bool residual_ok = false;          // residual <= 2^(1-n) kappa_bound
};

/// Solves both columns, column k with seed config.seed + k - 1, concurrently
/// unless `parallel` is false. Throws Singular.
MatrixInverseResult invert_matrix(const Matrix2& a, const EmbeddingLayout& layout, const SimConfig& config,
                                  bool parallel = true);

}  // namespace meminv
