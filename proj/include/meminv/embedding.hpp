// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

// Exact-arithmetic layer: fixed-point operands, the integer embedding
// a * (b * 2^nb + b_f) = c * 2^(n + nb) + c_f, and its Euclidean-division
// oracle.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace meminv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Bit vector, most-significant bit first.
using Bits = std::vector<std::uint8_t>;

enum class Sign : std::int8_t { Plus = 1, Minus = -1 };

BigInt bits_to_int(const Bits& bits);
/// Low `width` bits of `value`, MSB first. Throws InvalidLayout if value does not fit.
Bits int_to_bits(const BigInt& value, int width);
std::string bits_to_string(const Bits& bits);
/// Parses a string of '0'/'1' characters; throws Parse on anything else.
Bits bits_from_string(const std::string& text);

/// sign * 2^exponent * 0.m_{n-1}...m_0
struct FixedPointScalar {
  Sign sign = Sign::Plus;
  int exponent = 0;
  Bits mantissa;

  int width() const { return static_cast<int>(mantissa.size()); }
  bool normalized() const { return !mantissa.empty() && mantissa.front() == 1; }
  BigInt mantissa_int() const { return bits_to_int(mantissa); }
  Rational value() const;

  friend bool operator==(const FixedPointScalar&, const FixedPointScalar&) = default;
};

struct EmbeddingLayout {
  int n = 1;    // mantissa width
  int n_a = 0;  // enhanced-precision padding on a
  int n_b = 1;  // floating (SAT) bits on b and c

  /// Throws InvalidLayout unless n >= 1, n_a >= 0 and 0 <= n_b <= n.
  void validate() const;
  int b_hat_width() const { return n + n_b; }
  int c_f_width() const { return n_a + n_b; }

  friend bool operator==(const EmbeddingLayout&, const EmbeddingLayout&) = default;
};

struct EmbeddedInstance {
  BigInt a_int;
  BigInt c_int;
  EmbeddingLayout layout;
  // +1 when strict mode halved c to restore c_int < a_int; the quotient
  // exponent must then be raised by one.
  int exponent_adjust = 0;
  // Set when the halving discarded a 1 bit of c.
  bool dropped_low_bit = false;
};

struct DecodedSolution {
  BigInt b_hat;
  Bits b_bits;  // top n bits of b_hat
  BigInt b_f;
  BigInt c_f;

  friend bool operator==(const DecodedSolution&, const DecodedSolution&) = default;
};

enum class EmbedMode { Strict, Raw };

enum class ReadoutFlag { Exact, PlusOneUlp };
std::string_view to_string(ReadoutFlag flag);

/// Left-shifts the mantissa until its leading bit is 1, lowering the exponent
/// by the shift count. Throws ZeroMantissa for an all-zero mantissa.
FixedPointScalar normalize(Sign sign, int exponent, const Bits& raw_mantissa);

int solve_exponent(int m_a, int m_c);
Sign sign_of_quotient(Sign s_a, Sign s_c);

EmbeddedInstance build_embedding(const FixedPointScalar& a, const FixedPointScalar& c,
                                 const EmbeddingLayout& layout, EmbedMode mode = EmbedMode::Raw);

EmbeddingLayout reduce_precision_bits(const EmbeddingLayout& layout);

/// Minimal satisfying b_hat = ceil(c * 2^(n+na+nb) / (a * 2^na)).
DecodedSolution oracle_divide(const EmbeddedInstance& instance);

bool verify_identity(const DecodedSolution& sol, const EmbeddedInstance& instance);

/// Every (b_hat, c_f) pair satisfying the identity, ordered by b_hat.
/// Requires n + n_b <= 24.
std::vector<DecodedSolution> enumerate_solutions(const EmbeddedInstance& instance);

/// Assembles a DecodedSolution from raw register integers.
DecodedSolution make_solution(const BigInt& b_hat, const BigInt& c_f, const EmbeddingLayout& layout);

/// Compares a readout against floor(c * 2^n / a). Empty when it is neither
/// the truncation nor one ulp above it.
std::optional<ReadoutFlag> classify_readout(const Bits& b_bits, const EmbeddedInstance& instance);

}  // namespace meminv
