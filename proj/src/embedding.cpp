// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include "meminv/embedding.hpp"

#include <algorithm>

#include "meminv/error.hpp"

namespace meminv {

namespace {

BigInt pow2(int k) { return BigInt(1) << k; }

int bit_length(const BigInt& v) { return v == 0 ? 0 : static_cast<int>(boost::multiprecision::msb(v)) + 1; }

}  // namespace

BigInt bits_to_int(const Bits& bits) {
  BigInt v = 0;
  for (auto b : bits) {
    v <<= 1;
    if (b) v |= 1;
  }
  return v;
}

Bits int_to_bits(const BigInt& value, int width) {
  if (value < 0 || width < 0 || bit_length(value) > width) {
    throw Error(ErrorCode::InvalidLayout, "value does not fit in " + std::to_string(width) + " bits");
  }
  Bits out(static_cast<std::size_t>(width), 0);
  for (int i = 0; i < width; ++i) {
    out[static_cast<std::size_t>(width - 1 - i)] = boost::multiprecision::bit_test(value, static_cast<unsigned>(i)) ? 1 : 0;
  }
  return out;
}

std::string bits_to_string(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Bits bits_from_string(const std::string& text) {
  Bits out;
  out.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw Error(ErrorCode::Parse, "not a bit string: '" + text + "'");
    out.push_back(ch == '1' ? 1 : 0);
  }
  return out;
}

Rational FixedPointScalar::value() const {
  Rational frac(mantissa_int(), pow2(width()));
  Rational scale = exponent >= 0 ? Rational(pow2(exponent)) : Rational(BigInt(1), pow2(-exponent));
  Rational v = frac * scale;
  return sign == Sign::Minus ? Rational(-v) : v;
}

void EmbeddingLayout::validate() const {
  if (n < 1 || n_a < 0 || n_b < 0 || n_b > n) {
    throw Error(ErrorCode::InvalidLayout, "need n >= 1, n_a >= 0, 0 <= n_b <= n (got n=" + std::to_string(n) +
                                              ", n_a=" + std::to_string(n_a) + ", n_b=" + std::to_string(n_b) + ")");
  }
}

std::string_view to_string(ReadoutFlag flag) {
  return flag == ReadoutFlag::Exact ? "exact" : "plus-one-ulp";
}

FixedPointScalar normalize(Sign sign, int exponent, const Bits& raw_mantissa) {
  auto first_one = std::find(raw_mantissa.begin(), raw_mantissa.end(), std::uint8_t{1});
  if (first_one == raw_mantissa.end()) throw Error(ErrorCode::ZeroMantissa, "zero has no normalized form");
  const auto shift = static_cast<int>(first_one - raw_mantissa.begin());
  Bits mantissa(first_one, raw_mantissa.end());
  mantissa.resize(raw_mantissa.size(), 0);
  return FixedPointScalar{sign, exponent - shift, std::move(mantissa)};
}

int solve_exponent(int m_a, int m_c) { return m_c - m_a; }

Sign sign_of_quotient(Sign s_a, Sign s_c) { return s_a == s_c ? Sign::Plus : Sign::Minus; }

EmbeddedInstance build_embedding(const FixedPointScalar& a, const FixedPointScalar& c, const EmbeddingLayout& layout,
                                 EmbedMode mode) {
  layout.validate();
  if (a.width() != layout.n || c.width() != layout.n) {
    throw Error(ErrorCode::LayoutMismatch, "mantissa widths " + std::to_string(a.width()) + "/" +
                                               std::to_string(c.width()) + " differ from n=" + std::to_string(layout.n));
  }
  EmbeddedInstance inst{a.mantissa_int(), c.mantissa_int(), layout};
  if (inst.a_int == 0) throw Error(ErrorCode::DivisorZero, "a has a zero mantissa");
  if (mode == EmbedMode::Strict) {
    if (!a.normalized() || !c.normalized()) {
      throw Error(ErrorCode::InvalidLayout, "strict mode needs normalized operands");
    }
    if (inst.c_int >= inst.a_int) {
      inst.dropped_low_bit = boost::multiprecision::bit_test(inst.c_int, 0);
      inst.c_int >>= 1;
      inst.exponent_adjust = 1;
    }
  }
  return inst;
}

EmbeddingLayout reduce_precision_bits(const EmbeddingLayout& layout) {
  EmbeddingLayout out = layout;
  out.n_a = 0;
  return out;
}

DecodedSolution make_solution(const BigInt& b_hat, const BigInt& c_f, const EmbeddingLayout& layout) {
  DecodedSolution sol;
  sol.b_hat = b_hat;
  sol.b_f = b_hat & (pow2(layout.n_b) - 1);
  sol.b_bits = int_to_bits(b_hat >> layout.n_b, layout.n);
  sol.c_f = c_f;
  return sol;
}

DecodedSolution oracle_divide(const EmbeddedInstance& instance) {
  const auto& L = instance.layout;
  L.validate();
  if (instance.a_int <= 0) throw Error(ErrorCode::DivisorZero, "a_int must be positive");
  const BigInt divisor = instance.a_int << L.n_a;
  const BigInt target = instance.c_int << (L.n + L.n_a + L.n_b);
  // Euclidean division target = divisor*q + r; ceiling keeps the slack non-negative.
  BigInt q = target / divisor;
  const BigInt r = target % divisor;
  if (r != 0) q += 1;
  if (q >= pow2(L.n + L.n_b)) {
    throw Error(ErrorCode::QuotientOverflow, "b_hat needs more than n+n_b bits (c_int >= a_int?)");
  }
  const BigInt c_f = divisor * q - target;
  if (c_f >= pow2(L.c_f_width())) {
    throw Error(ErrorCode::SlackOverflow, "c_f=" + c_f.str() + " exceeds " + std::to_string(L.c_f_width()) + " slack bits");
  }
  return make_solution(q, c_f, L);
}

bool verify_identity(const DecodedSolution& sol, const EmbeddedInstance& instance) {
  const auto& L = instance.layout;
  if (sol.b_f < 0 || sol.b_f >= pow2(L.n_b)) return false;
  if (sol.c_f < 0 || sol.c_f >= pow2(L.c_f_width())) return false;
  if (sol.b_hat != (bits_to_int(sol.b_bits) << L.n_b) + sol.b_f) return false;
  const BigInt lhs = (instance.a_int << L.n_a) * sol.b_hat;
  const BigInt rhs = (instance.c_int << (L.n + L.n_a + L.n_b)) + sol.c_f;
  return lhs == rhs;
}

std::vector<DecodedSolution> enumerate_solutions(const EmbeddedInstance& instance) {
  const auto& L = instance.layout;
  L.validate();
  if (L.n + L.n_b > 24) throw Error(ErrorCode::TooLarge, "enumeration limited to n + n_b <= 24");
  const BigInt divisor = instance.a_int << L.n_a;
  const BigInt target = instance.c_int << (L.n + L.n_a + L.n_b);
  const BigInt slack_limit = pow2(L.c_f_width());
  const std::uint64_t limit = std::uint64_t{1} << (L.n + L.n_b);
  std::vector<DecodedSolution> out;
  for (std::uint64_t b = 0; b < limit; ++b) {
    const BigInt c_f = divisor * b - target;
    if (c_f >= 0 && c_f < slack_limit) out.push_back(make_solution(BigInt(b), c_f, L));
  }
  return out;
}

std::optional<ReadoutFlag> classify_readout(const Bits& b_bits, const EmbeddedInstance& instance) {
  const auto& L = instance.layout;
  const BigInt truncated = (instance.c_int << L.n) / instance.a_int;
  const BigInt got = bits_to_int(b_bits);
  if (got == truncated) return ReadoutFlag::Exact;
  if (got == truncated + 1) return ReadoutFlag::PlusOneUlp;
  return std::nullopt;
}

}  // namespace meminv
