// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace meminv {

enum class ErrorCode {
  ZeroMantissa,
  DivisorZero,
  LayoutMismatch,
  InvalidLayout,
  SlackOverflow,
  QuotientOverflow,
  TooLarge,
  UnknownNode,
  DuplicateClamp,
  NonFinite,
  Singular,
  Mismatch,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code; every failure in the library
/// is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace meminv
