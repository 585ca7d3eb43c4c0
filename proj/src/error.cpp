// Copyright 2026 The meminv Authors
// SPDX-License-Identifier: Apache-2.0

#include "meminv/error.hpp"

namespace meminv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroMantissa: return "ZeroMantissa";
    case ErrorCode::DivisorZero: return "DivisorZero";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::InvalidLayout: return "InvalidLayout";
    case ErrorCode::SlackOverflow: return "SlackOverflow";
    case ErrorCode::QuotientOverflow: return "QuotientOverflow";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::DuplicateClamp: return "DuplicateClamp";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::Mismatch: return "Mismatch";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace meminv
