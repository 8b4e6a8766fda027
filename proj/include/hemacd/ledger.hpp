// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Level/scale rules shared by the real scheme and the exact-simulation
// engine. Both engines call the same checks in the same order, so a depth or
// alignment failure surfaces at the same operation in either engine.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "hemacd/errors.hpp"

namespace hemacd::ledger {

// Relative tolerance for "equal" scales.
inline constexpr double kScaleTolerance = 0x1.0p-30;

inline bool scales_match(double a, double b) {
  return std::abs(a - b) <= kScaleTolerance * std::max(std::abs(a), std::abs(b));
}

inline void check_level_range(int level, int top_level) {
  if (level < 0 || level > top_level) {
    throw AlignmentError("level " + std::to_string(level) + " outside [0, " +
                         std::to_string(top_level) + "]");
  }
}

inline void check_same_level_and_scale(const char* op, int level_a, double scale_a, int level_b,
                                       double scale_b) {
  if (level_a != level_b) {
    throw AlignmentError(std::string(op) + ": operand levels differ (" + std::to_string(level_a) +
                         " vs " + std::to_string(level_b) + ")");
  }
  if (!scales_match(scale_a, scale_b)) {
    throw AlignmentError(std::string(op) + ": operand scales differ beyond 2^-30 relative");
  }
}

inline void check_same_level(const char* op, int level_a, int level_b) {
  if (level_a != level_b) {
    throw AlignmentError(std::string(op) + ": operand levels differ (" + std::to_string(level_a) +
                         " vs " + std::to_string(level_b) + ")");
  }
}

// A multiplication must leave a prime to rescale by.
inline void check_can_multiply(const char* op, int level) {
  if (level <= 0) {
    throw DepthError(std::string(op) + ": multiplicative depth exhausted at level 0");
  }
}

// log2 of the product scale must leave at least one bit of headroom below
// the current modulus.
inline void check_headroom(const char* op, double product_scale, double log2_modulus) {
  if (!(product_scale > 0.0) || std::log2(product_scale) >= log2_modulus - 1.0) {
    throw EncodingError(std::string(op) + ": scale 2^" + std::to_string(std::log2(product_scale)) +
                        " exceeds modulus headroom 2^" + std::to_string(log2_modulus));
  }
}

// A value encoded at `scale` must leave one bit of headroom as well.
inline void check_encodable(double x, double scale, double log2_modulus, int level) {
  if (!std::isfinite(x)) throw EncodingError("cannot encode a non-finite value");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw EncodingError("encoding scale must be positive");
  }
  if (x != 0.0 && std::log2(std::abs(x)) + std::log2(scale) >= log2_modulus - 1.0) {
    throw EncodingError("value " + std::to_string(x) + " at scale 2^" +
                        std::to_string(std::log2(scale)) +
                        " exceeds the modulus headroom at level " + std::to_string(level));
  }
}

inline void check_can_rescale(int level) {
  if (level <= 0) throw DepthError("rescale: no prime left to drop at level 0");
}

inline void check_mod_switch(int from, int to) {
  if (to < 0) throw AlignmentError("mod_switch_to: target level below 0");
  if (to > from) {
    throw AlignmentError("mod_switch_to: target level " + std::to_string(to) +
                         " above current level " + std::to_string(from));
  }
}

}  // namespace hemacd::ledger
