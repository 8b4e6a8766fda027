// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace hemacd {

// Deterministic ChaCha20 keystream generator (libsodium). A given seed
// always produces the same stream; `derive` forks independent streams by
// label so that e.g. per-trader keys do not share randomness.
class Prng {
 public:
  using Seed = std::array<std::uint8_t, 32>;

  explicit Prng(const Seed& seed);
  // Expands a 64-bit user seed into a 256-bit key.
  explicit Prng(std::uint64_t seed);

  // Seed drawn from the operating system.
  static Prng from_entropy();

  Prng derive(std::string_view label) const;
  Prng derive(std::string_view label, std::uint64_t index) const;

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  // Uniform in [0, bound) by rejection.
  std::uint64_t uniform(std::uint64_t bound);
  // Uniform in [0, 1).
  double next_double();

  const Seed& seed() const { return seed_; }

 private:
  void refill();

  Seed seed_{};
  std::uint64_t block_counter_ = 0;
  std::array<std::uint8_t, 256> buffer_{};
  std::size_t buffer_pos_ = 256;
};

}  // namespace hemacd
