// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hemacd {

using u128 = unsigned __int128;

inline std::uint64_t mul_hi(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) >> 64);
}

// A word-sized modulus (q < 2^62) with a precomputed Barrett ratio
// floor(2^128 / q) for reducing 128-bit products.
class Modulus {
 public:
  Modulus() = default;
  explicit Modulus(std::uint64_t value);

  std::uint64_t value() const { return value_; }
  int bit_count() const { return bit_count_; }

  std::uint64_t reduce(std::uint64_t a) const { return a % value_; }

  std::uint64_t reduce128(u128 x) const {
    const auto x0 = static_cast<std::uint64_t>(x);
    const auto x1 = static_cast<std::uint64_t>(x >> 64);
    // Round 1
    std::uint64_t carry = mul_hi(x0, ratio_[0]);
    u128 t = static_cast<u128>(x0) * ratio_[1];
    std::uint64_t lo = static_cast<std::uint64_t>(t) + carry;
    std::uint64_t hi = static_cast<std::uint64_t>(t >> 64) + (lo < carry);
    // Round 2
    t = static_cast<u128>(x1) * ratio_[0];
    const std::uint64_t t_lo = static_cast<std::uint64_t>(t);
    lo += t_lo;
    carry = static_cast<std::uint64_t>(t >> 64) + (lo < t_lo);
    const std::uint64_t quot = x1 * ratio_[1] + hi + carry;
    std::uint64_t r = x0 - quot * value_;
    return r >= value_ ? r - value_ : r;
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= value_ ? s - value_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + value_ - b;
  }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : value_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return reduce128(static_cast<u128>(a) * b);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const;
  // Requires value() prime and a != 0.
  std::uint64_t inv(std::uint64_t a) const;

  // Reduces a signed integer into [0, q).
  std::uint64_t from_signed(std::int64_t a) const {
    if (a >= 0) return static_cast<std::uint64_t>(a) % value_;
    const std::uint64_t m = static_cast<std::uint64_t>(-(a + 1)) % value_;
    return value_ - 1 - m;
  }
  // Centered representative in (-q/2, q/2].
  std::int64_t to_signed(std::uint64_t a) const {
    return a > (value_ >> 1) ? static_cast<std::int64_t>(a) - static_cast<std::int64_t>(value_)
                             : static_cast<std::int64_t>(a);
  }

  friend bool operator==(const Modulus& a, const Modulus& b) { return a.value_ == b.value_; }

 private:
  std::uint64_t value_ = 0;
  int bit_count_ = 0;
  std::uint64_t ratio_[2] = {0, 0};
};

// Operand w prepared for Shoup multiplication: w * a mod q with one mul_hi.
struct ShoupConst {
  std::uint64_t value = 0;
  std::uint64_t quotient = 0;  // floor(value * 2^64 / q)

  ShoupConst() = default;
  ShoupConst(std::uint64_t w, const Modulus& q)
      : value(w), quotient(static_cast<std::uint64_t>((static_cast<u128>(w) << 64) / q.value())) {}

  std::uint64_t mul(std::uint64_t a, std::uint64_t q) const {
    const std::uint64_t est = mul_hi(quotient, a);
    std::uint64_t r = value * a - est * q;
    return r >= q ? r - q : r;
  }
};

bool is_prime(std::uint64_t n);

// The `count` largest primes below 2^bits that are congruent to 1 mod 2N,
// skipping any listed in `exclude`.
std::vector<std::uint64_t> ntt_primes(int bits, std::size_t count, std::size_t degree,
                                      const std::vector<std::uint64_t>& exclude = {});

}  // namespace hemacd
