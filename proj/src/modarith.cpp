// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/modarith.hpp"

#include <algorithm>
#include <bit>

#include "hemacd/errors.hpp"

namespace hemacd {

Modulus::Modulus(std::uint64_t value) : value_(value) {
  if (value < 2 || value >= (std::uint64_t{1} << 62)) {
    throw ParameterError("modulus must lie in [2, 2^62)");
  }
  bit_count_ = std::bit_width(value);
  // floor(2^128 / q) computed as 128-bit long division of (2^128 - 1) / q,
  // which agrees with the exact quotient because q does not divide 2^128.
  const u128 all_ones = ~static_cast<u128>(0);
  const u128 ratio = all_ones / value;
  ratio_[0] = static_cast<std::uint64_t>(ratio);
  ratio_[1] = static_cast<std::uint64_t>(ratio >> 64);
}

std::uint64_t Modulus::pow(std::uint64_t base, std::uint64_t exp) const {
  std::uint64_t result = 1 % value_;
  base %= value_;
  while (exp > 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

std::uint64_t Modulus::inv(std::uint64_t a) const {
  if (a % value_ == 0) throw ParameterError("zero has no modular inverse");
  return pow(a, value_ - 2);
}

namespace {

std::uint64_t mulmod_slow(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod_slow(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_slow(r, b, m);
    b = mulmod_slow(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all 64-bit n.
  for (std::uint64_t a : kBases) {
    std::uint64_t x = powmod_slow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_slow(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> ntt_primes(int bits, std::size_t count, std::size_t degree,
                                      const std::vector<std::uint64_t>& exclude) {
  if (bits < 4 || bits > 61) throw ParameterError("prime bit size must be in [4, 61]");
  const std::uint64_t step = 2 * static_cast<std::uint64_t>(degree);
  std::vector<std::uint64_t> out;
  const std::uint64_t top = std::uint64_t{1} << bits;
  if (top <= step) throw ParameterError("prime bit size too small for ring degree");
  // Largest candidate below 2^bits with candidate = 1 mod 2N.
  std::uint64_t candidate = top - step + 1;
  const std::uint64_t floor = std::uint64_t{1} << (bits - 1);
  while (out.size() < count) {
    if (candidate <= floor) {
      throw ParameterError("not enough NTT-friendly primes of " + std::to_string(bits) + " bits");
    }
    if (is_prime(candidate) &&
        std::find(exclude.begin(), exclude.end(), candidate) == exclude.end()) {
      out.push_back(candidate);
    }
    candidate -= step;
  }
  return out;
}

}  // namespace hemacd
