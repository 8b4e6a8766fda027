// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Leveled approximate-arithmetic (CKKS-style) encryption over an RNS
// modulus chain. Values live in slot 0 of the canonical embedding; all
// other slots are zero. Ciphertexts are kept in the NTT domain.
//
// Levels count the rescales still available: a ciphertext at level l is
// defined modulo q_0 * ... * q_l. The last prime of the configured chain is
// reserved for key switching and never carries data.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "hemacd/prng.hpp"
#include "hemacd/ring.hpp"

namespace hemacd {

struct SchemeParams {
  std::size_t ring_degree = 8192;
  // Bit sizes of q_0, ..., q_L and finally the key-switching prime P.
  std::vector<int> chain_bits = {60, 40, 40, 40, 40, 40, 40, 40, 40, 40, 40, 60};
  // Explicit primes in the same layout as chain_bits. When non-empty they
  // take precedence (used when parameters arrive over the wire).
  std::vector<std::uint64_t> primes;
  double scale = 0x1.0p40;
  double sigma = 3.2;

  static SchemeParams defaults() { return {}; }

  // Number of rescales a fresh ciphertext supports.
  int depth_budget() const;
  void validate() const;
};

// Resolves bit sizes into concrete NTT-friendly primes. Primes of the same
// size are distinct and taken in descending order below 2^bits.
std::vector<std::uint64_t> resolve_chain(const SchemeParams& params);

using RnsPoly = std::vector<RingElement>;

struct PlaintextPoly {
  RnsPoly poly;  // evaluation domain, residues q_0..q_level
  double scale = 1.0;
  int level = 0;
};

struct Ciphertext {
  std::vector<RnsPoly> components;  // 2, or 3 between multiply and relinearize
  int level = 0;
  double scale = 1.0;

  std::size_t size() const { return components.size(); }
};

struct SecretKey {
  RnsPoly s;  // ternary secret over every prime including P
};

struct PublicKey {
  RnsPoly b;  // -a*s + e over the data primes
  RnsPoly a;
};

// Key-switching data for s^2 -> s, one RLWE pair per data prime, each over
// the data primes plus P.
struct RelinKey {
  std::vector<RnsPoly> b;
  std::vector<RnsPoly> a;
};

struct KeyMaterial {
  SecretKey secret;
  PublicKey public_key;
  RelinKey relin;
};

class Scheme {
 public:
  explicit Scheme(SchemeParams params);

  const SchemeParams& params() const;
  std::size_t degree() const;
  int top_level() const;
  // Data prime q_level dropped by a rescale at that level.
  std::uint64_t prime_at(int level) const;
  std::uint64_t special_prime() const;
  const std::vector<std::uint64_t>& data_primes() const;
  // log2(q_0 * ... * q_level).
  double log2_modulus(int level) const;
  const RingContextPtr& ring(std::size_t index) const;

  KeyMaterial keygen(Prng& prng) const;

  // Places x in slot 0 at the given scale (default: params().scale).
  PlaintextPoly encode(double x, int level, std::optional<double> scale = std::nullopt) const;
  double decode(const PlaintextPoly& pt) const;

  Ciphertext encrypt(const PublicKey& pk, const PlaintextPoly& pt, Prng& prng) const;
  PlaintextPoly decrypt(const SecretKey& sk, const Ciphertext& ct) const;

  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext sub(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext negate(const Ciphertext& a) const;
  Ciphertext add_plain(const Ciphertext& a, const PlaintextPoly& pt) const;
  Ciphertext mul_plain(const Ciphertext& a, const PlaintextPoly& pt) const;
  // Tensor product without relinearization (3 components).
  Ciphertext mul_no_relin(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext relinearize(const Ciphertext& a, const RelinKey& rlk) const;
  Ciphertext mul(const Ciphertext& a, const Ciphertext& b, const RelinKey& rlk) const;
  Ciphertext rescale(const Ciphertext& a) const;
  Ciphertext mod_switch_to(const Ciphertext& a, int level) const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

}  // namespace hemacd
