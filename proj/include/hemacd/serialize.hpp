// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Binary formats for ciphertexts, public material and parameters. All
// integers little-endian; layouts documented in docs/wire_format.md.
// Secret keys have no serializer on purpose.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hemacd/scheme.hpp"

namespace hemacd {

inline constexpr std::uint16_t kFormatVersion = 1;

std::vector<std::uint8_t> serialize_ciphertext(const Ciphertext& ct);
// Validates shape and residue ranges against `scheme`.
Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes, const Scheme& scheme);

std::vector<std::uint8_t> serialize_public_key(const PublicKey& pk);
PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes, const Scheme& scheme);

std::vector<std::uint8_t> serialize_relin_key(const RelinKey& rlk);
RelinKey deserialize_relin_key(std::span<const std::uint8_t> bytes, const Scheme& scheme);

// Explicit primes are written, so the receiver does not repeat the search.
std::vector<std::uint8_t> serialize_params(const Scheme& scheme);
SchemeParams deserialize_params(std::span<const std::uint8_t> bytes);

// Streaming helpers used by composite payloads.
class ByteWriter;
class ByteReader;
void write_ciphertext(ByteWriter& w, const Ciphertext& ct);
Ciphertext read_ciphertext(ByteReader& r, const Scheme& scheme);

}  // namespace hemacd
