// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/prng.hpp"

#include <sodium.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace hemacd {

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium initialisation failed");
}

Prng::Seed hash_seed(std::span<const std::uint8_t> data) {
  ensure_sodium();
  Prng::Seed out{};
  crypto_generichash(out.data(), out.size(), data.data(), data.size(), nullptr, 0);
  return out;
}

void append_u64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

Prng::Prng(const Seed& seed) : seed_(seed) { ensure_sodium(); }

Prng::Prng(std::uint64_t seed) {
  std::vector<std::uint8_t> buf{'h', 'e', 'm', 'a', 'c', 'd', '/', 's', 'e', 'e', 'd'};
  append_u64(buf, seed);
  seed_ = hash_seed(buf);
}

Prng Prng::from_entropy() {
  ensure_sodium();
  Seed seed{};
  randombytes_buf(seed.data(), seed.size());
  return Prng(seed);
}

Prng Prng::derive(std::string_view label) const {
  std::vector<std::uint8_t> buf(seed_.begin(), seed_.end());
  buf.insert(buf.end(), label.begin(), label.end());
  return Prng(hash_seed(buf));
}

Prng Prng::derive(std::string_view label, std::uint64_t index) const {
  std::vector<std::uint8_t> buf(seed_.begin(), seed_.end());
  buf.insert(buf.end(), label.begin(), label.end());
  buf.push_back('#');
  append_u64(buf, index);
  return Prng(hash_seed(buf));
}

void Prng::refill() {
  std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<std::uint8_t>(block_counter_ >> (8 * i));
  ++block_counter_;
  crypto_stream_chacha20_ietf(buffer_.data(), buffer_.size(), nonce.data(), seed_.data());
  buffer_pos_ = 0;
}

void Prng::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (buffer_pos_ == buffer_.size()) refill();
    const std::size_t n = std::min(out.size() - done, buffer_.size() - buffer_pos_);
    std::memcpy(out.data() + done, buffer_.data() + buffer_pos_, n);
    buffer_pos_ += n;
    done += n;
  }
}

std::uint64_t Prng::next_u64() {
  std::uint8_t bytes[8];
  fill(bytes);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

std::uint64_t Prng::uniform(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const int bits = std::bit_width(bound - 1);
  const std::uint64_t mask = bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
  for (;;) {
    const std::uint64_t v = next_u64() & mask;
    if (v < bound) return v;
  }
}

double Prng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

}  // namespace hemacd
