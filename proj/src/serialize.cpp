// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/serialize.hpp"

#include <cmath>
#include <string>

#include "hemacd/bytes.hpp"
#include "hemacd/errors.hpp"

namespace hemacd {

void ByteWriter::real(double v) {
  if (!std::isfinite(v)) throw FormatError("cannot serialize a non-finite real");
  int exp = 0;
  const double m = std::frexp(v, &exp);
  u64_le(static_cast<std::uint64_t>(static_cast<std::int64_t>(std::ldexp(m, 53))));
  u32_le(static_cast<std::uint32_t>(exp - 53));
}

double ByteReader::real() {
  const auto sig = static_cast<std::int64_t>(u64_le());
  const auto exp = static_cast<std::int32_t>(u32_le());
  if (exp < -1200 || exp > 1100) throw FormatError("real exponent out of range");
  const double v = std::ldexp(static_cast<double>(sig), exp);
  if (!std::isfinite(v)) throw FormatError("real out of range");
  return v;
}

namespace {

constexpr char kCtMagic[] = "HECT";
constexpr char kPkMagic[] = "HEPK";
constexpr char kRkMagic[] = "HERK";
constexpr char kParamsMagic[] = "HEPR";

void write_header(ByteWriter& w, const char* magic) {
  w.text(std::string_view(magic, 4));
  w.u16_le(kFormatVersion);
}

void read_header(ByteReader& r, const char* magic, const char* what) {
  if (r.text(4) != std::string_view(magic, 4)) throw FormatError(std::string(what) + ": bad magic");
  if (r.u16_le() != kFormatVersion) throw FormatError(std::string(what) + ": unsupported version");
}

void write_poly(ByteWriter& w, const RnsPoly& p) {
  for (const auto& r : p) {
    for (auto c : r.coeffs()) w.u64_le(c);
  }
}

// Reads residues for ring indices `rings` (evaluation domain).
RnsPoly read_poly(ByteReader& r, const Scheme& scheme, const std::vector<std::size_t>& rings) {
  RnsPoly out;
  out.reserve(rings.size());
  const std::size_t n = scheme.degree();
  for (std::size_t idx : rings) {
    const RingContextPtr& ctx = scheme.ring(idx);
    const std::uint64_t q = ctx->params().modulus;
    std::vector<std::uint64_t> coeffs(n);
    for (auto& c : coeffs) {
      c = r.u64_le();
      if (c >= q) throw FormatError("residue not reduced modulo its prime");
    }
    out.emplace_back(ctx, std::move(coeffs), Domain::kEvaluation);
  }
  return out;
}

std::vector<std::size_t> data_rings(int level) {
  std::vector<std::size_t> v;
  for (int j = 0; j <= level; ++j) v.push_back(static_cast<std::size_t>(j));
  return v;
}

std::vector<std::size_t> key_rings(const Scheme& scheme) {
  std::vector<std::size_t> v = data_rings(scheme.top_level());
  v.push_back(scheme.data_primes().size());
  return v;
}

std::uint32_t checked_degree(ByteReader& r, const Scheme& scheme, const char* what) {
  const std::uint32_t n = r.u32_le();
  if (n != scheme.degree()) throw FormatError(std::string(what) + ": ring degree mismatch");
  return n;
}

}  // namespace

void write_ciphertext(ByteWriter& w, const Ciphertext& ct) {
  write_header(w, kCtMagic);
  const std::size_t n = ct.components.empty() || ct.components[0].empty()
                            ? 0
                            : ct.components[0][0].degree();
  w.u32_le(static_cast<std::uint32_t>(n));
  w.u32_le(static_cast<std::uint32_t>(ct.level));
  w.real(ct.scale);
  w.u8(static_cast<std::uint8_t>(ct.size()));
  for (const auto& c : ct.components) write_poly(w, c);
}

Ciphertext read_ciphertext(ByteReader& r, const Scheme& scheme) {
  read_header(r, kCtMagic, "ciphertext");
  checked_degree(r, scheme, "ciphertext");
  Ciphertext ct;
  const std::uint32_t level = r.u32_le();
  if (level > static_cast<std::uint32_t>(scheme.top_level())) {
    throw FormatError("ciphertext: level out of range");
  }
  ct.level = static_cast<int>(level);
  ct.scale = r.real();
  if (!(ct.scale > 0.0)) throw FormatError("ciphertext: scale must be positive");
  const std::uint8_t count = r.u8();
  if (count < 2 || count > 3) throw FormatError("ciphertext: component count must be 2 or 3");
  // Reject impossible sizes before allocating anything.
  const std::size_t need = std::size_t{count} * (level + 1) * scheme.degree() * 8;
  if (r.remaining() < need) throw FormatError("truncated input");
  const auto rings = data_rings(ct.level);
  for (int i = 0; i < count; ++i) ct.components.push_back(read_poly(r, scheme, rings));
  return ct;
}

std::vector<std::uint8_t> serialize_ciphertext(const Ciphertext& ct) {
  ByteWriter w;
  write_ciphertext(w, ct);
  return w.take();
}

Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes, const Scheme& scheme) {
  ByteReader r(bytes);
  Ciphertext ct = read_ciphertext(r, scheme);
  r.expect_end("ciphertext");
  return ct;
}

std::vector<std::uint8_t> serialize_public_key(const PublicKey& pk) {
  ByteWriter w;
  write_header(w, kPkMagic);
  w.u32_le(static_cast<std::uint32_t>(pk.b.empty() ? 0 : pk.b[0].degree()));
  w.u32_le(static_cast<std::uint32_t>(pk.b.size()));
  write_poly(w, pk.b);
  write_poly(w, pk.a);
  return w.take();
}

PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes, const Scheme& scheme) {
  ByteReader r(bytes);
  read_header(r, kPkMagic, "public key");
  checked_degree(r, scheme, "public key");
  if (r.u32_le() != static_cast<std::uint32_t>(scheme.top_level() + 1)) {
    throw FormatError("public key: residue count mismatch");
  }
  const auto rings = data_rings(scheme.top_level());
  PublicKey pk;
  pk.b = read_poly(r, scheme, rings);
  pk.a = read_poly(r, scheme, rings);
  r.expect_end("public key");
  return pk;
}

std::vector<std::uint8_t> serialize_relin_key(const RelinKey& rlk) {
  ByteWriter w;
  write_header(w, kRkMagic);
  const bool empty = rlk.b.empty() || rlk.b[0].empty();
  w.u32_le(static_cast<std::uint32_t>(empty ? 0 : rlk.b[0][0].degree()));
  w.u32_le(static_cast<std::uint32_t>(rlk.b.size()));
  w.u32_le(static_cast<std::uint32_t>(empty ? 0 : rlk.b[0].size()));
  for (std::size_t i = 0; i < rlk.b.size(); ++i) {
    write_poly(w, rlk.b[i]);
    write_poly(w, rlk.a[i]);
  }
  return w.take();
}

RelinKey deserialize_relin_key(std::span<const std::uint8_t> bytes, const Scheme& scheme) {
  ByteReader r(bytes);
  read_header(r, kRkMagic, "relinearization key");
  checked_degree(r, scheme, "relinearization key");
  const auto rings = key_rings(scheme);
  const std::uint32_t digits = r.u32_le();
  const std::uint32_t width = r.u32_le();
  if (digits != static_cast<std::uint32_t>(scheme.top_level() + 1) || width != rings.size()) {
    throw FormatError("relinearization key: shape mismatch");
  }
  RelinKey rlk;
  for (std::uint32_t i = 0; i < digits; ++i) {
    rlk.b.push_back(read_poly(r, scheme, rings));
    rlk.a.push_back(read_poly(r, scheme, rings));
  }
  r.expect_end("relinearization key");
  return rlk;
}

std::vector<std::uint8_t> serialize_params(const Scheme& scheme) {
  ByteWriter w;
  write_header(w, kParamsMagic);
  w.u32_le(static_cast<std::uint32_t>(scheme.degree()));
  const auto& primes = scheme.data_primes();
  w.u32_le(static_cast<std::uint32_t>(primes.size() + 1));
  for (auto q : primes) w.u64_le(q);
  w.u64_le(scheme.special_prime());
  w.real(scheme.params().scale);
  w.real(scheme.params().sigma);
  return w.take();
}

SchemeParams deserialize_params(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  read_header(r, kParamsMagic, "params");
  SchemeParams p;
  p.ring_degree = r.u32_le();
  const std::uint32_t count = r.u32_le();
  if (count < 3 || count > 64) throw FormatError("params: chain length out of range");
  p.primes.resize(count);
  for (auto& q : p.primes) q = r.u64_le();
  p.chain_bits.clear();
  p.scale = r.real();
  p.sigma = r.real();
  r.expect_end("params");
  return p;
}

}  // namespace hemacd
