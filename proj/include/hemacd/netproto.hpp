// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Framing and payload codecs for the aggregator/trader protocol.
//
//   frame := u32 BE payload length | u8 tag | u64 BE sequence | payload
//
// Payload layouts are in docs/wire_format.md. Decoders are total: any byte
// string either decodes or raises FormatError/ProtocolError.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hemacd/indicators.hpp"
#include "hemacd/scheme.hpp"

namespace hemacd {

inline constexpr std::size_t kFrameHeaderSize = 13;
inline constexpr std::size_t kDefaultMaxPayload = std::size_t{64} << 20;
inline constexpr std::uint16_t kProtocolVersion = 1;

enum class FrameType : std::uint8_t {
  kHello = 1,
  kPubKey = 2,
  kRelinKey = 3,
  kParams = 4,
  kQuote = 5,
  kDecision = 6,
  kBye = 7,
  kError = 8,
};

const char* frame_type_name(FrameType t);

struct Frame {
  FrameType type = FrameType::kHello;
  std::uint64_t seq = 0;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

std::vector<std::uint8_t> serialize_frame(const Frame& frame,
                                          std::size_t max_payload = kDefaultMaxPayload);
// The buffer must hold exactly one frame.
Frame deserialize_frame(std::span<const std::uint8_t> bytes,
                        std::size_t max_payload = kDefaultMaxPayload);

struct FrameHeader {
  std::uint32_t length = 0;
  FrameType type = FrameType::kHello;
  std::uint64_t seq = 0;
};
FrameHeader parse_frame_header(std::span<const std::uint8_t> header, std::size_t max_payload);

// ---- payloads ----

inline constexpr std::uint32_t kAnyTraderId = 0xFFFFFFFFu;

struct HelloPayload {
  std::uint16_t version = kProtocolVersion;
  std::uint32_t trader_id = kAnyTraderId;
};

struct ParamsPayload {
  SchemeParams params;  // explicit primes
  Windows windows;
};

using Fingerprint = std::array<std::uint8_t, 32>;

struct PubKeyPayload {
  std::uint32_t trader_id = 0;
  Fingerprint fingerprint{};  // BLAKE2b-256 of key_bytes
  std::vector<std::uint8_t> key_bytes;
};

struct QuotePayload {
  std::uint64_t tick = 0;
  std::vector<std::uint8_t> ciphertext;
};

enum class DecisionStatus : std::uint8_t { kWarmUp = 0, kSignal = 1 };

struct DecisionPayload {
  std::uint64_t tick = 0;
  DecisionStatus status = DecisionStatus::kWarmUp;
  std::vector<std::uint8_t> ciphertext;  // empty during warm-up
};

enum class ErrorCode : std::uint16_t {
  kMalformed = 1,
  kUnexpected = 2,
  kDepth = 3,
  kInternal = 4,
};

struct ErrorPayload {
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
};

Fingerprint fingerprint_of(std::span<const std::uint8_t> bytes);
std::string fingerprint_hex(const Fingerprint& fp);

std::vector<std::uint8_t> encode_hello(const HelloPayload& p);
HelloPayload decode_hello(std::span<const std::uint8_t> b);
std::vector<std::uint8_t> encode_params(const Scheme& scheme, const Windows& windows);
ParamsPayload decode_params(std::span<const std::uint8_t> b);
std::vector<std::uint8_t> encode_pubkey(std::uint32_t trader_id, std::vector<std::uint8_t> key);
// Verifies the fingerprint.
PubKeyPayload decode_pubkey(std::span<const std::uint8_t> b);
std::vector<std::uint8_t> encode_quote(const QuotePayload& p);
QuotePayload decode_quote(std::span<const std::uint8_t> b);
std::vector<std::uint8_t> encode_decision(const DecisionPayload& p);
DecisionPayload decode_decision(std::span<const std::uint8_t> b);
std::vector<std::uint8_t> encode_error(const ErrorPayload& p);
ErrorPayload decode_error(std::span<const std::uint8_t> b);

}  // namespace hemacd
