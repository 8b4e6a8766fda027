// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/netproto.hpp"

#include <sodium.h>

#include <cstdio>

#include "hemacd/bytes.hpp"
#include "hemacd/errors.hpp"
#include "hemacd/serialize.hpp"

namespace hemacd {

const char* frame_type_name(FrameType t) {
  switch (t) {
    case FrameType::kHello: return "HELLO";
    case FrameType::kPubKey: return "PUBKEY";
    case FrameType::kRelinKey: return "RELINKEY";
    case FrameType::kParams: return "PARAMS";
    case FrameType::kQuote: return "QUOTE";
    case FrameType::kDecision: return "DECISION";
    case FrameType::kBye: return "BYE";
    case FrameType::kError: return "ERROR";
  }
  return "?";
}

namespace {

bool valid_tag(std::uint8_t tag) { return tag >= 1 && tag <= 8; }

}  // namespace

std::vector<std::uint8_t> serialize_frame(const Frame& frame, std::size_t max_payload) {
  if (frame.payload.size() > max_payload || frame.payload.size() > 0xFFFFFFFFu) {
    throw FormatError("frame payload exceeds the size cap");
  }
  if (!valid_tag(static_cast<std::uint8_t>(frame.type))) throw FormatError("bad frame tag");
  ByteWriter w;
  w.u32_be(static_cast<std::uint32_t>(frame.payload.size()));
  w.u8(static_cast<std::uint8_t>(frame.type));
  w.u64_be(frame.seq);
  w.bytes(frame.payload);
  return w.take();
}

FrameHeader parse_frame_header(std::span<const std::uint8_t> header, std::size_t max_payload) {
  ByteReader r(header);
  FrameHeader h;
  h.length = r.u32_be();
  const std::uint8_t tag = r.u8();
  h.seq = r.u64_be();
  if (!valid_tag(tag)) throw FormatError("bad frame tag " + std::to_string(tag));
  if (h.length > max_payload) throw FormatError("frame payload exceeds the size cap");
  h.type = static_cast<FrameType>(tag);
  return h;
}

Frame deserialize_frame(std::span<const std::uint8_t> bytes, std::size_t max_payload) {
  if (bytes.size() < kFrameHeaderSize) throw FormatError("truncated frame header");
  const FrameHeader h = parse_frame_header(bytes.first(kFrameHeaderSize), max_payload);
  const auto body = bytes.subspan(kFrameHeaderSize);
  if (body.size() < h.length) throw FormatError("truncated frame payload");
  if (body.size() > h.length) throw FormatError("trailing bytes after frame");
  return Frame{h.type, h.seq, std::vector<std::uint8_t>(body.begin(), body.end())};
}

Fingerprint fingerprint_of(std::span<const std::uint8_t> bytes) {
  Fingerprint fp{};
  crypto_generichash(fp.data(), fp.size(), bytes.data(), bytes.size(), nullptr, 0);
  return fp;
}

std::string fingerprint_hex(const Fingerprint& fp) {
  std::string out;
  char buf[3];
  for (auto b : fp) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    out += buf;
  }
  return out;
}

std::vector<std::uint8_t> encode_hello(const HelloPayload& p) {
  ByteWriter w;
  w.u16_le(p.version);
  w.u32_le(p.trader_id);
  return w.take();
}

HelloPayload decode_hello(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  HelloPayload p;
  p.version = r.u16_le();
  p.trader_id = r.u32_le();
  r.expect_end("HELLO");
  if (p.version != kProtocolVersion) throw ProtocolError("unsupported protocol version");
  return p;
}

std::vector<std::uint8_t> encode_params(const Scheme& scheme, const Windows& windows) {
  ByteWriter w;
  const auto params = serialize_params(scheme);
  w.u32_le(static_cast<std::uint32_t>(params.size()));
  w.bytes(params);
  w.u32_le(static_cast<std::uint32_t>(windows.fast));
  w.u32_le(static_cast<std::uint32_t>(windows.slow));
  w.u32_le(static_cast<std::uint32_t>(windows.signal));
  return w.take();
}

ParamsPayload decode_params(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  ParamsPayload p;
  const std::uint32_t len = r.u32_le();
  p.params = deserialize_params(r.bytes(len));
  const auto window = [&r] {
    const std::uint32_t v = r.u32_le();
    if (v == 0 || v > 4096) throw FormatError("PARAMS: window out of range");
    return static_cast<int>(v);
  };
  p.windows.fast = window();
  p.windows.slow = window();
  p.windows.signal = window();
  r.expect_end("PARAMS");
  try {
    p.windows.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("PARAMS: ") + e.what());
  }
  return p;
}

std::vector<std::uint8_t> encode_pubkey(std::uint32_t trader_id, std::vector<std::uint8_t> key) {
  ByteWriter w;
  w.u32_le(trader_id);
  const Fingerprint fp = fingerprint_of(key);
  w.bytes(fp);
  w.bytes(key);
  return w.take();
}

PubKeyPayload decode_pubkey(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  PubKeyPayload p;
  p.trader_id = r.u32_le();
  const auto fp = r.bytes(p.fingerprint.size());
  std::copy(fp.begin(), fp.end(), p.fingerprint.begin());
  const auto key = r.bytes(r.remaining());
  p.key_bytes.assign(key.begin(), key.end());
  if (fingerprint_of(p.key_bytes) != p.fingerprint) {
    throw ProtocolError("PUBKEY: fingerprint does not match key bytes");
  }
  return p;
}

std::vector<std::uint8_t> encode_quote(const QuotePayload& p) {
  ByteWriter w;
  w.u64_le(p.tick);
  w.bytes(p.ciphertext);
  return w.take();
}

QuotePayload decode_quote(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  QuotePayload p;
  p.tick = r.u64_le();
  const auto ct = r.bytes(r.remaining());
  if (ct.empty()) throw FormatError("QUOTE: missing ciphertext");
  p.ciphertext.assign(ct.begin(), ct.end());
  return p;
}

std::vector<std::uint8_t> encode_decision(const DecisionPayload& p) {
  ByteWriter w;
  w.u64_le(p.tick);
  w.u8(static_cast<std::uint8_t>(p.status));
  w.bytes(p.ciphertext);
  return w.take();
}

DecisionPayload decode_decision(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  DecisionPayload p;
  p.tick = r.u64_le();
  const std::uint8_t status = r.u8();
  if (status > 1) throw FormatError("DECISION: bad status");
  p.status = static_cast<DecisionStatus>(status);
  const auto ct = r.bytes(r.remaining());
  if (p.status == DecisionStatus::kWarmUp && !ct.empty()) {
    throw FormatError("DECISION: warm-up frame carries a ciphertext");
  }
  if (p.status == DecisionStatus::kSignal && ct.empty()) {
    throw FormatError("DECISION: signal frame lacks a ciphertext");
  }
  p.ciphertext.assign(ct.begin(), ct.end());
  return p;
}

std::vector<std::uint8_t> encode_error(const ErrorPayload& p) {
  ByteWriter w;
  w.u16_le(static_cast<std::uint16_t>(p.code));
  w.text(p.message);
  return w.take();
}

ErrorPayload decode_error(std::span<const std::uint8_t> b) {
  ByteReader r(b);
  ErrorPayload p;
  const std::uint16_t code = r.u16_le();
  if (code < 1 || code > 4) throw FormatError("ERROR: unknown code " + std::to_string(code));
  p.code = static_cast<ErrorCode>(code);
  p.message = r.text(r.remaining());
  return p;
}

}  // namespace hemacd
