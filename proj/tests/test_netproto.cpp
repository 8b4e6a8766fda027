// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "hemacd/errors.hpp"
#include "hemacd/netproto.hpp"
#include "hemacd/serialize.hpp"
#include "test_support.hpp"

namespace hemacd {
namespace {

using testing_support::small_params;

std::vector<std::uint8_t> bytes_of(std::initializer_list<int> v) {
  std::vector<std::uint8_t> out;
  for (int b : v) out.push_back(static_cast<std::uint8_t>(b));
  return out;
}

TEST(Frame, HeaderIsBigEndian) {
  const Frame f{FrameType::kQuote, 0x0102030405060708ULL, bytes_of({0xAA, 0xBB})};
  const auto b = serialize_frame(f);
  EXPECT_EQ(b, bytes_of({0, 0, 0, 2, 5, 1, 2, 3, 4, 5, 6, 7, 8, 0xAA, 0xBB}));
}

TEST(Frame, EveryTypeRoundTrips) {
  std::uint64_t seq = 1;
  for (int tag = 1; tag <= 8; ++tag) {
    const Frame f{static_cast<FrameType>(tag), seq++, std::vector<std::uint8_t>(tag * 7, 0x5A)};
    EXPECT_EQ(deserialize_frame(serialize_frame(f)), f) << tag;
    EXPECT_STRNE(frame_type_name(f.type), "?");
  }
  const Frame empty{FrameType::kBye, 9, {}};
  EXPECT_EQ(deserialize_frame(serialize_frame(empty)), empty);
}

TEST(Frame, TruncationIsCleanError) {
  const auto b = serialize_frame(Frame{FrameType::kDecision, 3, std::vector<std::uint8_t>(40, 1)});
  for (std::size_t cut = 0; cut < b.size(); ++cut) {
    EXPECT_THROW(deserialize_frame(std::span(b).first(cut)), FormatError) << cut;
  }
  auto longer = b;
  longer.push_back(0);
  EXPECT_THROW(deserialize_frame(longer), FormatError);
}

TEST(Frame, BadTagAndCap) {
  auto b = serialize_frame(Frame{FrameType::kHello, 1, bytes_of({1, 2})});
  b[4] = 0;
  EXPECT_THROW(deserialize_frame(b), FormatError);
  b[4] = 9;
  EXPECT_THROW(deserialize_frame(b), FormatError);
  const Frame big{FrameType::kQuote, 1, std::vector<std::uint8_t>(100, 0)};
  EXPECT_THROW(serialize_frame(big, 99), FormatError);
  EXPECT_THROW(deserialize_frame(serialize_frame(big), 99), FormatError);
  // A header announcing more than the default cap is refused before reading.
  const auto huge = bytes_of({0x04, 0x00, 0x00, 0x01, 5, 0, 0, 0, 0, 0, 0, 0, 1});
  EXPECT_THROW(parse_frame_header(huge, kDefaultMaxPayload), FormatError);
}

TEST(Frame, FuzzRandomBuffers) {
  std::mt19937_64 rng(2026);
  std::size_t accepted = 0;
  for (int i = 0; i < 200000; ++i) {
    std::vector<std::uint8_t> buf(rng() % 48);
    for (auto& b : buf) b = static_cast<std::uint8_t>(rng());
    // Bias some buffers towards plausible headers.
    if (buf.size() >= kFrameHeaderSize && (i & 1)) {
      const std::size_t len = buf.size() - kFrameHeaderSize;
      buf[0] = buf[1] = buf[2] = 0;
      buf[3] = static_cast<std::uint8_t>(len + (rng() % 3) - 1);
      buf[4] = static_cast<std::uint8_t>(rng() % 10);
    }
    try {
      const Frame f = deserialize_frame(buf);
      EXPECT_EQ(serialize_frame(f), buf);
      ++accepted;
    } catch (const FormatError&) {
    }
  }
  EXPECT_GT(accepted, 0u);
}

TEST(Payloads, HelloRoundTrip) {
  const auto h = decode_hello(encode_hello({kProtocolVersion, 7}));
  EXPECT_EQ(h.trader_id, 7u);
  EXPECT_THROW(decode_hello(encode_hello({2, 7})), ProtocolError);
  EXPECT_THROW(decode_hello(bytes_of({1, 0, 0})), FormatError);
}

TEST(Payloads, ParamsRoundTrip) {
  const Scheme s(small_params(3, 1024));
  const Windows w{5, 11, 4};
  const ParamsPayload p = decode_params(encode_params(s, w));
  EXPECT_EQ(p.windows.fast, 5);
  EXPECT_EQ(p.windows.slow, 11);
  EXPECT_EQ(p.windows.signal, 4);
  EXPECT_EQ(Scheme(p.params).data_primes(), s.data_primes());
  auto bad = encode_params(s, Windows{11, 5, 4});
  EXPECT_THROW(decode_params(bad), FormatError);
}

TEST(Payloads, PubKeyFingerprintChecked) {
  const std::vector<std::uint8_t> key(300, 0x11);
  auto enc = encode_pubkey(4, key);
  const auto p = decode_pubkey(enc);
  EXPECT_EQ(p.trader_id, 4u);
  EXPECT_EQ(p.key_bytes, key);
  EXPECT_EQ(fingerprint_hex(p.fingerprint).size(), 64u);
  enc.back() ^= 1;
  EXPECT_THROW(decode_pubkey(enc), ProtocolError);
  EXPECT_THROW(decode_pubkey(bytes_of({1, 2})), FormatError);
}

TEST(Payloads, QuoteDecisionError) {
  const auto q = decode_quote(encode_quote({42, bytes_of({9, 9})}));
  EXPECT_EQ(q.tick, 42u);
  EXPECT_EQ(q.ciphertext, bytes_of({9, 9}));
  EXPECT_THROW(decode_quote(encode_quote({42, {}})), FormatError);

  const auto warm = decode_decision(encode_decision({3, DecisionStatus::kWarmUp, {}}));
  EXPECT_EQ(warm.status, DecisionStatus::kWarmUp);
  const auto sig = decode_decision(encode_decision({4, DecisionStatus::kSignal, bytes_of({1})}));
  EXPECT_EQ(sig.tick, 4u);
  EXPECT_THROW(decode_decision(encode_decision({4, DecisionStatus::kSignal, {}})), FormatError);
  EXPECT_THROW(decode_decision(encode_decision({4, DecisionStatus::kWarmUp, bytes_of({1})})),
               FormatError);

  const auto e = decode_error(encode_error({ErrorCode::kDepth, "out of levels"}));
  EXPECT_EQ(e.code, ErrorCode::kDepth);
  EXPECT_EQ(e.message, "out of levels");
}

TEST(Payloads, FuzzDecodersNeverCrash) {
  std::mt19937_64 rng(7);
  const Scheme s(small_params(2, 1024));
  for (int i = 0; i < 20000; ++i) {
    std::vector<std::uint8_t> buf(rng() % 80);
    for (auto& b : buf) b = static_cast<std::uint8_t>(rng());
    const auto attempt = [&](auto&& fn) {
      try {
        fn();
      } catch (const Error&) {
      }
    };
    attempt([&] { decode_hello(buf); });
    attempt([&] { decode_params(buf); });
    attempt([&] { decode_pubkey(buf); });
    attempt([&] { decode_quote(buf); });
    attempt([&] { decode_decision(buf); });
    attempt([&] { decode_error(buf); });
    attempt([&] { deserialize_ciphertext(buf, s); });
    attempt([&] { deserialize_public_key(buf, s); });
    attempt([&] { deserialize_relin_key(buf, s); });
    attempt([&] { deserialize_params(buf); });
  }
  SUCCEED();
}

}  // namespace
}  // namespace hemacd
