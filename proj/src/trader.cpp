// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled as its own object library; tests inspect its symbols to confirm
// that nothing here can reach a secret key.

#include "hemacd/trader.hpp"

#include <memory>
#include <span>

#include "hemacd/errors.hpp"
#include "hemacd/serialize.hpp"

namespace hemacd {

static_assert(!CanDecrypt<HeEvaluator>, "trader evaluator must not expose decryption");
static_assert(CanDecrypt<HeEngine>);

std::size_t warmup_quotes(const Windows& w) {
  return static_cast<std::size_t>(w.slow + w.signal) + 10;
}

StreamingDecision::StreamingDecision(Evaluator& ev, const Windows& windows, const ReluPoly& poly)
    : ev_(ev), windows_(windows), poly_(poly) {
  windows_.validate();
}

std::size_t StreamingDecision::macd_index(std::size_t tick, const Windows& w) {
  return tick - static_cast<std::size_t>(w.slow + w.signal);
}

std::optional<CipherHandle> StreamingDecision::push(const CipherHandle& quote) {
  const std::size_t t = ticks_++;
  const auto fast = static_cast<std::size_t>(windows_.fast);
  const auto slow = static_cast<std::size_t>(windows_.slow);
  const auto signal = static_cast<std::size_t>(windows_.signal);
  std::optional<CipherHandle> decision;

  // Windows cover quotes t-n .. t-1; the current quote joins afterwards.
  if (t >= slow) {
    if (w_slow_.empty()) {
      w_fast_ = encode_wma_weights(ev_, windows_.fast, quote.level);
      w_slow_ = encode_wma_weights(ev_, windows_.slow, quote.level);
    }
    const std::vector<CipherHandle> window(prices_.begin(), prices_.end());
    const std::span<const CipherHandle> all(window);
    const CipherHandle alpha = wma_window(ev_, all.subspan(slow - fast), w_fast_);
    const CipherHandle beta = wma_window(ev_, all, w_slow_);
    const CipherHandle theta = macd_line(ev_, alpha, beta);

    if (thetas_.size() == signal) {
      if (w_signal_.empty()) w_signal_ = encode_wma_weights(ev_, windows_.signal, theta.level);
      const std::vector<CipherHandle> tw(thetas_.begin(), thetas_.end());
      const CipherHandle gamma = wma_window(ev_, tw, w_signal_);
      const CipherHandle m = macd_histogram(ev_, theta, gamma);
      if (last_m_ && ticks_ >= warmup_quotes(windows_)) {
        decision = o2_hat_tick(ev_, *last_m_, m, poly_);
      }
      last_m_ = m;
      thetas_.pop_front();
    }
    thetas_.push_back(theta);
  }

  prices_.push_back(quote);
  if (prices_.size() > slow) prices_.pop_front();
  return decision;
}

namespace {

[[noreturn]] void reject(FrameChannel& ch, ErrorCode code, const std::string& msg) {
  try {
    ch.send(FrameType::kError, encode_error({code, msg}));
  } catch (const Error&) {
    // Peer already gone; the local error still propagates.
  }
  throw ProtocolError(msg);
}

struct Session {
  std::shared_ptr<const Scheme> scheme;
  std::optional<ParamsPayload> params;
  std::optional<PublicKey> pk;
  std::optional<RelinKey> rlk;
  std::unique_ptr<HeEvaluator> ev;
  std::unique_ptr<StreamingDecision> stream;
};

}  // namespace

TraderSummary run_trader(FrameChannel& ch, std::uint32_t requested_id) {
  ch.send(FrameType::kHello, encode_hello({kProtocolVersion, requested_id}));
  TraderSummary summary;
  Session s;
  bool greeted = false;
  for (;;) {
    Frame f;
    try {
      f = ch.recv();
    } catch (const ProtocolError& e) {
      reject(ch, ErrorCode::kUnexpected, e.what());
    } catch (const FormatError& e) {
      reject(ch, ErrorCode::kMalformed, e.what());
    }
    try {
      switch (f.type) {
        case FrameType::kHello:
          summary.trader_id = decode_hello(f.payload).trader_id;
          greeted = true;
          break;
        case FrameType::kParams:
          if (!greeted) reject(ch, ErrorCode::kUnexpected, "PARAMS before HELLO");
          s.params = decode_params(f.payload);
          s.scheme = std::make_shared<const Scheme>(s.params->params);
          break;
        case FrameType::kPubKey: {
          if (!s.scheme) reject(ch, ErrorCode::kUnexpected, "PUBKEY before PARAMS");
          const PubKeyPayload p = decode_pubkey(f.payload);
          if (p.trader_id != summary.trader_id) {
            reject(ch, ErrorCode::kUnexpected, "PUBKEY addressed to another trader");
          }
          s.pk = deserialize_public_key(p.key_bytes, *s.scheme);
          break;
        }
        case FrameType::kRelinKey:
          if (!s.scheme) reject(ch, ErrorCode::kUnexpected, "RELINKEY before PARAMS");
          s.rlk = deserialize_relin_key(f.payload, *s.scheme);
          break;
        case FrameType::kQuote: {
          if (!s.pk || !s.rlk) reject(ch, ErrorCode::kUnexpected, "QUOTE before keys");
          if (!s.ev) {
            // The evaluator never encrypts; its randomness is unused.
            s.ev = std::make_unique<HeEvaluator>(s.scheme, *s.pk, *s.rlk, Prng(0));
            s.ev->set_tracing(false);
            s.stream = std::make_unique<StreamingDecision>(*s.ev, s.params->windows);
          }
          const QuotePayload q = decode_quote(f.payload);
          if (q.tick != s.stream->ticks()) {
            reject(ch, ErrorCode::kUnexpected,
                   "QUOTE tick " + std::to_string(q.tick) + " out of order");
          }
          Ciphertext ct = deserialize_ciphertext(q.ciphertext, *s.scheme);
          if (ct.level != s.scheme->top_level() || ct.size() != 2) {
            reject(ch, ErrorCode::kMalformed, "QUOTE ciphertext must be fresh");
          }
          const int level = ct.level;
          const double scale = ct.scale;
          const auto out = s.stream->push(CipherHandle{std::move(ct), level, scale});
          DecisionPayload d;
          d.tick = q.tick;
          if (out) {
            d.status = DecisionStatus::kSignal;
            d.ciphertext = serialize_ciphertext(std::get<Ciphertext>(out->payload));
            ++summary.signals;
          }
          ch.send(FrameType::kDecision, encode_decision(d));
          ++summary.quotes;
          break;
        }
        case FrameType::kBye:
          ch.send(FrameType::kBye, {});
          ch.close();
          return summary;
        case FrameType::kError: {
          const ErrorPayload e = decode_error(f.payload);
          throw ProtocolError("aggregator reported error " +
                              std::to_string(static_cast<int>(e.code)) + ": " + e.message);
        }
        case FrameType::kDecision:
          reject(ch, ErrorCode::kUnexpected, "trader received a DECISION frame");
      }
    } catch (const DepthError& e) {
      reject(ch, ErrorCode::kDepth, e.what());
    } catch (const FormatError& e) {
      reject(ch, ErrorCode::kMalformed, e.what());
    } catch (const ParameterError& e) {
      reject(ch, ErrorCode::kMalformed, e.what());
    } catch (const AlignmentError& e) {
      reject(ch, ErrorCode::kMalformed, e.what());
    }
  }
}

TraderSummary trader_worker(const TraderConfig& config) {
  FrameChannel ch(TcpStream::connect(config.connect, config.connect_timeout));
  return run_trader(ch, config.requested_id);
}

}  // namespace hemacd
