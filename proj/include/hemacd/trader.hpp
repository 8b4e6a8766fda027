// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Trader role: evaluates MACD and the approximate decision on encrypted
// quotes as they arrive. Holds public evaluation keys only.

#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>

#include "hemacd/backend.hpp"
#include "hemacd/decision.hpp"
#include "hemacd/indicators.hpp"
#include "hemacd/socket.hpp"

namespace hemacd {

// Quotes needed before the first signal.
std::size_t warmup_quotes(const Windows& w);

// Streaming twin of macd() followed by o2_hat(). Every value is produced by
// the same per-output routine as the batch path, so results match it
// exactly. Memory is bounded by the slow window.
class StreamingDecision {
 public:
  StreamingDecision(Evaluator& ev, const Windows& windows, const ReluPoly& poly = {});

  // Consumes quote number `ticks()`; returns the decision once warm.
  std::optional<CipherHandle> push(const CipherHandle& quote);
  std::size_t ticks() const { return ticks_; }
  // MACD index answered by the decision at tick t.
  static std::size_t macd_index(std::size_t tick, const Windows& w);

 private:
  Evaluator& ev_;
  Windows windows_;
  ReluPoly poly_;
  std::size_t ticks_ = 0;
  std::deque<CipherHandle> prices_;  // last `slow` quotes
  std::deque<CipherHandle> thetas_;  // last `signal` MACD lines
  std::optional<CipherHandle> last_m_;
  std::vector<PlainHandle> w_fast_, w_slow_, w_signal_;
};

struct TraderConfig {
  Endpoint connect;
  std::chrono::milliseconds connect_timeout{30000};
  std::uint32_t requested_id = 0xFFFFFFFFu;
};

struct TraderSummary {
  std::uint32_t trader_id = 0;
  std::size_t quotes = 0;
  std::size_t signals = 0;
};

// Runs the protocol on an established channel until BYE.
TraderSummary run_trader(FrameChannel& channel, std::uint32_t requested_id = 0xFFFFFFFFu);
TraderSummary trader_worker(const TraderConfig& config);

}  // namespace hemacd
