// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Aggregator role: owns one key set per trader, streams encrypted quotes,
// decrypts the returned decisions and votes them into market orders.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hemacd/decision.hpp"
#include "hemacd/indicators.hpp"
#include "hemacd/prices.hpp"
#include "hemacd/scheme.hpp"
#include "hemacd/socket.hpp"

namespace hemacd {

// Per-trader vote for one tick.
enum class Vote : std::int8_t {
  kSell = -1,
  kHold = 0,
  kBuy = 1,
  kWarmUp = 2,
  kMissing = 3,  // late, disconnected or invalid
};

struct OrderRow {
  std::size_t tick = 0;
  std::string date;
  std::vector<Vote> votes;
  int final_order = 0;
  bool warm_up = false;
};

struct OrderLog {
  std::vector<OrderRow> rows;
  bool interrupted = false;  // stopped before the last tick

  // tick,date,trader_votes,final_order; votes joined by ';' using
  // -1/0/1, "w" for warm-up and "x" for missing.
  std::string to_csv() const;
  std::vector<int> final_orders() const;
};

// Strict majority among valid votes; anything else holds.
int majority_vote(const std::vector<Vote>& votes);

struct AggregatorConfig {
  Endpoint bind;
  std::size_t traders = 1;
  SchemeParams params;
  Windows windows;
  double norm = 100.0;
  double tau = 0.0;  // must be > 0
  std::uint64_t seed = 1;
  std::chrono::milliseconds accept_timeout{60000};
  std::chrono::milliseconds tick_timeout{30000};
  // Decrypted values beyond this magnitude mark the tick invalid.
  double sanity_bound = 1e6;
  // Called once the listening port is known (useful with port 0).
  std::function<void(std::uint16_t)> on_listening;
  // Progress callback, per finalized tick.
  std::function<void(const OrderRow&)> on_tick;
  // Polled between ticks; when set the stream stops early.
  const std::atomic<bool>* stop = nullptr;
};

OrderLog serve_aggregator(const AggregatorConfig& config, const PriceSeries& prices);

}  // namespace hemacd
