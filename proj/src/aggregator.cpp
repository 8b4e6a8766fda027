// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/aggregator.hpp"

#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <memory>
#include <mutex>
#include <thread>

#include "hemacd/backend.hpp"
#include "hemacd/errors.hpp"
#include "hemacd/serialize.hpp"
#include "hemacd/trader.hpp"

namespace hemacd {

namespace {

const char* vote_text(Vote v) {
  switch (v) {
    case Vote::kSell: return "-1";
    case Vote::kHold: return "0";
    case Vote::kBuy: return "1";
    case Vote::kWarmUp: return "w";
    case Vote::kMissing: return "x";
  }
  return "x";
}

}  // namespace

std::string OrderLog::to_csv() const {
  std::string out = "tick,date,trader_votes,final_order\n";
  for (const auto& r : rows) {
    out += std::to_string(r.tick) + "," + r.date + ",";
    for (std::size_t k = 0; k < r.votes.size(); ++k) {
      if (k) out += ';';
      out += vote_text(r.votes[k]);
    }
    out += "," + std::to_string(r.final_order) + "\n";
  }
  return out;
}

std::vector<int> OrderLog::final_orders() const {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.final_order);
  return out;
}

int majority_vote(const std::vector<Vote>& votes) {
  int buy = 0, sell = 0, hold = 0;
  for (Vote v : votes) {
    buy += v == Vote::kBuy;
    sell += v == Vote::kSell;
    hold += v == Vote::kHold;
  }
  if (buy > sell && buy > hold) return 1;
  if (sell > buy && sell > hold) return -1;
  return 0;
}

namespace {

constexpr auto kPollSlice = std::chrono::milliseconds(100);

struct Board {
  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::vector<Vote>> votes;      // [tick][trader]
  std::vector<std::vector<bool>> reported;   // [tick][trader]
  std::vector<bool> alive;
  std::size_t finalized = 0;  // ticks [0, finalized) are closed
};

struct Link {
  std::uint32_t id = 0;
  std::unique_ptr<FrameChannel> channel;
  std::unique_ptr<HeEngine> engine;
};

void handshake(Link& link, const Scheme& scheme, const Windows& windows,
               std::chrono::milliseconds timeout) {
  FrameChannel& ch = *link.channel;
  const Frame hello = ch.recv(timeout);
  if (hello.type != FrameType::kHello) throw ProtocolError("expected HELLO from trader");
  const HelloPayload h = decode_hello(hello.payload);
  if (h.trader_id != kAnyTraderId && h.trader_id != link.id) {
    throw ProtocolError("trader requested id " + std::to_string(h.trader_id) + ", assigned " +
                        std::to_string(link.id));
  }
  ch.send(FrameType::kHello, encode_hello({kProtocolVersion, link.id}));
  ch.send(FrameType::kParams, encode_params(scheme, windows));
  ch.send(FrameType::kPubKey,
          encode_pubkey(link.id, serialize_public_key(link.engine->public_key())));
  ch.send(FrameType::kRelinKey, serialize_relin_key(link.engine->relin_key()));
}

void publish(Board& board, std::size_t tick, std::size_t trader, Vote v) {
  std::lock_guard lock(board.mu);
  if (tick < board.finalized) return;  // too late for this tick
  board.votes[tick][trader] = v;
  board.reported[tick][trader] = true;
  board.cv.notify_all();
}

void drop(Board& board, std::size_t trader) {
  std::lock_guard lock(board.mu);
  board.alive[trader] = false;
  board.cv.notify_all();
}

void stream_to_trader(Link& link, const AggregatorConfig& cfg, const PriceSeries& prices,
                      Board& board) {
  FrameChannel& ch = *link.channel;
  HeEngine& eng = *link.engine;
  const std::size_t k = link.id;
  try {
    for (std::size_t t = 0; t < prices.size(); ++t) {
      if (cfg.stop && cfg.stop->load()) break;
      const CipherHandle q = eng.b_encrypt(prices.closes[t] / cfg.norm);
      ch.send(FrameType::kQuote,
              encode_quote({t, serialize_ciphertext(std::get<Ciphertext>(q.payload))}));
      Frame f = ch.recv(cfg.tick_timeout);
      if (f.type == FrameType::kError) {
        const ErrorPayload e = decode_error(f.payload);
        throw ProtocolError("trader " + std::to_string(k) + " error: " + e.message);
      }
      if (f.type != FrameType::kDecision) throw ProtocolError("expected DECISION");
      const DecisionPayload d = decode_decision(f.payload);
      if (d.tick != t) throw ProtocolError("DECISION for wrong tick");
      Vote v = Vote::kWarmUp;
      if (d.status == DecisionStatus::kSignal) {
        const Ciphertext ct = deserialize_ciphertext(d.ciphertext, eng.scheme());
        const int level = ct.level;
        const double scale = ct.scale;
        double value = std::nan("");
        try {
          value = eng.b_decrypt(CipherHandle{ct, level, scale});
        } catch (const Error&) {
        }
        if (!std::isfinite(value) || std::abs(value) > cfg.sanity_bound) {
          v = Vote::kMissing;
        } else {
          v = static_cast<Vote>(threshold_order(value, cfg.tau));
        }
      }
      publish(board, t, k, v);
    }
    ch.send(FrameType::kBye, {});
    const Frame bye = ch.recv(cfg.tick_timeout);
    if (bye.type != FrameType::kBye) throw ProtocolError("expected BYE");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "aggregator: trader %zu dropped: %s\n", k, e.what());
    try {
      ch.send(FrameType::kError, encode_error({ErrorCode::kUnexpected, e.what()}));
    } catch (const std::exception&) {
    }
  }
  ch.close();
  drop(board, k);
}

}  // namespace

OrderLog serve_aggregator(const AggregatorConfig& cfg, const PriceSeries& prices) {
  if (cfg.traders == 0) throw ConfigError("aggregator needs at least one trader");
  if (!(cfg.tau > 0.0)) throw ConfigError("threshold tau must be > 0");
  if (!(cfg.norm > 0.0)) throw ConfigError("normalization must be > 0");
  cfg.windows.validate();
  if (prices.size() == 0) throw DataError("no prices to stream");

  const auto scheme = std::make_shared<const Scheme>(cfg.params);
  TcpListener listener = TcpListener::bind(cfg.bind);
  if (cfg.on_listening) cfg.on_listening(listener.port());

  std::vector<Link> links(cfg.traders);
  for (std::size_t k = 0; k < cfg.traders; ++k) {
    links[k].id = static_cast<std::uint32_t>(k);
    links[k].engine = HeEngine::create(scheme, cfg.seed, links[k].id);
    links[k].engine->set_tracing(false);
  }
  for (auto& link : links) {
    link.channel = std::make_unique<FrameChannel>(listener.accept(cfg.accept_timeout));
    handshake(link, *scheme, cfg.windows, cfg.accept_timeout);
  }

  Board board;
  board.votes.assign(prices.size(), std::vector<Vote>(cfg.traders, Vote::kMissing));
  board.reported.assign(prices.size(), std::vector<bool>(cfg.traders, false));
  board.alive.assign(cfg.traders, true);

  std::vector<std::thread> threads;
  threads.reserve(links.size());
  for (auto& link : links) {
    threads.emplace_back(
        [&link, &cfg, &prices, &board] { stream_to_trader(link, cfg, prices, board); });
  }

  const std::size_t warm = warmup_quotes(cfg.windows);
  OrderLog log;
  for (std::size_t t = 0; t < prices.size(); ++t) {
    OrderRow row;
    row.tick = t;
    row.date = prices.dates[t];
    row.warm_up = t + 1 < warm;
    {
      std::unique_lock lock(board.mu);
      const auto deadline = std::chrono::steady_clock::now() + cfg.tick_timeout;
      const auto done = [&] {
        for (std::size_t k = 0; k < cfg.traders; ++k) {
          if (board.alive[k] && !board.reported[t][k]) return false;
        }
        return true;
      };
      while (!done() && std::chrono::steady_clock::now() < deadline &&
             !(cfg.stop && cfg.stop->load())) {
        board.cv.wait_for(lock, kPollSlice);
      }
      board.finalized = t + 1;
      row.votes = board.votes[t];
    }
    if (cfg.stop && cfg.stop->load()) {
      log.interrupted = true;
      break;
    }
    row.final_order = row.warm_up ? 0 : majority_vote(row.votes);
    if (cfg.on_tick) cfg.on_tick(row);
    log.rows.push_back(std::move(row));
  }
  for (auto& th : threads) th.join();
  return log;
}

}  // namespace hemacd
