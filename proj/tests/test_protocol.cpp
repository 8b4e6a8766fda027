// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Streaming/batch equivalence and loopback runs of the aggregator and
// trader roles.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>
#include <thread>

#include "hemacd/aggregator.hpp"
#include "hemacd/errors.hpp"
#include "hemacd/pipeline.hpp"
#include "hemacd/serialize.hpp"
#include "hemacd/trader.hpp"
#include "test_support.hpp"

namespace hemacd {
namespace {

using namespace std::chrono_literals;
using testing_support::fixture;
using testing_support::small_params;

constexpr std::uint64_t kSeed = 17;

SchemeParams net_params() { return small_params(10, 1024); }

PriceSeries prefix(std::size_t n) {
  PriceSeries p;
  p.ticker = "AAPL";
  p.dates.assign(fixture().dates.begin(), fixture().dates.begin() + n);
  p.closes.assign(fixture().closes.begin(), fixture().closes.begin() + n);
  return p;
}

RunConfig local_config() {
  RunConfig c;
  c.engine = Engine::kHe;
  c.params = net_params();
  c.seed = kSeed;
  c.tau = 1.0;
  return c;
}

// A threshold that turns some decisions into orders.
double busy_tau(const LocalRun& run) {
  double peak = 0.0;
  for (double v : run.o2hat_dec) peak = std::max(peak, std::abs(v));
  return 0.3 * peak;
}

AggregatorConfig agg_config(std::size_t traders, double tau) {
  AggregatorConfig a;
  a.bind = Endpoint::parse("127.0.0.1:0");
  a.traders = traders;
  a.params = net_params();
  a.tau = tau;
  a.seed = kSeed;
  a.accept_timeout = 20s;
  a.tick_timeout = 20s;
  return a;
}

// Runs the aggregator with `traders` honest traders spawned on loopback.
OrderLog run_loopback(AggregatorConfig cfg, const PriceSeries& prices,
                      std::vector<TraderSummary>* summaries = nullptr) {
  std::vector<std::future<TraderSummary>> workers;
  const std::size_t n = cfg.traders;
  cfg.on_listening = [&](std::uint16_t port) {
    for (std::size_t k = 0; k < n; ++k) {
      TraderConfig tc;
      tc.connect = Endpoint{"127.0.0.1", port};
      tc.connect_timeout = 10s;
      workers.push_back(std::async(std::launch::async, [tc] { return trader_worker(tc); }));
    }
  };
  OrderLog log = serve_aggregator(cfg, prices);
  for (auto& w : workers) {
    const TraderSummary s = w.get();
    if (summaries) summaries->push_back(s);
  }
  return log;
}

std::size_t active_orders(const OrderLog& log) {
  return static_cast<std::size_t>(std::count_if(log.rows.begin(), log.rows.end(),
                                                [](const OrderRow& r) { return r.final_order != 0; }));
}

TEST(Streaming, SimMatchesBatchExactly) {
  SimEngine sim(small_params(10));
  const Windows w;
  StreamingDecision stream(sim, w);
  std::vector<double> d;
  for (double c : fixture().closes) d.push_back(c / 100.0);
  const auto batch = o2_hat(macd(PlainSeries{d, 0}, w).m.values);
  std::size_t signals = 0;
  for (std::size_t t = 0; t < d.size(); ++t) {
    const auto out = stream.push(sim.b_encrypt(d[t]));
    ASSERT_EQ(out.has_value(), t + 1 >= warmup_quotes(w)) << t;
    if (out) {
      ++signals;
      EXPECT_EQ(sim.b_decrypt(*out), batch.at(StreamingDecision::macd_index(t, w))) << t;
    }
  }
  EXPECT_EQ(signals, d.size() - warmup_quotes(w) + 1);
}

TEST(Streaming, HeCiphertextsMatchBatchBytes) {
  auto he = HeEngine::create(net_params(), 3);
  he->set_tracing(false);
  const Windows w;
  std::vector<CipherHandle> quotes;
  for (std::size_t t = 0; t < 50; ++t) quotes.push_back(he->b_encrypt(fixture().closes[t] / 100.0));
  const auto mc = macd(*he, CipherSeries{quotes, 0}, w);
  const auto batch = o2_hat(*he, mc.m.values);
  StreamingDecision stream(*he, w);
  for (std::size_t t = 0; t < quotes.size(); ++t) {
    const auto out = stream.push(quotes[t]);
    if (!out) continue;
    const std::size_t i = StreamingDecision::macd_index(t, w);
    EXPECT_EQ(serialize_ciphertext(std::get<Ciphertext>(out->payload)),
              serialize_ciphertext(std::get<Ciphertext>(batch.at(i - 1).payload)))
        << t;
  }
}

TEST(Streaming, CustomWindows) {
  SimEngine sim(small_params(10));
  const Windows w{3, 7, 4};
  StreamingDecision stream(sim, w);
  std::vector<double> d;
  for (std::size_t t = 0; t < 40; ++t) d.push_back(fixture().closes[t] / 100.0);
  const auto batch = o2_hat(macd(PlainSeries{d, 0}, w).m.values);
  for (std::size_t t = 0; t < d.size(); ++t) {
    if (const auto out = stream.push(sim.b_encrypt(d[t]))) {
      EXPECT_EQ(sim.b_decrypt(*out), batch.at(StreamingDecision::macd_index(t, w)));
    }
  }
}

class Loopback : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    prices_ = new PriceSeries(prefix(70));
    LocalRun first = run_local(local_config(), *prices_);
    tau_ = busy_tau(first);
    RunConfig c = local_config();
    c.tau = tau_;
    local_ = new LocalRun(run_local(c, *prices_));
  }
  static void TearDownTestSuite() {
    delete local_;
    delete prices_;
  }
  static PriceSeries* prices_;
  static LocalRun* local_;
  static double tau_;
};

PriceSeries* Loopback::prices_ = nullptr;
LocalRun* Loopback::local_ = nullptr;
double Loopback::tau_ = 0.0;

TEST_F(Loopback, OneTraderEqualsLocalRun) {
  ASSERT_GT(active_orders(local_->order_log), 0u);
  std::vector<TraderSummary> s;
  const OrderLog log = run_loopback(agg_config(1, tau_), *prices_, &s);
  EXPECT_EQ(log.to_csv(), local_->order_log.to_csv());
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].trader_id, 0u);
  EXPECT_EQ(s[0].quotes, 70u);
  EXPECT_EQ(s[0].signals, 70u - warmup_quotes(Windows{}) + 1);
}

TEST_F(Loopback, TwoTradersAgreeWithLocalRun) {
  const OrderLog log = run_loopback(agg_config(2, tau_), *prices_);
  EXPECT_EQ(log.final_orders(), local_->order_log.final_orders());
  for (const auto& row : log.rows) {
    ASSERT_EQ(row.votes.size(), 2u);
    EXPECT_EQ(row.votes[0], row.votes[1]) << row.tick;
  }
}

TEST_F(Loopback, DeterministicAcrossRuns) {
  const OrderLog a = run_loopback(agg_config(1, tau_), *prices_);
  const OrderLog b = run_loopback(agg_config(1, tau_), *prices_);
  EXPECT_EQ(a.to_csv(), b.to_csv());
}

TEST(Aggregator, ZeroTradersIsStartupError) {
  AggregatorConfig cfg = agg_config(0, 1.0);
  EXPECT_THROW(serve_aggregator(cfg, prefix(50)), ConfigError);
}

TEST(Aggregator, MajorityVote) {
  using V = Vote;
  EXPECT_EQ(majority_vote({V::kBuy, V::kBuy}), 1);
  EXPECT_EQ(majority_vote({V::kBuy, V::kSell}), 0);
  EXPECT_EQ(majority_vote({V::kSell, V::kSell, V::kBuy}), -1);
  EXPECT_EQ(majority_vote({V::kBuy, V::kMissing}), 1);
  EXPECT_EQ(majority_vote({V::kMissing, V::kMissing}), 0);
  EXPECT_EQ(majority_vote({V::kBuy, V::kHold}), 0);
}

TEST(Aggregator, OrderLogCsv) {
  OrderLog log;
  log.rows.push_back({0, "2015-01-06", {Vote::kWarmUp, Vote::kWarmUp}, 0, true});
  log.rows.push_back({1, "2015-01-07", {Vote::kSell, Vote::kMissing}, -1, false});
  EXPECT_EQ(log.to_csv(),
            "tick,date,trader_votes,final_order\n"
            "0,2015-01-06,w;w,0\n"
            "1,2015-01-07,-1;x,-1\n");
}

// A trader that completes the handshake and then hangs up.
void quitter(std::uint16_t port) {
  FrameChannel ch(TcpStream::connect(Endpoint{"127.0.0.1", port}, 10s));
  ch.send(FrameType::kHello, encode_hello({}));
  for (int i = 0; i < 4; ++i) ch.recv(10s);  // HELLO, PARAMS, PUBKEY, RELINKEY
  ch.recv(10s);                              // first QUOTE
  ch.close();
}

TEST(Aggregator, DisconnectedTraderIsExcludedFromVote) {
  const PriceSeries prices = prefix(50);
  AggregatorConfig cfg = agg_config(2, 1e-9);
  std::future<TraderSummary> honest;
  std::thread quit;
  cfg.on_listening = [&](std::uint16_t port) {
    TraderConfig tc;
    tc.connect = Endpoint{"127.0.0.1", port};
    honest = std::async(std::launch::async, [tc] { return trader_worker(tc); });
    // Connect after the honest trader so ids are predictable.
    std::this_thread::sleep_for(200ms);
    quit = std::thread(quitter, port);
  };
  const OrderLog log = serve_aggregator(cfg, prices);
  quit.join();
  EXPECT_EQ(honest.get().quotes, 50u);
  ASSERT_EQ(log.rows.size(), 50u);
  for (const auto& row : log.rows) {
    EXPECT_EQ(row.votes[1], Vote::kMissing) << row.tick;
    if (!row.warm_up) EXPECT_EQ(row.final_order, static_cast<int>(row.votes[0])) << row.tick;
  }
}

// Drives a trader by hand, playing the aggregator.
class ManualAggregator {
 public:
  ManualAggregator() : listener_(TcpListener::bind(Endpoint::parse("127.0.0.1:0"))) {
    trader_ = std::async(std::launch::async, [port = listener_.port()] {
      TraderConfig tc;
      tc.connect = Endpoint{"127.0.0.1", port};
      return trader_worker(tc);
    });
    ch_ = std::make_unique<FrameChannel>(listener_.accept(10s));
    const Frame hello = ch_->recv(10s);
    EXPECT_EQ(hello.type, FrameType::kHello);
  }

  FrameChannel& channel() { return *ch_; }

  void send_keys(const SchemeParams& params, std::uint64_t seed = 1) {
    scheme_ = std::make_shared<const Scheme>(params);
    engine_ = HeEngine::create(scheme_, seed, 0);
    ch_->send(FrameType::kHello, encode_hello({kProtocolVersion, 0}));
    ch_->send(FrameType::kParams, encode_params(*scheme_, Windows{}));
    ch_->send(FrameType::kPubKey, encode_pubkey(0, serialize_public_key(engine_->public_key())));
    ch_->send(FrameType::kRelinKey, serialize_relin_key(engine_->relin_key()));
  }

  std::vector<std::uint8_t> quote(std::uint64_t tick, double x) {
    const auto h = engine_->b_encrypt(x);
    return encode_quote({tick, serialize_ciphertext(std::get<Ciphertext>(h.payload))});
  }

  // The trader's outcome: "" on clean exit, else the exception text.
  std::string outcome() {
    try {
      trader_.get();
      return "";
    } catch (const std::exception& e) {
      return e.what();
    }
  }

 private:
  TcpListener listener_;
  std::future<TraderSummary> trader_;
  std::unique_ptr<FrameChannel> ch_;
  std::shared_ptr<const Scheme> scheme_;
  std::unique_ptr<HeEngine> engine_;
};

TEST(Trader, QuoteBeforeKeysIsProtocolError) {
  ManualAggregator agg;
  agg.channel().send(FrameType::kHello, encode_hello({kProtocolVersion, 0}));
  agg.channel().send(FrameType::kQuote, encode_quote({0, {1, 2, 3}}));
  const Frame reply = agg.channel().recv(10s);
  ASSERT_EQ(reply.type, FrameType::kError);
  EXPECT_EQ(decode_error(reply.payload).code, ErrorCode::kUnexpected);
  EXPECT_NE(agg.outcome().find("QUOTE before keys"), std::string::npos);
}

TEST(Trader, WarmUpThenSignals) {
  ManualAggregator agg;
  agg.send_keys(net_params());
  for (std::uint64_t t = 0; t < 46; ++t) {
    agg.channel().send(FrameType::kQuote, agg.quote(t, fixture().closes[t] / 100.0));
    const Frame f = agg.channel().recv(10s);
    ASSERT_EQ(f.type, FrameType::kDecision);
    const DecisionPayload d = decode_decision(f.payload);
    EXPECT_EQ(d.tick, t);
    EXPECT_EQ(d.status, t + 1 < 45 ? DecisionStatus::kWarmUp : DecisionStatus::kSignal) << t;
  }
  agg.channel().send(FrameType::kBye, {});
  EXPECT_EQ(agg.channel().recv(10s).type, FrameType::kBye);
  EXPECT_EQ(agg.outcome(), "");
}

TEST(Trader, OutOfOrderTickRejected) {
  ManualAggregator agg;
  agg.send_keys(net_params());
  agg.channel().send(FrameType::kQuote, agg.quote(0, 1.0));
  agg.channel().recv(10s);
  agg.channel().send(FrameType::kQuote, agg.quote(0, 1.0));  // tick replayed
  const Frame reply = agg.channel().recv(10s);
  ASSERT_EQ(reply.type, FrameType::kError);
  EXPECT_NE(agg.outcome(), "");
}

TEST(Trader, ReplayedSequenceNumberRejected) {
  // Raw socket so the sequence number can be forged.
  TcpListener listener = TcpListener::bind(Endpoint::parse("127.0.0.1:0"));
  auto trader = std::async(std::launch::async, [port = listener.port()] {
    TraderConfig tc;
    tc.connect = Endpoint{"127.0.0.1", port};
    return trader_worker(tc);
  });
  TcpStream raw = listener.accept(10s);
  std::vector<std::uint8_t> header(kFrameHeaderSize);
  raw.recv_exact(header, 10s);
  const FrameHeader h = parse_frame_header(header, kDefaultMaxPayload);
  std::vector<std::uint8_t> body(h.length);
  raw.recv_exact(body, 10s);
  const auto hello = encode_hello({kProtocolVersion, 0});
  raw.send_all(serialize_frame({FrameType::kHello, 5, hello}));
  raw.send_all(serialize_frame({FrameType::kHello, 5, hello}));
  EXPECT_THROW(trader.get(), ProtocolError);
}

TEST(Trader, DepthExhaustionSendsDepthError) {
  ManualAggregator agg;
  agg.send_keys(small_params(3, 1024));
  ErrorCode code = ErrorCode::kInternal;
  std::uint64_t failed_at = 0;
  for (std::uint64_t t = 0; t < 60; ++t) {
    agg.channel().send(FrameType::kQuote, agg.quote(t, fixture().closes[t] / 100.0));
    const Frame f = agg.channel().recv(10s);
    if (f.type == FrameType::kError) {
      code = decode_error(f.payload).code;
      failed_at = t;
      break;
    }
  }
  EXPECT_EQ(code, ErrorCode::kDepth);
  EXPECT_EQ(failed_at, 44u);
  EXPECT_NE(agg.outcome(), "");
}

TEST(Trader, StaleCiphertextRejected) {
  ManualAggregator agg;
  agg.send_keys(net_params());
  // A quote already switched down a level is not a fresh encryption.
  auto eng = HeEngine::create(std::make_shared<const Scheme>(net_params()), 1, 0);
  const auto low = eng->b_mod_switch(eng->b_encrypt(1.0), 5);
  agg.channel().send(FrameType::kQuote,
                     encode_quote({0, serialize_ciphertext(std::get<Ciphertext>(low.payload))}));
  const Frame reply = agg.channel().recv(10s);
  ASSERT_EQ(reply.type, FrameType::kError);
  EXPECT_EQ(decode_error(reply.payload).code, ErrorCode::kMalformed);
  EXPECT_NE(agg.outcome(), "");
}

}  // namespace
}  // namespace hemacd
