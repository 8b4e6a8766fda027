// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include "hemacd/errors.hpp"
#include "hemacd/trader.hpp"

namespace hemacd {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

constexpr double kSanityBound = 1e6;

std::vector<double> decrypt_all(const Decryptor& dec, const std::vector<CipherHandle>& hs) {
  std::vector<double> out;
  out.reserve(hs.size());
  for (const auto& h : hs) out.push_back(dec.b_decrypt(h));
  return out;
}

std::vector<double> concat(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string log2_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "2^%g", std::log2(v));
  return buf;
}

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string chain_text(const SchemeParams& p) {
  std::string s;
  for (std::size_t i = 0; i < p.chain_bits.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p.chain_bits[i]);
  }
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

std::string series_csv(const PlainSeries& plain, const std::vector<double>& dec,
                       const PriceSeries& prices) {
  std::string out = "index,date,value_plain,value_decrypted\n";
  for (std::size_t i = 0; i < plain.size(); ++i) {
    out += std::to_string(i) + "," + prices.dates[plain.offset + i] + "," +
           format_real(plain.values[i]) + "," + format_real(dec[i]) + "\n";
  }
  return out;
}

}  // namespace

OrderLog local_order_log(const PriceSeries& prices, const Windows& windows,
                         const std::vector<double>& o2hat, double tau) {
  const std::size_t warm = warmup_quotes(windows);
  OrderLog log;
  for (std::size_t t = 0; t < prices.size(); ++t) {
    OrderRow row;
    row.tick = t;
    row.date = prices.dates[t];
    row.warm_up = t + 1 < warm;
    if (row.warm_up) {
      row.votes = {Vote::kWarmUp};
    } else {
      const double v = o2hat.at(StreamingDecision::macd_index(t, windows));
      row.votes = {std::isfinite(v) && std::abs(v) <= kSanityBound
                       ? static_cast<Vote>(threshold_order(v, tau))
                       : Vote::kMissing};
      row.final_order = majority_vote(row.votes);
    }
    log.rows.push_back(std::move(row));
  }
  return log;
}

LocalRun run_local(const RunConfig& config) {
  return run_local(config, load_prices(config.input));
}

LocalRun run_local(const RunConfig& config, const PriceSeries& prices) {
  config.validate();
  const Windows& w = config.windows;
  if (prices.size() < warmup_quotes(w)) {
    throw DataError("need at least " + std::to_string(warmup_quotes(w)) + " prices, got " +
                    std::to_string(prices.size()));
  }

  LocalRun run;
  run.engine = config.engine;
  run.prices = prices;
  run.normalized.reserve(prices.size());
  for (double p : prices.closes) run.normalized.push_back(p / config.norm);

  const PlainSeries d{run.normalized, 0};
  const std::size_t quotes = prices.size();
  double t_macd = 0.0, t_decision = 0.0;
  const double t_plain = time_stage([&] {
    t_macd = time_stage([&] { run.plain = macd(d, w); });
    t_decision = time_stage([&] { run.o2hat_plain = o2_hat(run.plain.m.values); });
  });
  run.o1 = o1(run.plain.m.values);
  run.o2 = o2(run.plain.m.values);
  run.interval_violations = interval_violations(run.plain.m.values);
  run.tau = config.tau ? *config.tau : calibrate_tau(run.o2hat_plain, run.o1);

  run.report.engine = to_string(config.engine);
  if (config.engine == Engine::kOracle) {
    run.alpha_dec = run.plain.alpha.values;
    run.beta_dec = run.plain.beta.values;
    run.m_dec = run.plain.m.values;
    run.o2hat_dec = run.o2hat_plain;
    run.report.timings = {{"MACD", t_macd, quotes},
                          {"Decision", t_decision, quotes},
                          {"Total", t_plain, quotes}};
  } else {
    std::unique_ptr<Evaluator> owner;
    const Decryptor* dec = nullptr;
    if (config.engine == Engine::kHe) {
      auto he = HeEngine::create(config.params, config.seed);
      dec = he.get();
      owner = std::move(he);
    } else {
      auto sim = std::make_unique<SimEngine>(config.params, config.sim_noise, config.seed);
      dec = sim.get();
      owner = std::move(sim);
    }
    Evaluator& ev = *owner;

    CipherSeries enc;
    MacdResult<CipherHandle> mc;
    std::vector<CipherHandle> oh;
    const double t_enc = time_stage([&] {
      enc.values.reserve(quotes);
      for (double x : run.normalized) enc.values.push_back(ev.b_encrypt(x));
    });
    double e_macd = 0.0, e_decision = 0.0;
    const double e_total = time_stage([&] {
      e_macd = time_stage([&] { mc = macd(ev, enc, w); });
      e_decision = time_stage([&] { oh = o2_hat(ev, mc.m.values); });
    });
    const double t_dec = time_stage([&] {
      run.alpha_dec = decrypt_all(*dec, mc.alpha.values);
      run.beta_dec = decrypt_all(*dec, mc.beta.values);
      run.m_dec = decrypt_all(*dec, mc.m.values);
      run.o2hat_dec = {0.0};
      const auto rest = decrypt_all(*dec, oh);
      run.o2hat_dec.insert(run.o2hat_dec.end(), rest.begin(), rest.end());
    });
    run.trace = ev.trace();
    run.depth = max_depth_of(run.trace);
    run.report.timings = {{"Encrypt", t_enc, quotes},
                          {"MACD", e_macd, quotes},
                          {"Decision", e_decision, quotes},
                          {"Decrypt", t_dec, quotes},
                          {"Total", e_total, quotes}};
  }

  run.orders = threshold_orders(run.o2hat_dec, run.tau);
  run.order_log = local_order_log(prices, w, run.o2hat_dec, run.tau);

  const std::vector<double> dec_tail(run.o2hat_dec.begin() + 1, run.o2hat_dec.end());
  const std::vector<double> plain_tail(run.o2hat_plain.begin() + 1, run.o2hat_plain.end());
  run.report.errors = {
      {"WMA", mape(concat(run.alpha_dec, run.beta_dec),
                   concat(run.plain.alpha.values, run.plain.beta.values))},
      {"MACD", mape(run.m_dec, run.plain.m.values)},
      {"Decision", mape(dec_tail, plain_tail)},
  };

  auto& p = run.report.params;
  p.emplace_back("input", config.input);
  p.emplace_back("quotes", std::to_string(quotes));
  p.emplace_back("windows", std::to_string(w.fast) + "," + std::to_string(w.slow) + "," +
                                std::to_string(w.signal));
  p.emplace_back("norm", format_real(config.norm));
  p.emplace_back("tau", format_real(run.tau) + (config.tau ? "" : " (calibrated)"));
  p.emplace_back("seed", std::to_string(config.seed));
  if (config.engine != Engine::kOracle) {
    p.emplace_back("ring_degree", std::to_string(config.params.ring_degree));
    p.emplace_back("chain_bits", chain_text(config.params));
    p.emplace_back("scale", log2_text(config.params.scale));
    p.emplace_back("sigma", short_real(config.params.sigma));
    p.emplace_back("depth_budget", std::to_string(config.params.depth_budget()));
    p.emplace_back("levels_consumed", std::to_string(run.depth));
  }
  if (config.engine == Engine::kExactSim) p.emplace_back("sim_noise", format_real(config.sim_noise));
  p.emplace_back("macd_values", std::to_string(run.plain.m.size()));
  p.emplace_back("interval_violations", std::to_string(run.interval_violations));
  return run;
}

void write_outputs(const LocalRun& run, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw DataError("cannot create output directory " + dir + ": " + ec.message());

  write_file(root / "signals.csv", series_csv(run.plain.m, run.m_dec, run.prices));
  write_file(root / "wma_fast.csv", series_csv(run.plain.alpha, run.alpha_dec, run.prices));
  write_file(root / "wma_slow.csv", series_csv(run.plain.beta, run.beta_dec, run.prices));

  std::string dec = "index,date,o1,o2,o2hat_plain,o2hat_decrypted,order\n";
  for (std::size_t i = 0; i < run.plain.m.size(); ++i) {
    dec += std::to_string(i) + "," + run.prices.dates[run.plain.m.offset + i] + "," +
           std::to_string(run.o1[i]) + "," + std::to_string(run.o2[i]) + "," +
           format_real(run.o2hat_plain[i]) + "," + format_real(run.o2hat_dec[i]) + "," +
           std::to_string(run.orders[i]) + "\n";
  }
  write_file(root / "decisions.csv", dec);
  write_file(root / "orders.csv", run.order_log.to_csv());
  write_file(root / "errors.csv", run.report.errors_csv());
  write_file(root / "timings.csv", run.report.timings_csv());

  std::ofstream trace(root / "depth_trace.csv", std::ios::binary);
  run.trace.write_csv(trace);
  if (!trace) throw DataError("write failed for depth_trace.csv");

  write_file(root / "report.txt", run.report.to_text());
}

}  // namespace hemacd
