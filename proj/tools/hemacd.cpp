// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// hemacd: local pipeline runs and the aggregator/trader network roles.
//
// Exit codes: 0 ok, 1 configuration, 2 runtime, 3 protocol.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "hemacd/aggregator.hpp"
#include "hemacd/config.hpp"
#include "hemacd/errors.hpp"
#include "hemacd/pipeline.hpp"
#include "hemacd/trader.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitProtocol = 3;

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop.store(true); }

int run_local_role(const hemacd::RunConfig& cfg) {
  const hemacd::LocalRun run = hemacd::run_local(cfg);
  hemacd::write_outputs(run, cfg.out);
  std::cout << run.report.to_text();
  if (run.engine != hemacd::Engine::kOracle) {
    std::cout << "\nlevels consumed: " << run.depth << " of " << cfg.params.depth_budget() << "\n";
  }
  std::cout << "outputs written to " << cfg.out << "\n";
  return kExitOk;
}

std::string row_line(const hemacd::OrderRow& row) {
  hemacd::OrderLog one;
  one.rows.push_back(row);
  std::string csv = one.to_csv();
  return csv.substr(csv.find('\n') + 1);
}

int run_aggregator_role(const hemacd::RunConfig& cfg) {
  const hemacd::PriceSeries prices = hemacd::load_prices(cfg.input);

  hemacd::AggregatorConfig ac;
  ac.bind = hemacd::Endpoint::parse(cfg.addr);
  ac.traders = cfg.traders;
  ac.params = cfg.params;
  ac.windows = cfg.windows;
  ac.norm = cfg.norm;
  ac.seed = cfg.seed;
  ac.tick_timeout = cfg.tick_timeout;
  ac.accept_timeout = cfg.accept_timeout;
  ac.stop = &g_stop;
  if (cfg.tau) {
    ac.tau = *cfg.tau;
  } else {
    hemacd::RunConfig oracle = cfg;
    oracle.engine = hemacd::Engine::kOracle;
    oracle.role = hemacd::Role::kLocal;
    ac.tau = hemacd::run_local(oracle, prices).tau;
  }

  std::filesystem::create_directories(cfg.out);
  const auto path = std::filesystem::path(cfg.out) / "orders.csv";
  // Rows are appended as ticks close so an interrupted run keeps its log.
  std::ofstream partial(path, std::ios::binary | std::ios::trunc);
  if (!partial) throw hemacd::DataError("cannot write " + path.string());
  partial << "tick,date,trader_votes,final_order\n" << std::flush;
  ac.on_tick = [&partial](const hemacd::OrderRow& row) { partial << row_line(row) << std::flush; };
  ac.on_listening = [&](std::uint16_t port) {
    std::cout << "listening on " << ac.bind.host << ":" << port << " for " << cfg.traders
              << " trader(s)" << std::endl;
  };

  const hemacd::OrderLog log = hemacd::serve_aggregator(ac, prices);
  partial.close();
  std::cout << "order log: " << log.rows.size() << " of " << prices.size() << " ticks -> "
            << path.string() << "\n";
  if (log.interrupted) {
    std::cerr << "hemacd: interrupted, partial order log kept\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int run_trader_role(const hemacd::RunConfig& cfg) {
  hemacd::TraderConfig tc;
  tc.connect = hemacd::Endpoint::parse(cfg.addr);
  tc.connect_timeout = cfg.accept_timeout;
  const hemacd::TraderSummary s = hemacd::trader_worker(tc);
  std::cout << "trader " << s.trader_id << ": " << s.quotes << " quotes, " << s.signals
            << " signals\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MACD and trading decisions over encrypted prices"};
  app.set_version_flag("--version", "hemacd 0.1.0");

  // Every flag is kept as text and funnelled through apply_setting, the
  // same path the params file takes, so both validate identically.
  std::vector<std::pair<std::string, std::optional<std::string>>> flags = {
      {"input", {}}, {"engine", {}}, {"role", {}},      {"addr", {}},     {"windows", {}},
      {"norm", {}},  {"tau", {}},    {"out", {}},       {"seed", {}},     {"traders", {}},
      {"sim_noise", {}}, {"tick_timeout_ms", {}},
  };
  const std::vector<std::string> help = {
      "Price CSV with header date,close",
      "oracle | exact-sim | he",
      "local | aggregator | trader",
      "host:port to bind (aggregator) or connect to (trader)",
      "fast,slow,signal window sizes",
      "Divide prices by this before encryption",
      "Order threshold (> 0) or 'auto' to calibrate",
      "Output directory",
      "RNG seed for keys and encryption",
      "Number of traders the aggregator waits for",
      "Std-dev of noise injected by the exact-sim engine",
      "Per-tick vote deadline in milliseconds",
  };
  for (std::size_t i = 0; i < flags.size(); ++i) {
    std::string name = "--" + flags[i].first;
    for (auto& ch : name) ch = ch == '_' ? '-' : ch;
    app.add_option(name, flags[i].second, help[i]);
  }
  std::optional<std::string> params_file;
  app.add_option("--params-file", params_file, "Flat key = value settings file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  hemacd::RunConfig cfg;
  try {
    if (params_file) hemacd::apply_settings_file(cfg, *params_file);
    for (const auto& [key, value] : flags) {
      if (value) hemacd::apply_setting(cfg, key, *value);
    }
    cfg.validate();
  } catch (const hemacd::Error& e) {
    std::cerr << "hemacd: configuration error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::signal(SIGINT, on_sigint);
  std::signal(SIGTERM, on_sigint);
  try {
    switch (cfg.role) {
      case hemacd::Role::kLocal: return run_local_role(cfg);
      case hemacd::Role::kAggregator: return run_aggregator_role(cfg);
      case hemacd::Role::kTrader: return run_trader_role(cfg);
    }
  } catch (const hemacd::ConfigError& e) {
    std::cerr << "hemacd: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hemacd::ProtocolError& e) {
    std::cerr << "hemacd: protocol error: " << e.what() << "\n";
    return kExitProtocol;
  } catch (const std::exception& e) {
    std::cerr << "hemacd: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
