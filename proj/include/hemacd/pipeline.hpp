// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Local end-to-end run: encrypt every quote, compute MACD and the
// approximate decision, decrypt, and compare against the plain oracle.

#pragma once

#include <string>
#include <vector>

#include "hemacd/aggregator.hpp"
#include "hemacd/backend.hpp"
#include "hemacd/config.hpp"
#include "hemacd/decision.hpp"
#include "hemacd/indicators.hpp"
#include "hemacd/metrics.hpp"
#include "hemacd/prices.hpp"

namespace hemacd {

struct LocalRun {
  Engine engine = Engine::kOracle;
  PriceSeries prices;
  std::vector<double> normalized;

  // Plain oracle.
  MacdResult<double> plain;
  std::vector<int> o1;
  std::vector<int> o2;
  std::vector<double> o2hat_plain;  // one per MACD index, entry 0 is 0
  std::size_t interval_violations = 0;
  double tau = 0.0;

  // Engine side, decrypted. For the oracle engine these are the plain
  // values themselves.
  std::vector<double> alpha_dec;
  std::vector<double> beta_dec;
  std::vector<double> m_dec;
  std::vector<double> o2hat_dec;  // entry 0 is 0
  std::vector<int> orders;        // threshold(o2hat_dec, tau)

  DepthTrace trace;
  int depth = 0;
  OrderLog order_log;
  ErrorReport report;
};

// Runs config.engine over config.input.
LocalRun run_local(const RunConfig& config);
// Same, on prices already in memory.
LocalRun run_local(const RunConfig& config, const PriceSeries& prices);

// Order log a single trader would produce: warm-up rows, then the
// thresholded decision for MACD index tick - (slow + signal).
OrderLog local_order_log(const PriceSeries& prices, const Windows& windows,
                         const std::vector<double>& o2hat, double tau);

// Writes signals.csv, wma_fast.csv, wma_slow.csv, decisions.csv,
// orders.csv, errors.csv, timings.csv, depth_trace.csv and report.txt.
void write_outputs(const LocalRun& run, const std::string& dir);

// %.17g; the textual form round-trips exactly.
std::string format_real(double v);

}  // namespace hemacd
