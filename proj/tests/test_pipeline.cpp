// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hemacd/errors.hpp"
#include "hemacd/pipeline.hpp"
#include "hemacd/trader.hpp"
#include "test_support.hpp"

namespace hemacd {
namespace {

namespace fs = std::filesystem;
using testing_support::fixture;
using testing_support::fixture_path;
using testing_support::small_params;

RunConfig config(Engine e) {
  RunConfig c;
  c.input = fixture_path();
  c.engine = e;
  c.params = small_params(10);
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hemacd_test_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(Pipeline, OracleLengths) {
  const LocalRun r = run_local(config(Engine::kOracle));
  EXPECT_EQ(r.plain.m.size(), 165u);
  EXPECT_EQ(r.o2hat_plain.size(), 165u);
  EXPECT_EQ(r.order_log.rows.size(), 200u);
  EXPECT_GT(r.tau, 0.0);
  for (const auto& e : r.report.errors) EXPECT_EQ(e.mape.signed_form, 0.0) << e.stage;
}

TEST(Pipeline, ExactSimIsBitExact) {
  const LocalRun r = run_local(config(Engine::kExactSim));
  EXPECT_EQ(r.alpha_dec, r.plain.alpha.values);
  EXPECT_EQ(r.beta_dec, r.plain.beta.values);
  EXPECT_EQ(r.m_dec, r.plain.m.values);
  EXPECT_EQ(r.o2hat_dec, r.o2hat_plain);
  ASSERT_EQ(r.report.errors.size(), 3u);
  for (const auto& e : r.report.errors) {
    EXPECT_EQ(e.mape.signed_form, 0.0) << e.stage;
    EXPECT_EQ(e.mape.normalized, 0.0) << e.stage;
  }
  EXPECT_EQ(r.report.errors[0].mape.used, (200u - 12) + (200u - 26));
  EXPECT_EQ(r.depth, 8);
}

TEST(Pipeline, OrderLogLayout) {
  RunConfig c = config(Engine::kOracle);
  c.tau = 1e-4;
  const LocalRun r = run_local(c);
  const std::size_t warm = warmup_quotes(c.windows);
  for (const auto& row : r.order_log.rows) {
    EXPECT_EQ(row.warm_up, row.tick + 1 < warm);
    ASSERT_EQ(row.votes.size(), 1u);
    if (row.warm_up) {
      EXPECT_EQ(row.votes[0], Vote::kWarmUp);
      EXPECT_EQ(row.final_order, 0);
    } else {
      const std::size_t i = row.tick - 35;
      EXPECT_EQ(row.final_order, threshold_order(r.o2hat_plain[i], 1e-4));
      EXPECT_EQ(row.date, fixture().dates[row.tick]);
    }
  }
}

TEST(Pipeline, HeFidelityAtSmallRing) {
  RunConfig c = config(Engine::kHe);
  c.params = small_params(10, 1024);
  const LocalRun r = run_local(c);
  EXPECT_LE(std::abs(r.report.find_error("WMA")->mape.signed_form), 0.05);
  EXPECT_LE(std::abs(r.report.find_error("MACD")->mape.signed_form), 0.5);
  EXPECT_LE(std::abs(r.report.find_error("Decision")->mape.signed_form), 5.0);
  for (std::size_t i = 0; i < r.o2hat_dec.size(); ++i) {
    EXPECT_NEAR(r.o2hat_dec[i], r.o2hat_plain[i], 1e-2);
  }
  EXPECT_EQ(r.depth, 8);
  ASSERT_NE(r.report.find_timing("Total"), nullptr);
  EXPECT_GT(r.report.find_timing("Total")->seconds, 0.0);
}

TEST(Pipeline, OutputsAreDeterministic) {
  RunConfig c = config(Engine::kExactSim);
  const auto a = scratch("a"), b = scratch("b");
  write_outputs(run_local(c), a.string());
  write_outputs(run_local(c), b.string());
  for (const char* name : {"signals.csv", "wma_fast.csv", "wma_slow.csv", "decisions.csv",
                           "orders.csv", "errors.csv", "depth_trace.csv"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  EXPECT_TRUE(fs::exists(a / "timings.csv"));
  EXPECT_TRUE(fs::exists(a / "report.txt"));
  const std::string dec = slurp(a / "decisions.csv");
  EXPECT_EQ(dec.substr(0, dec.find('\n')), "index,date,o1,o2,o2hat_plain,o2hat_decrypted,order");
  const std::string sig = slurp(a / "signals.csv");
  EXPECT_EQ(sig.substr(0, sig.find('\n')), "index,date,value_plain,value_decrypted");
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Pipeline, RejectsShortSeriesAndBadConfig) {
  PriceSeries p;
  p.dates.assign(fixture().dates.begin(), fixture().dates.begin() + 44);
  p.closes.assign(fixture().closes.begin(), fixture().closes.begin() + 44);
  EXPECT_THROW(run_local(config(Engine::kOracle), p), DataError);
  RunConfig c = config(Engine::kOracle);
  c.norm = -1;
  EXPECT_THROW(run_local(c), ConfigError);
}

TEST(Pipeline, FormatRealRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-7, 126.44}) {
    EXPECT_EQ(std::stod(format_real(v)), v);
  }
}

}  // namespace
}  // namespace hemacd
