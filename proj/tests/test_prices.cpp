// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "hemacd/errors.hpp"
#include "hemacd/prices.hpp"
#include "test_support.hpp"

namespace hemacd {
namespace {

PriceSeries parse(const std::string& text) {
  std::istringstream in(text);
  return parse_prices(in, "T");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(Prices, FixtureLoads) {
  const auto& p = testing_support::fixture();
  EXPECT_EQ(p.size(), 200u);
  EXPECT_EQ(p.dates.front(), "2015-01-06");
  EXPECT_EQ(p.ticker, "AAPL");
  for (double c : p.closes) EXPECT_GT(c, 0.0);
}

TEST(Prices, ParsesValidFile) {
  const auto p = parse("date,close\n2015-01-02,109.33\n2015-01-05,106.25\n");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p.dates[1], "2015-01-05");
  EXPECT_DOUBLE_EQ(p.closes[0], 109.33);
}

TEST(Prices, EmptyFileIsError) {
  EXPECT_NE(error_of("").find("empty"), std::string::npos);
}

TEST(Prices, NegativePriceNamesLine) {
  const auto msg = error_of("date,close\n2015-01-02,1.0\n2015-01-05,-3\n");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Prices, RejectsMalformedRows) {
  EXPECT_NE(error_of("date,price\n2015-01-02,1\n"), "");
  EXPECT_NE(error_of("date,close\n2015-01-02\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("date,close\n2015-13-02,1\n"), "");
  EXPECT_NE(error_of("date,close\n2015-02-30,1\n"), "");
  EXPECT_NE(error_of("date,close\n2015-01-02,abc\n"), "");
  EXPECT_NE(error_of("date,close\n2015-01-02,0\n"), "");
  EXPECT_NE(error_of("date,close\n2015-01-02,nan\n"), "");
}

TEST(Prices, DatesMustIncrease) {
  EXPECT_NE(error_of("date,close\n2015-01-05,1\n2015-01-02,1\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("date,close\n2015-01-05,1\n2015-01-05,1\n"), "");
}

TEST(Prices, MissingFileIsError) {
  EXPECT_THROW(load_prices("/nonexistent/prices.csv"), DataError);
}

}  // namespace
}  // namespace hemacd
