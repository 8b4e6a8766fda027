// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace hemacd {

struct PriceSeries {
  std::string ticker;
  std::vector<std::string> dates;  // ISO-8601, strictly increasing
  std::vector<double> closes;      // > 0

  std::size_t size() const { return closes.size(); }
};

// CSV with header `date,close`. Errors name the 1-based line number.
PriceSeries parse_prices(std::istream& in, const std::string& ticker = "");
PriceSeries load_prices(const std::string& path, const std::string& ticker = "");

}  // namespace hemacd
