// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures for the unit tests.

#pragma once

#include <string>

#include "hemacd/prices.hpp"
#include "hemacd/scheme.hpp"

namespace hemacd::testing_support {

// Small ring with the default 60/40.../60 shape. Insecure; tests only.
inline SchemeParams small_params(int rescale_primes = 10, std::size_t degree = 2048) {
  SchemeParams p;
  p.ring_degree = degree;
  p.chain_bits = {60};
  for (int i = 0; i < rescale_primes; ++i) p.chain_bits.push_back(40);
  p.chain_bits.push_back(60);
  return p;
}

inline std::string fixture_path() { return std::string(HEMACD_DATA_DIR) + "/aapl_2015.csv"; }

inline const PriceSeries& fixture() {
  static const PriceSeries prices = load_prices(fixture_path(), "AAPL");
  return prices;
}

}  // namespace hemacd::testing_support
