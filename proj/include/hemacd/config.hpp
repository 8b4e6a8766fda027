// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Run configuration. Settings come from three layers, highest first:
// command-line flags, a flat `key = value` file, built-in defaults. Both
// upper layers go through apply_setting so they validate identically.

#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "hemacd/indicators.hpp"
#include "hemacd/scheme.hpp"

namespace hemacd {

enum class Engine : std::uint8_t { kOracle, kExactSim, kHe };
enum class Role : std::uint8_t { kLocal, kAggregator, kTrader };

const char* to_string(Engine e);
const char* to_string(Role r);

struct RunConfig {
  std::string input = "data/aapl_2015.csv";
  Engine engine = Engine::kHe;
  Role role = Role::kLocal;
  std::string addr = "127.0.0.1:7311";
  SchemeParams params;
  Windows windows;
  double norm = 100.0;
  std::optional<double> tau;  // calibrated from the oracle when unset
  std::string out = "out";
  std::uint64_t seed = 1;
  std::size_t traders = 1;
  double sim_noise = 0.0;
  std::chrono::milliseconds tick_timeout{30000};
  std::chrono::milliseconds accept_timeout{60000};

  // Throws ConfigError naming the offending setting.
  void validate() const;
};

// Recognised keys: input, engine, role, addr, windows, norm, tau, out,
// seed, traders, sim_noise, tick_timeout_ms, accept_timeout_ms,
// ring_degree, chain_bits, scale_bits, sigma.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

// `key = value` lines; '#' starts a comment; blank lines ignored.
void apply_settings_file(RunConfig& config, std::istream& in);
void apply_settings_file(RunConfig& config, const std::string& path);

Windows parse_windows(const std::string& text);

}  // namespace hemacd
