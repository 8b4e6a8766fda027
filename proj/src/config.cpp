// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "hemacd/errors.hpp"

namespace hemacd {

const char* to_string(Engine e) {
  switch (e) {
    case Engine::kOracle: return "oracle";
    case Engine::kExactSim: return "exact-sim";
    case Engine::kHe: return "he";
  }
  return "?";
}

const char* to_string(Role r) {
  switch (r) {
    case Role::kLocal: return "local";
    case Role::kAggregator: return "aggregator";
    case Role::kTrader: return "trader";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_int(const std::string& key, const std::string& v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

Windows parse_windows(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ConfigError("windows: expected fast,slow,signal");
  Windows w;
  w.fast = parse_int<int>("windows", parts[0]);
  w.slow = parse_int<int>("windows", parts[1]);
  w.signal = parse_int<int>("windows", parts[2]);
  w.validate();
  return w;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "input") {
    c.input = v;
  } else if (key == "engine") {
    if (v == "oracle") c.engine = Engine::kOracle;
    else if (v == "exact-sim") c.engine = Engine::kExactSim;
    else if (v == "he") c.engine = Engine::kHe;
    else throw ConfigError("engine: expected oracle, exact-sim or he, got '" + v + "'");
  } else if (key == "role") {
    if (v == "local") c.role = Role::kLocal;
    else if (v == "aggregator") c.role = Role::kAggregator;
    else if (v == "trader") c.role = Role::kTrader;
    else throw ConfigError("role: expected local, aggregator or trader, got '" + v + "'");
  } else if (key == "addr") {
    c.addr = v;
  } else if (key == "windows") {
    c.windows = parse_windows(v);
  } else if (key == "norm") {
    c.norm = parse_real(key, v);
  } else if (key == "tau") {
    if (v == "auto") c.tau.reset();
    else c.tau = parse_real(key, v);
  } else if (key == "out") {
    c.out = v;
  } else if (key == "seed") {
    c.seed = parse_int<std::uint64_t>(key, v);
  } else if (key == "traders") {
    c.traders = parse_int<std::size_t>(key, v);
  } else if (key == "sim_noise") {
    c.sim_noise = parse_real(key, v);
  } else if (key == "tick_timeout_ms") {
    c.tick_timeout = std::chrono::milliseconds(parse_int<std::int64_t>(key, v));
  } else if (key == "accept_timeout_ms") {
    c.accept_timeout = std::chrono::milliseconds(parse_int<std::int64_t>(key, v));
  } else if (key == "ring_degree") {
    c.params.ring_degree = parse_int<std::size_t>(key, v);
  } else if (key == "chain_bits") {
    std::vector<int> bits;
    for (const auto& p : split(v, ',')) bits.push_back(parse_int<int>(key, p));
    c.params.chain_bits = bits;
    c.params.primes.clear();
  } else if (key == "scale_bits") {
    c.params.scale = std::ldexp(1.0, parse_int<int>(key, v));
  } else if (key == "sigma") {
    c.params.sigma = parse_real(key, v);
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

void apply_settings_file(RunConfig& c, std::istream& in) {
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("params file line " + std::to_string(n) + ": expected key = value");
    }
    try {
      apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("params file line " + std::to_string(n) + ": " + e.what());
    }
  }
}

void apply_settings_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open params file '" + path + "'");
  apply_settings_file(c, in);
}

void RunConfig::validate() const {
  windows.validate();
  if (!(norm > 0.0)) throw ConfigError("norm must be > 0");
  if (tau && !(*tau > 0.0)) throw ConfigError("tau must be > 0");
  if (traders == 0) throw ConfigError("traders must be >= 1");
  if (sim_noise < 0.0) throw ConfigError("sim_noise must be >= 0");
  if (tick_timeout.count() <= 0 || accept_timeout.count() <= 0) {
    throw ConfigError("timeouts must be positive");
  }
  if (engine != Engine::kOracle || role != Role::kLocal) {
    try {
      params.validate();
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("scheme parameters: ") + e.what());
    }
  }
}

}  // namespace hemacd
