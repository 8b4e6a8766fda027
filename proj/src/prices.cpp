// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/prices.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string_view>

#include "hemacd/errors.hpp"

namespace hemacd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

bool valid_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  int y = 0;
  unsigned m = 0, d = 0;
  auto parse = [&](std::size_t pos, std::size_t len, auto& out) {
    const char* b = s.data() + pos;
    auto [p, ec] = std::from_chars(b, b + len, out);
    return ec == std::errc() && p == b + len;
  };
  if (!parse(0, 4, y) || !parse(5, 2, m) || !parse(8, 2, d)) return false;
  return std::chrono::year_month_day(std::chrono::year(y), std::chrono::month(m),
                                     std::chrono::day(d))
      .ok();
}

}  // namespace

PriceSeries parse_prices(std::istream& in, const std::string& ticker) {
  PriceSeries out;
  out.ticker = ticker;
  std::string raw;
  std::size_t line = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view row = trim(raw);
    if (row.empty()) continue;
    if (!header) {
      if (row != "date,close") fail(line, "expected header 'date,close'");
      header = true;
      continue;
    }
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      fail(line, "expected two fields");
    }
    const std::string_view date = trim(row.substr(0, comma));
    const std::string_view close = trim(row.substr(comma + 1));
    if (!valid_iso_date(date)) fail(line, "invalid ISO date '" + std::string(date) + "'");
    double value = 0.0;
    auto [p, ec] = std::from_chars(close.data(), close.data() + close.size(), value);
    if (ec != std::errc() || p != close.data() + close.size() || !std::isfinite(value)) {
      fail(line, "invalid price '" + std::string(close) + "'");
    }
    if (!(value > 0.0)) fail(line, "price must be positive");
    if (!out.dates.empty() && !(out.dates.back() < date)) {
      fail(line, "dates must be strictly increasing");
    }
    out.dates.emplace_back(date);
    out.closes.push_back(value);
  }
  if (!header) throw DataError("price file is empty");
  if (out.closes.empty()) throw DataError("price file has no rows");
  return out;
}

PriceSeries load_prices(const std::string& path, const std::string& ticker) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open price file '" + path + "'");
  const std::string label =
      ticker.empty() ? std::filesystem::path(path).stem().string() : ticker;
  return parse_prices(in, label);
}

}  // namespace hemacd
