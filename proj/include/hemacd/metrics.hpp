// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hemacd {

struct MapeResult {
  // 100 * sum |x - y| / y with the signed denominator and no 1/N.
  double signed_form = 0.0;
  // 100/N_used * sum |x - y| / |y|.
  double normalized = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  // |y| < epsilon
  double epsilon = 0.0;
};

// x is the measured series, y the reference. Terms with |y| < epsilon are
// skipped and counted; epsilon defaults to 1e-8 * max |y|.
MapeResult mape(std::span<const double> x, std::span<const double> y,
                std::optional<double> epsilon = std::nullopt);

// Wall-clock seconds spent in `fn`.
template <class Fn>
double time_stage(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  return dt.count();
}

struct ErrorRow {
  std::string stage;  // WMA, MACD, Decision
  MapeResult mape;
};

struct TimingRow {
  std::string stage;
  double seconds = 0.0;
  std::size_t quotes = 0;
  double per_quote() const { return quotes == 0 ? 0.0 : seconds / static_cast<double>(quotes); }
};

struct ErrorReport {
  std::string engine;
  std::vector<ErrorRow> errors;
  std::vector<TimingRow> timings;
  std::vector<std::pair<std::string, std::string>> params;

  const ErrorRow* find_error(const std::string& stage) const;
  const TimingRow* find_timing(const std::string& stage) const;
  // errors.csv: stage,mape_signed_form,mape_normalized,used,excluded,epsilon
  std::string errors_csv() const;
  // timings.csv: stage,seconds,quotes,seconds_per_quote
  std::string timings_csv() const;
  std::string to_text() const;
};

}  // namespace hemacd
