// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "hemacd/errors.hpp"

namespace hemacd {

MapeResult mape(std::span<const double> x, std::span<const double> y,
                std::optional<double> epsilon) {
  if (x.size() != y.size()) {
    throw MetricError("MAPE series lengths differ (" + std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
  }
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw MetricError("MAPE undefined: reference series is all zero");
  MapeResult r;
  r.epsilon = epsilon.value_or(1e-8 * peak);
  if (r.epsilon < 0.0) throw MetricError("MAPE epsilon must be >= 0");
  double signed_sum = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(y[i]) < r.epsilon || y[i] == 0.0) {
      ++r.excluded;
      continue;
    }
    const double err = std::abs(x[i] - y[i]);
    signed_sum += err / y[i];
    abs_sum += err / std::abs(y[i]);
    ++r.used;
  }
  if (r.used == 0) throw MetricError("MAPE undefined: every reference term was excluded");
  r.signed_form = 100.0 * signed_sum;
  r.normalized = 100.0 * abs_sum / static_cast<double>(r.used);
  return r;
}

const ErrorRow* ErrorReport::find_error(const std::string& stage) const {
  for (const auto& e : errors) {
    if (e.stage == stage) return &e;
  }
  return nullptr;
}

const TimingRow* ErrorReport::find_timing(const std::string& stage) const {
  for (const auto& t : timings) {
    if (t.stage == stage) return &t;
  }
  return nullptr;
}

std::string ErrorReport::errors_csv() const {
  std::string out = "stage,mape_signed_form,mape_normalized,used,excluded,epsilon\n";
  char buf[256];
  for (const auto& e : errors) {
    std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g,%zu,%zu,%.3e\n", e.stage.c_str(),
                  e.mape.signed_form, e.mape.normalized, e.mape.used, e.mape.excluded,
                  e.mape.epsilon);
    out += buf;
  }
  return out;
}

std::string ErrorReport::timings_csv() const {
  std::string out = "stage,seconds,quotes,seconds_per_quote\n";
  char buf[256];
  for (const auto& t : timings) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%zu,%.6f\n", t.stage.c_str(), t.seconds, t.quotes,
                  t.per_quote());
    out += buf;
  }
  return out;
}

std::string ErrorReport::to_text() const {
  std::string out = "engine: " + engine + "\n";
  for (const auto& [k, v] : params) out += "  " + k + " = " + v + "\n";
  char buf[256];
  out += "\nErrors between ciphertext and plaintext analysis\n";
  std::snprintf(buf, sizeof buf, "  %-10s %16s %16s %6s %9s\n", "stage", "signed-form %",
                "normalized %", "used", "excluded");
  out += buf;
  for (const auto& e : errors) {
    std::snprintf(buf, sizeof buf, "  %-10s %16.6g %16.6g %6zu %9zu\n", e.stage.c_str(),
                  e.mape.signed_form, e.mape.normalized, e.mape.used, e.mape.excluded);
    out += buf;
  }
  if (!timings.empty()) {
    out += "\nPerformance of MACD and decision analysis\n";
    std::snprintf(buf, sizeof buf, "  %-10s %12s %8s %14s\n", "stage", "seconds", "quotes",
                  "sec/quote");
    out += buf;
    for (const auto& t : timings) {
      std::snprintf(buf, sizeof buf, "  %-10s %12.4f %8zu %14.6f\n", t.stage.c_str(), t.seconds,
                    t.quotes, t.per_quote());
      out += buf;
    }
  }
  return out;
}

}  // namespace hemacd
