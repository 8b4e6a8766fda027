// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/indicators.hpp"

#include <string>

#include "hemacd/errors.hpp"

namespace hemacd {

void Windows::validate() const {
  if (fast < 1 || slow < 1 || signal < 1) throw ConfigError("window sizes must be positive");
  if (fast >= slow) throw ConfigError("fast window must be shorter than slow window");
}

std::vector<double> wma_weights(int n) {
  if (n < 1) throw ParameterError("WMA window must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(n));
  const double denom = static_cast<double>(n) * (n + 1);
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = 2.0 * (i + 1) / denom;
  return w;
}

double wma_window(std::span<const double> window, std::span<const double> weights) {
  if (window.size() != weights.size() || window.empty()) {
    throw ParameterError("WMA window and weight counts differ");
  }
  double acc = window[0] * weights[0];
  for (std::size_t j = 1; j < window.size(); ++j) acc = acc + window[j] * weights[j];
  return acc;
}

std::vector<PlainHandle> encode_wma_weights(const Evaluator& ev, int n, int level) {
  const auto w = wma_weights(n);
  const double scale = static_cast<double>(ev.prime_at(level));
  std::vector<PlainHandle> out;
  out.reserve(w.size());
  for (double v : w) out.push_back(ev.b_encode(v, level, scale));
  return out;
}

CipherHandle wma_window(Evaluator& ev, std::span<const CipherHandle> window,
                        std::span<const PlainHandle> weights) {
  if (window.size() != weights.size() || window.empty()) {
    throw ParameterError("WMA window and weight counts differ");
  }
  CipherHandle acc = ev.b_mul_plain(window[0], weights[0]);
  for (std::size_t j = 1; j < window.size(); ++j) {
    acc = ev.b_add(acc, ev.b_mul_plain(window[j], weights[j]));
  }
  return ev.b_rescale(acc);
}

CipherHandle macd_line(Evaluator& ev, const CipherHandle& alpha, const CipherHandle& beta) {
  const CipherHandle pair[] = {alpha, beta};
  const auto al = ev.b_align(pair);
  return ev.b_sub(al[0], al[1]);
}

CipherHandle macd_histogram(Evaluator& ev, const CipherHandle& theta, const CipherHandle& gamma) {
  const CipherHandle pair[] = {theta, gamma};
  const auto al = ev.b_align(pair);
  return ev.b_sub(al[0], al[1]);
}

namespace {

void check_length(std::size_t size, int n) {
  if (size <= static_cast<std::size_t>(n)) {
    throw DataError("series of length " + std::to_string(size) + " too short for window " +
                    std::to_string(n));
  }
}

}  // namespace

PlainSeries wma(const PlainSeries& c, int n) {
  const auto w = wma_weights(n);
  check_length(c.size(), n);
  PlainSeries out;
  out.offset = c.offset + static_cast<std::size_t>(n) - 1;
  const std::size_t count = c.size() - static_cast<std::size_t>(n);
  out.values.reserve(count);
  const std::span<const double> all(c.values);
  for (std::size_t i = 0; i < count; ++i) out.values.push_back(wma_window(all.subspan(i, w.size()), w));
  return out;
}

CipherSeries wma(Evaluator& ev, const CipherSeries& c, int n) {
  if (n < 1) throw ParameterError("WMA window must be >= 1");
  check_length(c.size(), n);
  const int level = c.values.front().level;
  const auto w = encode_wma_weights(ev, n, level);
  CipherSeries out;
  out.offset = c.offset + static_cast<std::size_t>(n) - 1;
  const std::size_t count = c.size() - static_cast<std::size_t>(n);
  out.values.reserve(count);
  const std::span<const CipherHandle> all(c.values);
  for (std::size_t i = 0; i < count; ++i) {
    out.values.push_back(wma_window(ev, all.subspan(i, w.size()), w));
  }
  return out;
}

namespace {

template <class T, class Sub>
MacdResult<T> assemble(SignalSeries<T> alpha, SignalSeries<T> beta, const Windows& windows,
                       Sub&& sub_line, auto&& wma_fn, Sub&& sub_hist) {
  MacdResult<T> r;
  const std::size_t shift = static_cast<std::size_t>(windows.slow - windows.fast);
  r.theta.offset = beta.offset;
  r.theta.values.reserve(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) {
    r.theta.values.push_back(sub_line(alpha.values[shift + i], beta.values[i]));
  }
  r.gamma = wma_fn(r.theta, windows.signal);
  const std::size_t lag = static_cast<std::size_t>(windows.signal);
  r.m.offset = r.theta.offset + lag;
  r.m.values.reserve(r.gamma.size());
  for (std::size_t i = 0; i < r.gamma.size(); ++i) {
    r.m.values.push_back(sub_hist(r.theta.values[lag + i], r.gamma.values[i]));
  }
  r.alpha = std::move(alpha);
  r.beta = std::move(beta);
  return r;
}

void check_macd_input(std::size_t size, const Windows& windows) {
  windows.validate();
  if (size < windows.min_prices()) {
    throw DataError("MACD needs at least " + std::to_string(windows.min_prices()) +
                    " prices, got " + std::to_string(size));
  }
}

}  // namespace

MacdResult<double> macd(const PlainSeries& d, const Windows& windows) {
  check_macd_input(d.size(), windows);
  auto sub = [](double a, double b) { return a - b; };
  return assemble<double>(wma(d, windows.fast), wma(d, windows.slow), windows, sub,
                          [](const PlainSeries& s, int n) { return wma(s, n); }, sub);
}

MacdResult<CipherHandle> macd(Evaluator& ev, const CipherSeries& d, const Windows& windows) {
  check_macd_input(d.size(), windows);
  auto alpha = wma(ev, d, windows.fast);
  auto beta = wma(ev, d, windows.slow);
  using Fn = CipherHandle (*)(Evaluator&, const CipherHandle&, const CipherHandle&);
  auto bind = [&ev](Fn f) {
    return [&ev, f](const CipherHandle& a, const CipherHandle& b) { return f(ev, a, b); };
  };
  auto line = bind(&macd_line);
  auto hist = bind(&macd_histogram);
  return assemble<CipherHandle>(
      std::move(alpha), std::move(beta), windows, line,
      [&ev](const CipherSeries& s, int n) { return wma(ev, s, n); }, hist);
}

}  // namespace hemacd
