// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Weighted moving average and MACD over plain reals or cipher handles.
//
// Length convention: a WMA of window n over c emits c.size() - n values,
// a[i] = sum_{j<n} c[i+j] * w[j]. The newest input never contributes. The
// plain and cipher paths share this convention and their summation order,
// so the exact-simulation engine reproduces the plain values bit-for-bit.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hemacd/backend.hpp"

namespace hemacd {

template <class T>
struct SignalSeries {
  std::vector<T> values;
  // Source tick of the newest price feeding values[0]; values[i] belongs
  // to tick offset + i.
  std::size_t offset = 0;

  std::size_t size() const { return values.size(); }
};

using PlainSeries = SignalSeries<double>;
using CipherSeries = SignalSeries<CipherHandle>;

struct Windows {
  int fast = 12;
  int slow = 26;
  int signal = 9;

  void validate() const;
  // Shortest price series with a non-empty MACD.
  std::size_t min_prices() const { return static_cast<std::size_t>(slow + signal) + 1; }
  // MACD index i uses prices up to tick i + macd_lag().
  std::size_t macd_lag() const { return static_cast<std::size_t>(slow + signal - 1); }
};

// w[i] = 2(i+1) / (n(n+1)).
std::vector<double> wma_weights(int n);

// Single outputs, used by both the batch and the streaming paths.
double wma_window(std::span<const double> window, std::span<const double> weights);
// Weights for inputs at `level`, encoded at scale q_level so that the
// rescaled output keeps the input's scale.
std::vector<PlainHandle> encode_wma_weights(const Evaluator& ev, int n, int level);
CipherHandle wma_window(Evaluator& ev, std::span<const CipherHandle> window,
                        std::span<const PlainHandle> weights);
// theta = alpha - beta; m = theta - gamma after level alignment.
CipherHandle macd_line(Evaluator& ev, const CipherHandle& alpha, const CipherHandle& beta);
CipherHandle macd_histogram(Evaluator& ev, const CipherHandle& theta, const CipherHandle& gamma);

PlainSeries wma(const PlainSeries& c, int n);
CipherSeries wma(Evaluator& ev, const CipherSeries& c, int n);

template <class T>
struct MacdResult {
  SignalSeries<T> alpha;
  SignalSeries<T> beta;
  SignalSeries<T> theta;
  SignalSeries<T> gamma;
  SignalSeries<T> m;
};

MacdResult<double> macd(const PlainSeries& d, const Windows& windows = {});
MacdResult<CipherHandle> macd(Evaluator& ev, const CipherSeries& d, const Windows& windows = {});

}  // namespace hemacd
