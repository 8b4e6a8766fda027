// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Crossing decisions on a MACD histogram m:
//   delta[i] = m[i-1] - m[i],  pi[i] = m[i-1] * m[i],  both 0 at i = 0
//   o1[i]    = 1/2 * sign(delta) * (sign(pi) - 1)
//   o2[i]    = -sign(delta * relu(-pi))
//   o2hat[i] = -delta * rhat(-pi)         (rhat: degree-9 ReLU fit)

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hemacd/backend.hpp"

namespace hemacd {

struct ReluPoly {
  // c0..c9, lowest degree first.
  std::array<double, 10> coeffs = {0.0753,  0.4475, 0.5173, 0.0882, -0.0984,
                                   -0.0253, 0.009,  0.0025, -0.0003, -0.0001};
  // Fit is trusted on [-interval, interval] with max |rhat - relu| <= bound.
  double interval = 2.5;
  double bound = 0.17038;
};

double relu(double x);
// Horner form; reference for the fit itself.
double relu_approx(double x, const ReluPoly& poly = {});
// Same polynomial in the association order of the encrypted circuit.
double relu_approx_circuit(double x, const ReluPoly& poly = {});
// Consumes 4 levels; the result sits at x.level - 4 with the evaluator's
// default scale.
CipherHandle relu_approx(Evaluator& ev, const CipherHandle& x, const ReluPoly& poly = {});

std::vector<double> adjacent_delta(std::span<const double> m);
std::vector<double> adjacent_pi(std::span<const double> m);

// A product of exactly 0 (m touching zero) gives 1/2 * sign(delta) * -1;
// that half-order truncates to hold.
std::vector<int> o1(std::span<const double> m);
std::vector<int> o2(std::span<const double> m);

double o2_hat_tick(double m_prev, double m_cur, const ReluPoly& poly = {});
// Entry 0 is 0 by the delta/pi convention.
std::vector<double> o2_hat(std::span<const double> m, const ReluPoly& poly = {});

// 4 + 2 levels below the inputs' level.
CipherHandle o2_hat_tick(Evaluator& ev, const CipherHandle& m_prev, const CipherHandle& m_cur,
                         const ReluPoly& poly = {});
// Values for indices 1..m.size()-1 (index 0 has no predecessor).
std::vector<CipherHandle> o2_hat(Evaluator& ev, std::span<const CipherHandle> m,
                                 const ReluPoly& poly = {});

// +1 above tau, -1 below -tau, else 0. tau must be > 0.
std::vector<int> threshold_orders(std::span<const double> values, double tau);
int threshold_order(double value, double tau);
// Twice the largest |o2hat| over ticks where o1 holds.
double calibrate_tau(std::span<const double> o2hat, std::span<const int> o1_orders);
// Ticks whose -pi falls outside the fit interval.
std::size_t interval_violations(std::span<const double> m, const ReluPoly& poly = {});

}  // namespace hemacd
