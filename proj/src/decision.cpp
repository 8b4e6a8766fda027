// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/decision.hpp"

#include <cmath>

#include "hemacd/errors.hpp"

namespace hemacd {

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double relu(double x) { return x > 0.0 ? x : 0.0; }

double relu_approx(double x, const ReluPoly& poly) {
  double acc = poly.coeffs[9];
  for (int k = 8; k >= 0; --k) acc = acc * x + poly.coeffs[static_cast<std::size_t>(k)];
  return acc;
}

double relu_approx_circuit(double x, const ReluPoly& poly) {
  const auto& c = poly.coeffs;
  const double x2 = x * x;
  const double x4 = x2 * x2;
  const double x8 = x4 * x4;
  const double x3 = x2 * x;
  double acc = (x * c[9]) * x8;
  acc = acc + (x4 * c[8]) * x4;
  acc = acc + (x3 * c[7]) * x4;
  acc = acc + (x2 * c[6]) * x4;
  acc = acc + (x * c[5]) * x4;
  acc = acc + x4 * c[4];
  acc = acc + (x * c[3]) * x2;
  acc = acc + x2 * c[2];
  acc = acc + x * c[1];
  return acc + c[0];
}

namespace {

// h * c, landing at level h.level - 1 with scale `target` after rescale.
CipherHandle mul_const(Evaluator& ev, const CipherHandle& h, double c, double target) {
  const double pt_scale = target * static_cast<double>(ev.prime_at(h.level)) / h.scale;
  return ev.b_rescale(ev.b_mul_plain(h, ev.b_encode(c, h.level, pt_scale)));
}

CipherHandle square(Evaluator& ev, const CipherHandle& h) {
  return ev.b_rescale(ev.b_mul(h, h));
}

CipherHandle product(Evaluator& ev, const CipherHandle& a, const CipherHandle& b) {
  const int level = std::min(a.level, b.level);
  return ev.b_rescale(ev.b_mul(ev.b_mod_switch(a, level), ev.b_mod_switch(b, level)));
}

}  // namespace

CipherHandle relu_approx(Evaluator& ev, const CipherHandle& x, const ReluPoly& poly) {
  const auto& c = poly.coeffs;
  const int a = x.level;
  if (a < 4) throw DepthError("relu_approx needs 4 levels, input is at level " + std::to_string(a));
  const double t = ev.default_scale();

  const CipherHandle x2 = square(ev, x);                              // a-1
  const CipherHandle x4 = square(ev, x2);                             // a-2
  const CipherHandle x8 = square(ev, x4);                             // a-3
  const CipherHandle x3 = product(ev, x2, ev.b_mod_switch(x, a - 1));  // a-2

  const auto x_at = [&](int level) { return ev.b_mod_switch(x, level); };
  const CipherHandle x4_low = ev.b_mod_switch(x4, a - 3);
  // Scale R such that (R-scaled factor) * y rescales to exactly t.
  const auto pre = [&](const CipherHandle& y) {
    return t * static_cast<double>(ev.prime_at(a - 3)) / y.scale;
  };

  CipherHandle acc = product(ev, mul_const(ev, x_at(a - 2), c[9], pre(x8)), x8);
  const auto add = [&](const CipherHandle& term) { acc = ev.b_add(acc, term); };
  add(product(ev, mul_const(ev, x4, c[8], pre(x4_low)), x4_low));
  add(product(ev, mul_const(ev, x3, c[7], pre(x4_low)), x4_low));
  add(product(ev, mul_const(ev, ev.b_mod_switch(x2, a - 2), c[6], pre(x4_low)), x4_low));
  add(product(ev, mul_const(ev, x_at(a - 2), c[5], pre(x4_low)), x4_low));
  add(mul_const(ev, x4_low, c[4], t));
  const CipherHandle x2_low = ev.b_mod_switch(x2, a - 3);
  add(product(ev, mul_const(ev, x_at(a - 2), c[3], pre(x2_low)), x2_low));
  add(mul_const(ev, x2_low, c[2], t));
  add(mul_const(ev, x_at(a - 3), c[1], t));
  return ev.b_add_plain(acc, ev.b_encode(c[0], acc.level, acc.scale));
}

std::vector<double> adjacent_delta(std::span<const double> m) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 1; i < m.size(); ++i) out[i] = m[i - 1] - m[i];
  return out;
}

std::vector<double> adjacent_pi(std::span<const double> m) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 1; i < m.size(); ++i) out[i] = m[i - 1] * m[i];
  return out;
}

std::vector<int> o1(std::span<const double> m) {
  const auto d = adjacent_delta(m);
  const auto p = adjacent_pi(m);
  std::vector<int> out(m.size(), 0);
  // sign(delta) * (sign(pi) - 1) is even unless pi == 0; integer division
  // truncates the odd case to 0.
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = sign(d[i]) * (sign(p[i]) - 1) / 2;
  return out;
}

std::vector<int> o2(std::span<const double> m) {
  const auto d = adjacent_delta(m);
  const auto p = adjacent_pi(m);
  std::vector<int> out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = -sign(d[i] * relu(-p[i]));
  return out;
}

double o2_hat_tick(double m_prev, double m_cur, const ReluPoly& poly) {
  const double delta = m_prev - m_cur;
  const double x = -(m_prev * m_cur);
  return -(delta * relu_approx_circuit(x, poly));
}

std::vector<double> o2_hat(std::span<const double> m, const ReluPoly& poly) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 1; i < m.size(); ++i) out[i] = o2_hat_tick(m[i - 1], m[i], poly);
  return out;
}

CipherHandle o2_hat_tick(Evaluator& ev, const CipherHandle& m_prev, const CipherHandle& m_cur,
                         const ReluPoly& poly) {
  const CipherHandle delta = ev.b_sub(m_prev, m_cur);
  const CipherHandle x = ev.b_negate(ev.b_rescale(ev.b_mul(m_prev, m_cur)));
  const CipherHandle r = relu_approx(ev, x, poly);
  const CipherHandle prod = ev.b_rescale(ev.b_mul(r, ev.b_mod_switch(delta, r.level)));
  return ev.b_negate(prod);
}

std::vector<CipherHandle> o2_hat(Evaluator& ev, std::span<const CipherHandle> m,
                                 const ReluPoly& poly) {
  std::vector<CipherHandle> out;
  for (std::size_t i = 1; i < m.size(); ++i) out.push_back(o2_hat_tick(ev, m[i - 1], m[i], poly));
  return out;
}

int threshold_order(double value, double tau) {
  if (!(tau > 0.0)) throw ParameterError("threshold tau must be > 0");
  return value > tau ? 1 : (value < -tau ? -1 : 0);
}

std::vector<int> threshold_orders(std::span<const double> values, double tau) {
  if (!(tau > 0.0)) throw ParameterError("threshold tau must be > 0");
  std::vector<int> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(threshold_order(v, tau));
  return out;
}

double calibrate_tau(std::span<const double> o2hat, std::span<const int> o1_orders) {
  if (o2hat.size() != o1_orders.size()) throw ParameterError("calibration series lengths differ");
  double peak = 0.0;
  for (std::size_t i = 0; i < o2hat.size(); ++i) {
    if (o1_orders[i] == 0) peak = std::max(peak, std::abs(o2hat[i]));
  }
  if (!(peak > 0.0)) throw ParameterError("calibration needs a non-zero hold tick");
  return 2.0 * peak;
}

std::size_t interval_violations(std::span<const double> m, const ReluPoly& poly) {
  std::size_t count = 0;
  for (double p : adjacent_pi(m)) count += std::abs(p) > poly.interval ? 1 : 0;
  return count;
}

}  // namespace hemacd
