// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/ring.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "hemacd/errors.hpp"

namespace hemacd {

namespace {

std::size_t bit_reverse(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

void require_same_ring(const RingElement& a, const RingElement& b) {
  if (!a.context() || !b.context() || !(a.params() == b.params())) {
    throw ParameterError("ring elements belong to different rings");
  }
  if (a.domain() != b.domain()) throw ParameterError("ring elements are in different domains");
}

// Smallest primitive 2N-th root of unity mod q, or 0 if none exists.
std::uint64_t find_primitive_root(const Modulus& q, std::size_t degree) {
  const std::uint64_t order = 2 * static_cast<std::uint64_t>(degree);
  if ((q.value() - 1) % order != 0) return 0;
  const std::uint64_t cofactor = (q.value() - 1) / order;
  for (std::uint64_t x = 2; x < q.value() && x < 100000; ++x) {
    const std::uint64_t g = q.pow(x, cofactor);
    // g has order dividing 2N; it is primitive iff g^N = -1.
    if (q.pow(g, degree) == q.value() - 1) return g;
  }
  return 0;
}

}  // namespace

RingContext::RingContext(const RingParams& params) : params_(params) {
  const std::size_t n = params.degree;
  if (n < 1 || !std::has_single_bit(n)) throw ParameterError("ring degree must be a power of two");
  if (params.modulus < 2) throw ParameterError("ring modulus must be at least 2");
  modulus_ = Modulus(params.modulus);
  if (params.modulus % 2 == 0 || !is_prime(params.modulus)) return;
  root_ = find_primitive_root(modulus_, n);
  if (root_ == 0) return;

  const int log_n = std::countr_zero(n);
  const std::uint64_t root_inv = modulus_.inv(root_);
  psi_br_.resize(n);
  psi_inv_br_.resize(n);
  std::uint64_t power = 1;
  std::uint64_t power_inv = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = bit_reverse(i, log_n);
    psi_br_[j] = ShoupConst(power, modulus_);
    psi_inv_br_[j] = ShoupConst(power_inv, modulus_);
    power = modulus_.mul(power, root_);
    power_inv = modulus_.mul(power_inv, root_inv);
  }
  degree_inv_ = ShoupConst(modulus_.inv(n % params.modulus), modulus_);
}

std::shared_ptr<const RingContext> RingContext::create(const RingParams& params) {
  return std::make_shared<const RingContext>(params);
}

void RingContext::forward(std::span<std::uint64_t> a) const {
  if (!has_ntt()) {
    throw ParameterError("no primitive 2N-th root of unity for N=" + std::to_string(degree()) +
                         ", q=" + std::to_string(params_.modulus));
  }
  const std::uint64_t q = params_.modulus;
  const std::uint64_t two_q = 2 * q;
  const std::size_t n = degree();
  // Cooley-Tukey butterflies with lazy reduction: values stay below 4q.
  std::size_t t = n;
  for (std::size_t m = 1; m < n; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const ShoupConst& w = psi_br_[m + i];
      std::uint64_t* x = a.data() + j1;
      std::uint64_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        std::uint64_t u = x[j];
        if (u >= two_q) u -= two_q;
        const std::uint64_t est = mul_hi(w.quotient, y[j]);
        const std::uint64_t v = w.value * y[j] - est * q;  // in [0, 2q)
        x[j] = u + v;
        y[j] = u + two_q - v;
      }
    }
  }
  for (auto& v : a) {
    if (v >= two_q) v -= two_q;
    if (v >= q) v -= q;
  }
}

void RingContext::inverse(std::span<std::uint64_t> a) const {
  if (!has_ntt()) {
    throw ParameterError("no primitive 2N-th root of unity for N=" + std::to_string(degree()) +
                         ", q=" + std::to_string(params_.modulus));
  }
  const std::uint64_t q = params_.modulus;
  const std::uint64_t two_q = 2 * q;
  const std::size_t n = degree();
  // Gentleman-Sande butterflies; inputs below 2q, outputs kept below 2q.
  std::size_t t = 1;
  for (std::size_t m = n; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const ShoupConst& w = psi_inv_br_[h + i];
      std::uint64_t* x = a.data() + j1;
      std::uint64_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        const std::uint64_t u = x[j];
        const std::uint64_t v = y[j];
        std::uint64_t s = u + v;
        if (s >= two_q) s -= two_q;
        const std::uint64_t d = u + two_q - v;
        x[j] = s;
        const std::uint64_t est = mul_hi(w.quotient, d);
        y[j] = w.value * d - est * q;
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& v : a) {
    v = degree_inv_.mul(v, q);
  }
}

RingElement::RingElement(RingContextPtr ctx, Domain domain)
    : ctx_(std::move(ctx)), domain_(domain) {
  if (!ctx_) throw ParameterError("ring element requires a context");
  coeffs_.assign(ctx_->degree(), 0);
}

RingElement::RingElement(RingContextPtr ctx, std::vector<std::uint64_t> coeffs, Domain domain)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)), domain_(domain) {
  if (!ctx_) throw ParameterError("ring element requires a context");
  if (coeffs_.size() != ctx_->degree()) {
    throw ParameterError("ring element must have exactly N coefficients");
  }
  const std::uint64_t q = ctx_->params().modulus;
  if (std::any_of(coeffs_.begin(), coeffs_.end(), [q](std::uint64_t c) { return c >= q; })) {
    throw ParameterError("ring element coefficient not reduced mod q");
  }
}

RingElement RingElement::from_signed(RingContextPtr ctx, std::span<const std::int64_t> coeffs) {
  RingElement out(ctx);
  if (coeffs.size() != out.degree()) throw ParameterError("expected exactly N coefficients");
  const Modulus& q = ctx->modulus();
  for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs_[i] = q.from_signed(coeffs[i]);
  return out;
}

bool RingElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](std::uint64_t c) { return c == 0; });
}

RingElement& RingElement::operator+=(const RingElement& other) {
  require_same_ring(*this, other);
  const Modulus& q = modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = q.add(coeffs_[i], other.coeffs_[i]);
  return *this;
}

RingElement& RingElement::operator-=(const RingElement& other) {
  require_same_ring(*this, other);
  const Modulus& q = modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = q.sub(coeffs_[i], other.coeffs_[i]);
  return *this;
}

RingElement& RingElement::mul_pointwise(const RingElement& other) {
  require_same_ring(*this, other);
  const Modulus& q = modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = q.mul(coeffs_[i], other.coeffs_[i]);
  return *this;
}

RingElement& RingElement::negate() {
  const Modulus& q = modulus();
  for (auto& c : coeffs_) c = q.neg(c);
  return *this;
}

RingElement& RingElement::mul_scalar(std::uint64_t scalar) {
  const Modulus& q = modulus();
  const ShoupConst s(q.reduce(scalar), q);
  for (auto& c : coeffs_) c = s.mul(c, q.value());
  return *this;
}

void RingElement::to_evaluation() {
  if (domain_ == Domain::kEvaluation) return;
  ctx_->forward(coeffs_);
  domain_ = Domain::kEvaluation;
}

void RingElement::to_coefficient() {
  if (domain_ == Domain::kCoefficient) return;
  ctx_->inverse(coeffs_);
  domain_ = Domain::kCoefficient;
}

bool operator==(const RingElement& a, const RingElement& b) {
  if (!a.ctx_ || !b.ctx_) return a.ctx_ == b.ctx_;
  return a.params() == b.params() && a.domain_ == b.domain_ && a.coeffs_ == b.coeffs_;
}

RingElement ntt_forward(const RingElement& a) {
  if (a.domain() != Domain::kCoefficient) {
    throw ParameterError("ntt_forward expects a coefficient-domain element");
  }
  RingElement out = a;
  out.to_evaluation();
  return out;
}

RingElement ntt_inverse(const RingElement& a) {
  if (a.domain() != Domain::kEvaluation) {
    throw ParameterError("ntt_inverse expects an evaluation-domain element");
  }
  RingElement out = a;
  out.to_coefficient();
  return out;
}

RingElement ring_add(const RingElement& a, const RingElement& b) {
  RingElement out = a;
  out += b;
  return out;
}

RingElement ring_sub(const RingElement& a, const RingElement& b) {
  RingElement out = a;
  out -= b;
  return out;
}

RingElement ring_neg(const RingElement& a) {
  RingElement out = a;
  out.negate();
  return out;
}

RingElement ring_mul(const RingElement& a, const RingElement& b) {
  require_same_ring(a, b);
  if (a.domain() == Domain::kEvaluation) {
    RingElement out = a;
    out.mul_pointwise(b);
    return out;
  }
  const auto& ctx = a.context();
  if (ctx->has_ntt()) {
    RingElement fa = ntt_forward(a);
    fa.mul_pointwise(ntt_forward(b));
    fa.to_coefficient();
    return fa;
  }
  // Schoolbook negacyclic convolution for moduli without an NTT.
  const Modulus& q = ctx->modulus();
  const std::size_t n = a.degree();
  std::vector<std::uint64_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t p = q.mul(a[i], b[j]);
      const std::size_t k = i + j;
      if (k < n) {
        out[k] = q.add(out[k], p);
      } else {
        out[k - n] = q.sub(out[k - n], p);
      }
    }
  }
  return RingElement(ctx, std::move(out));
}

std::vector<std::int64_t> sample_ternary_coeffs(std::size_t degree, Prng& prng) {
  std::vector<std::int64_t> out(degree);
  std::uint8_t buf[64];
  std::size_t pos = sizeof(buf);
  for (std::size_t i = 0; i < degree;) {
    if (pos == sizeof(buf)) {
      prng.fill(buf);
      pos = 0;
    }
    const std::uint8_t b = buf[pos++];
    if (b >= 255) continue;  // 255 = 3 * 85 keeps the draw unbiased
    out[i++] = static_cast<std::int64_t>(b % 3) - 1;
  }
  return out;
}

std::vector<std::int64_t> sample_gaussian_coeffs(std::size_t degree, Prng& prng, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("gaussian sigma must be positive");
  std::vector<std::int64_t> out(degree);
  for (std::size_t i = 0; i < degree; i += 2) {
    // Box-Muller; 1 - u keeps the logarithm argument in (0, 1].
    const double u1 = 1.0 - prng.next_double();
    const double u2 = prng.next_double();
    const double r = sigma * std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    out[i] = std::llround(r * std::cos(theta));
    if (i + 1 < degree) out[i + 1] = std::llround(r * std::sin(theta));
  }
  return out;
}

RingElement sample_ternary(RingContextPtr ctx, Prng& prng) {
  const auto coeffs = sample_ternary_coeffs(ctx->degree(), prng);
  return RingElement::from_signed(std::move(ctx), coeffs);
}

RingElement sample_gaussian(RingContextPtr ctx, Prng& prng, double sigma) {
  const auto coeffs = sample_gaussian_coeffs(ctx->degree(), prng, sigma);
  return RingElement::from_signed(std::move(ctx), coeffs);
}

RingElement sample_uniform(RingContextPtr ctx, Prng& prng, Domain domain) {
  std::vector<std::uint64_t> coeffs(ctx->degree());
  const std::uint64_t q = ctx->params().modulus;
  for (auto& c : coeffs) c = prng.uniform(q);
  return RingElement(std::move(ctx), std::move(coeffs), domain);
}

}  // namespace hemacd
