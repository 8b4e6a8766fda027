// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/scheme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "hemacd/errors.hpp"
#include "hemacd/ledger.hpp"

namespace hemacd {

int SchemeParams::depth_budget() const {
  const std::size_t n = primes.empty() ? chain_bits.size() : primes.size();
  return static_cast<int>(n) - 2;
}

void SchemeParams::validate() const {
  if (ring_degree < 8 || !std::has_single_bit(ring_degree)) {
    throw ParameterError("ring degree must be a power of two >= 8");
  }
  const std::size_t n = primes.empty() ? chain_bits.size() : primes.size();
  if (n < 3) throw ParameterError("modulus chain needs q_0, at least one rescale prime and P");
  for (int bits : chain_bits) {
    if (primes.empty() && (bits < 20 || bits > 61)) {
      throw ParameterError("chain prime sizes must be in [20, 61] bits");
    }
  }
  if (!(scale > 1.0) || !std::isfinite(scale)) throw ParameterError("scale must be > 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be > 0");
}

std::vector<std::uint64_t> resolve_chain(const SchemeParams& params) {
  params.validate();
  if (!params.primes.empty()) {
    const std::uint64_t order = 2 * static_cast<std::uint64_t>(params.ring_degree);
    for (std::size_t i = 0; i < params.primes.size(); ++i) {
      const std::uint64_t q = params.primes[i];
      if (!is_prime(q) || q % order != 1 || q >= (std::uint64_t{1} << 61)) {
        throw ParameterError("chain entry " + std::to_string(q) + " is not an NTT-friendly prime");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (params.primes[j] == q) throw ParameterError("modulus chain primes must be distinct");
      }
    }
    return params.primes;
  }
  std::vector<std::uint64_t> chain;
  for (int bits : params.chain_bits) {
    chain.push_back(ntt_primes(bits, 1, params.ring_degree, chain).front());
  }
  return chain;
}

struct Scheme::Impl {
  SchemeParams params;
  std::vector<std::uint64_t> data_primes;
  std::uint64_t special = 0;
  int top_level = 0;
  std::vector<RingContextPtr> rings;  // data primes, then P
  std::vector<double> log2_prefix;
  // inv_last[l][j] = q_l^{-1} mod q_j for j < l.
  std::vector<std::vector<std::uint64_t>> inv_last;
  std::vector<std::uint64_t> special_inv;  // P^{-1} mod q_j
  std::vector<std::uint64_t> special_mod;  // P mod q_j
  std::uint64_t q0_inv_mod_q1 = 0;
  std::vector<long double> cos_table;

  std::size_t n() const { return params.ring_degree; }
  std::size_t special_index() const { return data_primes.size(); }
  const Modulus& mod(std::size_t i) const { return rings[i]->modulus(); }
};

namespace {

using Impl = Scheme::Impl;

RingElement residue_from_signed(const Impl& impl, std::size_t index,
                                std::span<const std::int64_t> coeffs) {
  RingElement r = RingElement::from_signed(impl.rings[index], coeffs);
  r.to_evaluation();
  return r;
}

// Signed coefficients into evaluation-domain residues 0..last (inclusive),
// optionally followed by P.
RnsPoly rns_from_signed(const Impl& impl, std::span<const std::int64_t> coeffs, int last,
                        bool with_special) {
  RnsPoly out;
  out.reserve(static_cast<std::size_t>(last) + 2);
  for (int j = 0; j <= last; ++j) out.push_back(residue_from_signed(impl, j, coeffs));
  if (with_special) out.push_back(residue_from_signed(impl, impl.special_index(), coeffs));
  return out;
}

RnsPoly rns_uniform(const Impl& impl, Prng& prng, int last, bool with_special) {
  RnsPoly out;
  for (int j = 0; j <= last; ++j) {
    out.push_back(sample_uniform(impl.rings[j], prng, Domain::kEvaluation));
  }
  if (with_special) {
    out.push_back(sample_uniform(impl.rings[impl.special_index()], prng, Domain::kEvaluation));
  }
  return out;
}

void check_shape(const Impl& impl, const Ciphertext& ct) {
  ledger::check_level_range(ct.level, impl.top_level);
  if (ct.size() < 2 || ct.size() > 3) throw ParameterError("ciphertext must have 2 or 3 components");
  for (const auto& c : ct.components) {
    if (c.size() != static_cast<std::size_t>(ct.level) + 1) {
      throw ParameterError("ciphertext residue count does not match its level");
    }
  }
}

// Centered lift of a reduced residue vector modulo q, reduced mod q_j.
void lift_centered(std::span<const std::uint64_t> src, const Modulus& from, const Modulus& to,
                   std::span<std::uint64_t> dst) {
  const std::uint64_t half = from.value() >> 1;
  const std::uint64_t qt = to.value();
  const std::uint64_t from_mod_to = to.reduce(from.value());
  for (std::size_t k = 0; k < src.size(); ++k) {
    const std::uint64_t v = src[k];
    if (v > half) {
      // v - from, a negative number, represented mod q_j
      const std::uint64_t r = to.reduce(v);
      dst[k] = to.sub(r, from_mod_to);
    } else {
      dst[k] = v < qt ? v : to.reduce(v);
    }
  }
}

}  // namespace

Scheme::Scheme(SchemeParams params) {
  auto impl = std::make_shared<Impl>();
  const auto chain = resolve_chain(params);
  impl->params = std::move(params);
  impl->params.primes = chain;
  impl->data_primes.assign(chain.begin(), chain.end() - 1);
  impl->special = chain.back();
  impl->top_level = static_cast<int>(impl->data_primes.size()) - 1;
  for (std::uint64_t q : chain) {
    impl->rings.push_back(RingContext::create({impl->params.ring_degree, q}));
  }
  double acc = 0.0;
  for (std::uint64_t q : impl->data_primes) {
    acc += std::log2(static_cast<double>(q));
    impl->log2_prefix.push_back(acc);
  }
  impl->inv_last.resize(impl->data_primes.size());
  for (std::size_t l = 1; l < impl->data_primes.size(); ++l) {
    for (std::size_t j = 0; j < l; ++j) {
      const Modulus& qj = impl->mod(j);
      impl->inv_last[l].push_back(qj.inv(qj.reduce(impl->data_primes[l])));
    }
  }
  for (std::size_t j = 0; j < impl->data_primes.size(); ++j) {
    const Modulus& qj = impl->mod(j);
    impl->special_mod.push_back(qj.reduce(impl->special));
    impl->special_inv.push_back(qj.inv(impl->special_mod.back()));
  }
  if (impl->data_primes.size() > 1) {
    impl->q0_inv_mod_q1 = impl->mod(1).inv(impl->mod(1).reduce(impl->data_primes[0]));
  }
  const std::size_t n = impl->n();
  impl->cos_table.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    impl->cos_table[k] =
        std::cos(std::numbers::pi_v<long double> * static_cast<long double>(k) / n);
  }
  impl_ = std::move(impl);
}

const SchemeParams& Scheme::params() const { return impl_->params; }
std::size_t Scheme::degree() const { return impl_->n(); }
int Scheme::top_level() const { return impl_->top_level; }
std::uint64_t Scheme::special_prime() const { return impl_->special; }
const std::vector<std::uint64_t>& Scheme::data_primes() const { return impl_->data_primes; }
const RingContextPtr& Scheme::ring(std::size_t index) const { return impl_->rings.at(index); }

std::uint64_t Scheme::prime_at(int level) const {
  ledger::check_level_range(level, impl_->top_level);
  return impl_->data_primes[static_cast<std::size_t>(level)];
}

double Scheme::log2_modulus(int level) const {
  ledger::check_level_range(level, impl_->top_level);
  return impl_->log2_prefix[static_cast<std::size_t>(level)];
}

KeyMaterial Scheme::keygen(Prng& prng) const {
  const Impl& impl = *impl_;
  const int top = impl.top_level;
  const std::size_t n = impl.n();
  KeyMaterial keys;

  const auto s_coeffs = sample_ternary_coeffs(n, prng);
  keys.secret.s = rns_from_signed(impl, s_coeffs, top, /*with_special=*/true);

  // Public key over the data primes.
  keys.public_key.a = rns_uniform(impl, prng, top, false);
  const auto e = sample_gaussian_coeffs(n, prng, impl.params.sigma);
  keys.public_key.b = rns_from_signed(impl, e, top, false);
  for (int j = 0; j <= top; ++j) {
    RingElement as = keys.public_key.a[j];
    as.mul_pointwise(keys.secret.s[j]);
    keys.public_key.b[j] -= as;
  }

  // Relinearization key: pair i hides P * s^2 in residue i only.
  const std::size_t width = impl.data_primes.size() + 1;
  for (int i = 0; i <= top; ++i) {
    RnsPoly a = rns_uniform(impl, prng, top, true);
    const auto ei = sample_gaussian_coeffs(n, prng, impl.params.sigma);
    RnsPoly b = rns_from_signed(impl, ei, top, true);
    for (std::size_t j = 0; j < width; ++j) {
      RingElement as = a[j];
      as.mul_pointwise(keys.secret.s[j]);
      b[j] -= as;
    }
    RingElement s2 = keys.secret.s[i];
    s2.mul_pointwise(keys.secret.s[i]);
    s2.mul_scalar(impl.special_mod[i]);
    b[i] += s2;
    keys.relin.b.push_back(std::move(b));
    keys.relin.a.push_back(std::move(a));
  }
  return keys;
}

PlaintextPoly Scheme::encode(double x, int level, std::optional<double> scale) const {
  const Impl& impl = *impl_;
  ledger::check_level_range(level, impl.top_level);
  const double s = scale.value_or(impl.params.scale);
  ledger::check_encodable(x, s, log2_modulus(level), level);
  const long double scaled = static_cast<long double>(x) * s;
  const std::size_t n = impl.n();
  const long double amplitude = 2.0L * scaled / static_cast<long double>(n);
  if (std::abs(amplitude) >= 0x1.0p62L) {
    throw EncodingError("encoded coefficients exceed 62 bits");
  }
  std::vector<std::int64_t> coeffs(n);
  for (std::size_t k = 0; k < n; ++k) {
    coeffs[k] = std::llroundl(amplitude * impl.cos_table[k]);
  }
  PlaintextPoly pt;
  pt.poly = rns_from_signed(impl, coeffs, level, false);
  pt.scale = s;
  pt.level = level;
  return pt;
}

double Scheme::decode(const PlaintextPoly& pt) const {
  const Impl& impl = *impl_;
  ledger::check_level_range(pt.level, impl.top_level);
  if (pt.poly.size() != static_cast<std::size_t>(pt.level) + 1) {
    throw ParameterError("plaintext residue count does not match its level");
  }
  const std::size_t n = impl.n();
  RingElement r0 = pt.poly[0];
  r0.to_coefficient();
  long double acc = 0.0L;
  if (pt.level == 0) {
    const Modulus& q0 = impl.mod(0);
    for (std::size_t k = 0; k < n; ++k) {
      acc += static_cast<long double>(q0.to_signed(r0[k])) * impl.cos_table[k];
    }
  } else {
    RingElement r1 = pt.poly[1];
    r1.to_coefficient();
    const Modulus& q1 = impl.mod(1);
    const u128 q0 = impl.data_primes[0];
    const u128 big_q = q0 * impl.data_primes[1];
    const u128 half = big_q >> 1;
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t a0 = r0[k];
      const std::uint64_t diff = q1.sub(r1[k], q1.reduce(a0));
      const u128 x = static_cast<u128>(a0) + q0 * q1.mul(diff, impl.q0_inv_mod_q1);
      const long double v = x > half ? -static_cast<long double>(big_q - x)
                                     : static_cast<long double>(x);
      acc += v * impl.cos_table[k];
    }
  }
  return static_cast<double>(acc / static_cast<long double>(pt.scale));
}

Ciphertext Scheme::encrypt(const PublicKey& pk, const PlaintextPoly& pt, Prng& prng) const {
  const Impl& impl = *impl_;
  ledger::check_level_range(pt.level, impl.top_level);
  if (pk.a.size() != impl.data_primes.size() || pk.b.size() != impl.data_primes.size()) {
    throw ParameterError("public key does not match the scheme parameters");
  }
  const std::size_t n = impl.n();
  const auto u = sample_ternary_coeffs(n, prng);
  const auto e0 = sample_gaussian_coeffs(n, prng, impl.params.sigma);
  const auto e1 = sample_gaussian_coeffs(n, prng, impl.params.sigma);
  Ciphertext ct;
  ct.level = pt.level;
  ct.scale = pt.scale;
  ct.components.resize(2);
  ct.components[0] = rns_from_signed(impl, e0, pt.level, false);
  ct.components[1] = rns_from_signed(impl, e1, pt.level, false);
  for (int j = 0; j <= pt.level; ++j) {
    const RingElement uj = residue_from_signed(impl, j, u);
    RingElement bu = pk.b[j];
    bu.mul_pointwise(uj);
    RingElement au = pk.a[j];
    au.mul_pointwise(uj);
    ct.components[0][j] += bu;
    ct.components[0][j] += pt.poly[j];
    ct.components[1][j] += au;
  }
  return ct;
}

PlaintextPoly Scheme::decrypt(const SecretKey& sk, const Ciphertext& ct) const {
  const Impl& impl = *impl_;
  check_shape(impl, ct);
  if (sk.s.size() != impl.rings.size()) {
    throw ParameterError("secret key does not match the scheme parameters");
  }
  const int keep = std::min(ct.level, 1);
  PlaintextPoly pt;
  pt.level = keep;
  pt.scale = ct.scale;
  for (int j = 0; j <= keep; ++j) {
    RingElement m = ct.components[0][j];
    RingElement s_pow = sk.s[j];
    for (std::size_t c = 1; c < ct.size(); ++c) {
      RingElement term = ct.components[c][j];
      term.mul_pointwise(s_pow);
      m += term;
      s_pow.mul_pointwise(sk.s[j]);
    }
    pt.poly.push_back(std::move(m));
  }
  return pt;
}

Ciphertext Scheme::add(const Ciphertext& a, const Ciphertext& b) const {
  check_shape(*impl_, a);
  check_shape(*impl_, b);
  ledger::check_same_level_and_scale("he_add", a.level, a.scale, b.level, b.scale);
  Ciphertext out = a.size() >= b.size() ? a : b;
  const Ciphertext& other = a.size() >= b.size() ? b : a;
  for (std::size_t c = 0; c < other.size(); ++c) {
    for (std::size_t j = 0; j < other.components[c].size(); ++j) {
      out.components[c][j] += other.components[c][j];
    }
  }
  out.scale = a.scale;
  return out;
}

Ciphertext Scheme::sub(const Ciphertext& a, const Ciphertext& b) const {
  check_shape(*impl_, a);
  check_shape(*impl_, b);
  ledger::check_same_level_and_scale("he_sub", a.level, a.scale, b.level, b.scale);
  Ciphertext out = a;
  if (b.size() > out.size()) {
    out.components.push_back(RnsPoly());
    for (const auto& r : b.components[2]) out.components[2].emplace_back(r.context(), r.domain());
  }
  for (std::size_t c = 0; c < b.size(); ++c) {
    for (std::size_t j = 0; j < b.components[c].size(); ++j) {
      out.components[c][j] -= b.components[c][j];
    }
  }
  return out;
}

Ciphertext Scheme::negate(const Ciphertext& a) const {
  check_shape(*impl_, a);
  Ciphertext out = a;
  for (auto& comp : out.components) {
    for (auto& r : comp) r.negate();
  }
  return out;
}

Ciphertext Scheme::add_plain(const Ciphertext& a, const PlaintextPoly& pt) const {
  check_shape(*impl_, a);
  ledger::check_same_level_and_scale("he_add_plain", a.level, a.scale, pt.level, pt.scale);
  Ciphertext out = a;
  for (std::size_t j = 0; j < pt.poly.size(); ++j) out.components[0][j] += pt.poly[j];
  return out;
}

Ciphertext Scheme::mul_plain(const Ciphertext& a, const PlaintextPoly& pt) const {
  check_shape(*impl_, a);
  ledger::check_same_level("he_mul_plain", a.level, pt.level);
  ledger::check_can_multiply("he_mul_plain", a.level);
  ledger::check_headroom("he_mul_plain", a.scale * pt.scale, log2_modulus(a.level));
  Ciphertext out = a;
  for (auto& comp : out.components) {
    for (std::size_t j = 0; j < comp.size(); ++j) comp[j].mul_pointwise(pt.poly[j]);
  }
  out.scale = a.scale * pt.scale;
  return out;
}

Ciphertext Scheme::mul_no_relin(const Ciphertext& a, const Ciphertext& b) const {
  check_shape(*impl_, a);
  check_shape(*impl_, b);
  if (a.size() != 2 || b.size() != 2) {
    throw ParameterError("he_mul expects relinearized (2-component) operands");
  }
  ledger::check_same_level("he_mul", a.level, b.level);
  ledger::check_can_multiply("he_mul", a.level);
  ledger::check_headroom("he_mul", a.scale * b.scale, log2_modulus(a.level));
  Ciphertext out;
  out.level = a.level;
  out.scale = a.scale * b.scale;
  out.components.resize(3);
  const std::size_t width = static_cast<std::size_t>(a.level) + 1;
  for (std::size_t j = 0; j < width; ++j) {
    RingElement d0 = a.components[0][j];
    d0.mul_pointwise(b.components[0][j]);
    RingElement d1 = a.components[0][j];
    d1.mul_pointwise(b.components[1][j]);
    RingElement cross = a.components[1][j];
    cross.mul_pointwise(b.components[0][j]);
    d1 += cross;
    RingElement d2 = a.components[1][j];
    d2.mul_pointwise(b.components[1][j]);
    out.components[0].push_back(std::move(d0));
    out.components[1].push_back(std::move(d1));
    out.components[2].push_back(std::move(d2));
  }
  return out;
}

Ciphertext Scheme::relinearize(const Ciphertext& a, const RelinKey& rlk) const {
  const Impl& impl = *impl_;
  check_shape(impl, a);
  if (a.size() == 2) return a;
  if (rlk.b.size() != impl.data_primes.size() || rlk.a.size() != impl.data_primes.size()) {
    throw ParameterError("relinearization key does not match the scheme parameters");
  }
  const std::size_t n = impl.n();
  const std::size_t width = static_cast<std::size_t>(a.level) + 1;
  const std::size_t sp = impl.special_index();
  // Target residues: q_0..q_level followed by P.
  std::vector<std::size_t> targets(width);
  for (std::size_t j = 0; j < width; ++j) targets[j] = j;
  targets.push_back(sp);

  std::vector<std::vector<std::uint64_t>> acc0(targets.size(), std::vector<std::uint64_t>(n, 0));
  std::vector<std::vector<std::uint64_t>> acc1(targets.size(), std::vector<std::uint64_t>(n, 0));
  std::vector<std::uint64_t> digit(n);
  std::vector<std::uint64_t> tmp(n);

  for (std::size_t i = 0; i < width; ++i) {
    const RingElement& c2 = a.components[2][i];
    std::copy(c2.coeffs().begin(), c2.coeffs().end(), digit.begin());
    impl.rings[i]->inverse(digit);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const std::size_t idx = targets[t];
      const Modulus& q = impl.mod(idx);
      std::span<const std::uint64_t> lifted;
      if (idx == i) {
        lifted = c2.coeffs();
      } else {
        for (std::size_t k = 0; k < n; ++k) tmp[k] = q.reduce(digit[k]);
        impl.rings[idx]->forward(tmp);
        lifted = tmp;
      }
      const auto kb = rlk.b[i][idx].coeffs();
      const auto ka = rlk.a[i][idx].coeffs();
      auto& s0 = acc0[t];
      auto& s1 = acc1[t];
      for (std::size_t k = 0; k < n; ++k) {
        s0[k] = q.add(s0[k], q.mul(lifted[k], kb[k]));
        s1[k] = q.add(s1[k], q.mul(lifted[k], ka[k]));
      }
    }
  }

  // Divide by P with rounding and fold into (c0, c1).
  Ciphertext out;
  out.level = a.level;
  out.scale = a.scale;
  out.components = {a.components[0], a.components[1]};
  const Modulus& p_mod = impl.mod(sp);
  for (int which = 0; which < 2; ++which) {
    auto& acc = which == 0 ? acc0 : acc1;
    std::vector<std::uint64_t> top = acc.back();
    impl.rings[sp]->inverse(top);
    for (std::size_t j = 0; j < width; ++j) {
      const Modulus& q = impl.mod(j);
      lift_centered(top, p_mod, q, tmp);
      impl.rings[j]->forward(tmp);
      const ShoupConst p_inv(impl.special_inv[j], q);
      auto dst = out.components[which][j].mutable_coeffs();
      for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t v = p_inv.mul(q.sub(acc[j][k], tmp[k]), q.value());
        dst[k] = q.add(dst[k], v);
      }
    }
  }
  return out;
}

Ciphertext Scheme::mul(const Ciphertext& a, const Ciphertext& b, const RelinKey& rlk) const {
  return relinearize(mul_no_relin(a, b), rlk);
}

Ciphertext Scheme::rescale(const Ciphertext& a) const {
  const Impl& impl = *impl_;
  check_shape(impl, a);
  ledger::check_can_rescale(a.level);
  const std::size_t last = static_cast<std::size_t>(a.level);
  const std::size_t n = impl.n();
  std::vector<std::uint64_t> top(n);
  std::vector<std::uint64_t> tmp(n);
  Ciphertext out;
  out.level = a.level - 1;
  out.scale = a.scale / static_cast<double>(impl.data_primes[last]);
  for (const auto& comp : a.components) {
    std::copy(comp[last].coeffs().begin(), comp[last].coeffs().end(), top.begin());
    impl.rings[last]->inverse(top);
    RnsPoly next(comp.begin(), comp.begin() + static_cast<std::ptrdiff_t>(last));
    for (std::size_t j = 0; j < last; ++j) {
      const Modulus& q = impl.mod(j);
      lift_centered(top, impl.mod(last), q, tmp);
      impl.rings[j]->forward(tmp);
      const ShoupConst inv(impl.inv_last[last][j], q);
      auto dst = next[j].mutable_coeffs();
      for (std::size_t k = 0; k < n; ++k) dst[k] = inv.mul(q.sub(dst[k], tmp[k]), q.value());
    }
    out.components.push_back(std::move(next));
  }
  return out;
}

Ciphertext Scheme::mod_switch_to(const Ciphertext& a, int level) const {
  check_shape(*impl_, a);
  ledger::check_mod_switch(a.level, level);
  if (level == a.level) return a;
  Ciphertext out;
  out.level = level;
  out.scale = a.scale;
  for (const auto& comp : a.components) {
    out.components.emplace_back(comp.begin(), comp.begin() + level + 1);
  }
  return out;
}

}  // namespace hemacd
