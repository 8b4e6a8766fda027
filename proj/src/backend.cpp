// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/backend.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "hemacd/errors.hpp"
#include "hemacd/ledger.hpp"

namespace hemacd {

const char* engine_name(EngineKind kind) {
  return kind == EngineKind::kHe ? "he" : "exact-sim";
}

void DepthTrace::record(std::string op, int before, int after, double scale) {
  entries_.push_back({std::move(op), before, after, scale});
}

void DepthTrace::write_csv(std::ostream& out) const {
  out << "op,level_before,level_after,scale\n";
  char buf[64];
  for (const auto& e : entries_) {
    std::snprintf(buf, sizeof buf, "%.6f", std::log2(e.scale));
    out << e.op << ',' << e.level_before << ',' << e.level_after << ",2^" << buf << '\n';
  }
}

int max_depth_of(const DepthTrace& trace) {
  int lowest = trace.top_level();
  for (const auto& e : trace.entries()) lowest = std::min(lowest, e.level_after);
  return trace.top_level() - lowest;
}

Evaluator::Evaluator(EngineKind kind, std::vector<std::uint64_t> data_primes, double scale)
    : kind_(kind), primes_(std::move(data_primes)), scale_(scale),
      trace_(static_cast<int>(primes_.size()) - 1) {
  if (primes_.empty()) throw ParameterError("evaluator needs at least one data prime");
  double acc = 0.0;
  for (auto q : primes_) {
    acc += std::log2(static_cast<double>(q));
    log2_prefix_.push_back(acc);
  }
}

std::uint64_t Evaluator::prime_at(int level) const {
  ledger::check_level_range(level, top_level());
  return primes_[static_cast<std::size_t>(level)];
}

double Evaluator::log2_modulus(int level) const {
  ledger::check_level_range(level, top_level());
  return log2_prefix_[static_cast<std::size_t>(level)];
}

void Evaluator::check_kind(const CipherHandle& h) const {
  if (h.kind() != kind_) {
    throw ParameterError(std::string("handle from the ") + engine_name(h.kind()) +
                         " engine passed to the " + engine_name(kind_) + " engine");
  }
  ledger::check_level_range(h.level, top_level());
}

void Evaluator::record(const char* op, int before, const CipherHandle& out) {
  if (tracing_) trace_.record(op, before, out.level, out.scale);
}

CipherHandle Evaluator::b_encrypt(double x) {
  const int level = top_level();
  ledger::check_encodable(x, scale_, log2_modulus(level), level);
  CipherHandle out = do_encrypt(x, level, scale_);
  out.level = level;
  out.scale = scale_;
  record("encrypt", level, out);
  return out;
}

PlainHandle Evaluator::b_encode(double x, int level, std::optional<double> scale) const {
  ledger::check_level_range(level, top_level());
  const double s = scale.value_or(scale_);
  ledger::check_encodable(x, s, log2_modulus(level), level);
  PlainHandle p = do_encode(x, level, s);
  p.value = x;
  p.level = level;
  p.scale = s;
  return p;
}

CipherHandle Evaluator::b_add(const CipherHandle& a, const CipherHandle& b) {
  check_kind(a);
  check_kind(b);
  ledger::check_same_level_and_scale("b_add", a.level, a.scale, b.level, b.scale);
  CipherHandle out = do_add(a, b);
  out.level = a.level;
  out.scale = a.scale;
  record("add", a.level, out);
  return out;
}

CipherHandle Evaluator::b_sub(const CipherHandle& a, const CipherHandle& b) {
  check_kind(a);
  check_kind(b);
  ledger::check_same_level_and_scale("b_sub", a.level, a.scale, b.level, b.scale);
  CipherHandle out = do_sub(a, b);
  out.level = a.level;
  out.scale = a.scale;
  record("sub", a.level, out);
  return out;
}

CipherHandle Evaluator::b_negate(const CipherHandle& a) {
  check_kind(a);
  CipherHandle out = do_negate(a);
  out.level = a.level;
  out.scale = a.scale;
  record("negate", a.level, out);
  return out;
}

CipherHandle Evaluator::b_add_plain(const CipherHandle& a, const PlainHandle& p) {
  check_kind(a);
  ledger::check_same_level_and_scale("b_add_plain", a.level, a.scale, p.level, p.scale);
  CipherHandle out = do_add_plain(a, p);
  out.level = a.level;
  out.scale = a.scale;
  record("add_plain", a.level, out);
  return out;
}

CipherHandle Evaluator::b_mul_plain(const CipherHandle& a, const PlainHandle& p) {
  check_kind(a);
  ledger::check_same_level("b_mul_plain", a.level, p.level);
  ledger::check_can_multiply("b_mul_plain", a.level);
  ledger::check_headroom("b_mul_plain", a.scale * p.scale, log2_modulus(a.level));
  CipherHandle out = do_mul_plain(a, p);
  out.level = a.level;
  out.scale = a.scale * p.scale;
  record("mul_plain", a.level, out);
  return out;
}

CipherHandle Evaluator::b_mul(const CipherHandle& a, const CipherHandle& b) {
  check_kind(a);
  check_kind(b);
  ledger::check_same_level("b_mul", a.level, b.level);
  ledger::check_can_multiply("b_mul", a.level);
  ledger::check_headroom("b_mul", a.scale * b.scale, log2_modulus(a.level));
  CipherHandle out = do_mul(a, b);
  out.level = a.level;
  out.scale = a.scale * b.scale;
  record("mul", a.level, out);
  return out;
}

CipherHandle Evaluator::b_rescale(const CipherHandle& a) {
  check_kind(a);
  ledger::check_can_rescale(a.level);
  CipherHandle out = do_rescale(a);
  out.level = a.level - 1;
  out.scale = a.scale / static_cast<double>(prime_at(a.level));
  record("rescale", a.level, out);
  return out;
}

CipherHandle Evaluator::b_mod_switch(const CipherHandle& a, int level) {
  check_kind(a);
  ledger::check_mod_switch(a.level, level);
  if (level == a.level) return a;
  CipherHandle out = do_mod_switch(a, level);
  out.level = level;
  out.scale = a.scale;
  record("mod_switch", a.level, out);
  return out;
}

std::vector<CipherHandle> Evaluator::b_align(std::span<const CipherHandle> handles) {
  std::vector<CipherHandle> out(handles.begin(), handles.end());
  if (out.empty()) return out;
  int low = out[0].level;
  for (const auto& h : out) {
    check_kind(h);
    low = std::min(low, h.level);
  }
  double target = 0.0;
  for (const auto& h : out) {
    if (h.level == low) {
      target = h.scale;
      break;
    }
  }
  bool corrected = false;
  for (auto& h : out) {
    h = b_mod_switch(h, low);
    if (!ledger::scales_match(h.scale, target)) {
      const double fix = target * static_cast<double>(prime_at(low)) / h.scale;
      h = b_rescale(b_mul_plain(h, b_encode(1.0, low, fix)));
      corrected = true;
    }
  }
  if (corrected) {
    for (auto& h : out) h = b_mod_switch(h, std::min(h.level, low - 1));
  }
  return out;
}

// ---- real scheme ----

namespace {

const Ciphertext& ct_of(const CipherHandle& h) { return std::get<Ciphertext>(h.payload); }
const PlaintextPoly& pt_of(const PlainHandle& p) {
  if (!std::holds_alternative<PlaintextPoly>(p.payload)) {
    throw ParameterError("plaintext handle was not encoded by the he engine");
  }
  return std::get<PlaintextPoly>(p.payload);
}
CipherHandle wrap(Ciphertext ct) { return CipherHandle{std::move(ct), 0, 1.0}; }

}  // namespace

HeEvaluator::HeEvaluator(std::shared_ptr<const Scheme> scheme, PublicKey pk, RelinKey rlk,
                         Prng prng)
    : Evaluator(EngineKind::kHe, scheme->data_primes(), scheme->params().scale),
      scheme_(std::move(scheme)), pk_(std::move(pk)), rlk_(std::move(rlk)),
      prng_(std::move(prng)) {}

CipherHandle HeEvaluator::do_encrypt(double x, int level, double scale) {
  return wrap(scheme_->encrypt(pk_, scheme_->encode(x, level, scale), prng_));
}

PlainHandle HeEvaluator::do_encode(double x, int level, double scale) const {
  return PlainHandle{scheme_->encode(x, level, scale), x, level, scale};
}

CipherHandle HeEvaluator::do_add(const CipherHandle& a, const CipherHandle& b) {
  return wrap(scheme_->add(ct_of(a), ct_of(b)));
}

CipherHandle HeEvaluator::do_sub(const CipherHandle& a, const CipherHandle& b) {
  return wrap(scheme_->sub(ct_of(a), ct_of(b)));
}

CipherHandle HeEvaluator::do_negate(const CipherHandle& a) {
  return wrap(scheme_->negate(ct_of(a)));
}

CipherHandle HeEvaluator::do_add_plain(const CipherHandle& a, const PlainHandle& p) {
  return wrap(scheme_->add_plain(ct_of(a), pt_of(p)));
}

CipherHandle HeEvaluator::do_mul_plain(const CipherHandle& a, const PlainHandle& p) {
  return wrap(scheme_->mul_plain(ct_of(a), pt_of(p)));
}

CipherHandle HeEvaluator::do_mul(const CipherHandle& a, const CipherHandle& b) {
  return wrap(scheme_->mul(ct_of(a), ct_of(b), rlk_));
}

CipherHandle HeEvaluator::do_rescale(const CipherHandle& a) {
  return wrap(scheme_->rescale(ct_of(a)));
}

CipherHandle HeEvaluator::do_mod_switch(const CipherHandle& a, int level) {
  return wrap(scheme_->mod_switch_to(ct_of(a), level));
}

HeEngine::HeEngine(std::shared_ptr<const Scheme> scheme, const KeyMaterial& keys, Prng prng)
    : HeEvaluator(std::move(scheme), keys.public_key, keys.relin, std::move(prng)),
      sk_(keys.secret) {}

std::unique_ptr<HeEngine> HeEngine::create(const SchemeParams& params, std::uint64_t seed) {
  return create(std::make_shared<const Scheme>(params), seed, 0);
}

std::unique_ptr<HeEngine> HeEngine::create(std::shared_ptr<const Scheme> scheme,
                                           std::uint64_t seed, std::uint32_t trader) {
  const Prng root(seed);
  Prng kg = trader == 0 ? root.derive("keygen") : root.derive("keygen", trader);
  Prng enc = trader == 0 ? root.derive("encrypt") : root.derive("encrypt", trader);
  const KeyMaterial keys = scheme->keygen(kg);
  return std::make_unique<HeEngine>(std::move(scheme), keys, std::move(enc));
}

double HeEngine::b_decrypt(const CipherHandle& h) const {
  check_kind(h);
  return scheme().decode(scheme().decrypt(sk_, ct_of(h)));
}

// ---- exact simulation ----

namespace {

double val(const CipherHandle& h) { return std::get<double>(h.payload); }
double val(const PlainHandle& p) { return p.value; }

}  // namespace

SimEngine::SimEngine(const SchemeParams& params, double noise_sigma, std::uint64_t noise_seed)
    : Evaluator(EngineKind::kExactSim,
                [&] {
                  auto chain = resolve_chain(params);
                  chain.pop_back();  // key-switching prime
                  return chain;
                }(),
                params.scale),
      noise_sigma_(noise_sigma), noise_(Prng(noise_seed).derive("sim-noise")) {
  if (noise_sigma < 0.0 || !std::isfinite(noise_sigma)) {
    throw ParameterError("simulation noise sigma must be >= 0");
  }
}

double SimEngine::perturb(double v) {
  if (noise_sigma_ == 0.0) return v;
  // Box-Muller on two fresh uniforms.
  const double u1 = 1.0 - noise_.next_double();
  const double u2 = noise_.next_double();
  return v + noise_sigma_ * std::sqrt(-2.0 * std::log(u1)) *
                 std::cos(2.0 * std::numbers::pi * u2);
}

CipherHandle SimEngine::make(double v) { return CipherHandle{perturb(v), 0, 1.0}; }

double SimEngine::b_decrypt(const CipherHandle& h) const {
  check_kind(h);
  return val(h);
}

CipherHandle SimEngine::do_encrypt(double x, int, double) { return make(x); }

PlainHandle SimEngine::do_encode(double x, int level, double scale) const {
  return PlainHandle{x, x, level, scale};
}

CipherHandle SimEngine::do_add(const CipherHandle& a, const CipherHandle& b) {
  return make(val(a) + val(b));
}

CipherHandle SimEngine::do_sub(const CipherHandle& a, const CipherHandle& b) {
  return make(val(a) - val(b));
}

CipherHandle SimEngine::do_negate(const CipherHandle& a) { return CipherHandle{-val(a), 0, 1.0}; }

CipherHandle SimEngine::do_add_plain(const CipherHandle& a, const PlainHandle& p) {
  return make(val(a) + val(p));
}

CipherHandle SimEngine::do_mul_plain(const CipherHandle& a, const PlainHandle& p) {
  return make(val(a) * val(p));
}

CipherHandle SimEngine::do_mul(const CipherHandle& a, const CipherHandle& b) {
  return make(val(a) * val(b));
}

CipherHandle SimEngine::do_rescale(const CipherHandle& a) { return CipherHandle{val(a), 0, 1.0}; }

CipherHandle SimEngine::do_mod_switch(const CipherHandle& a, int) {
  return CipherHandle{val(a), 0, 1.0};
}

}  // namespace hemacd
