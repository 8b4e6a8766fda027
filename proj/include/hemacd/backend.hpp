// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// One evaluation contract, two engines. The level/scale ledger lives in the
// non-virtual `b_*` methods of Evaluator; engines only transform payloads.
// Identical call sequences therefore produce identical traces and fail at
// the same operation index in either engine.
//
// Decryption is a separate capability (Decryptor). The evaluator handed to
// a trader has none.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hemacd/prng.hpp"
#include "hemacd/scheme.hpp"

namespace hemacd {

enum class EngineKind : std::uint8_t { kHe, kExactSim };

const char* engine_name(EngineKind kind);

struct CipherHandle {
  std::variant<Ciphertext, double> payload;
  int level = 0;
  double scale = 1.0;

  EngineKind kind() const {
    return std::holds_alternative<Ciphertext>(payload) ? EngineKind::kHe : EngineKind::kExactSim;
  }
};

struct PlainHandle {
  std::variant<PlaintextPoly, double> payload;
  double value = 0.0;
  int level = 0;
  double scale = 1.0;
};

struct TraceEntry {
  std::string op;
  int level_before = 0;
  int level_after = 0;
  double scale = 0.0;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

class DepthTrace {
 public:
  explicit DepthTrace(int top_level = 0) : top_level_(top_level) {}

  void record(std::string op, int before, int after, double scale);
  void clear() { entries_.clear(); }

  int top_level() const { return top_level_; }
  const std::vector<TraceEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // op,level_before,level_after,scale (scale as log2, 6 decimals).
  void write_csv(std::ostream& out) const;

  friend bool operator==(const DepthTrace&, const DepthTrace&) = default;

 private:
  int top_level_;
  std::vector<TraceEntry> entries_;
};

// Levels consumed: top level minus the lowest level any op produced.
int max_depth_of(const DepthTrace& trace);

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  EngineKind kind() const { return kind_; }
  int top_level() const { return static_cast<int>(primes_.size()) - 1; }
  double default_scale() const { return scale_; }
  std::uint64_t prime_at(int level) const;
  double log2_modulus(int level) const;

  const DepthTrace& trace() const { return trace_; }
  void reset_trace() { trace_.clear(); }
  // Tracing can be switched off for bulk work whose ledger is not inspected.
  void set_tracing(bool on) { tracing_ = on; }

  CipherHandle b_encrypt(double x);
  PlainHandle b_encode(double x, int level, std::optional<double> scale = std::nullopt) const;
  CipherHandle b_add(const CipherHandle& a, const CipherHandle& b);
  CipherHandle b_sub(const CipherHandle& a, const CipherHandle& b);
  CipherHandle b_negate(const CipherHandle& a);
  CipherHandle b_add_plain(const CipherHandle& a, const PlainHandle& p);
  CipherHandle b_mul_plain(const CipherHandle& a, const PlainHandle& p);
  CipherHandle b_mul(const CipherHandle& a, const CipherHandle& b);
  CipherHandle b_rescale(const CipherHandle& a);
  CipherHandle b_mod_switch(const CipherHandle& a, int level);
  // Brings all handles to the lowest level among them and to the scale of
  // the first handle at that level. A scale mismatch costs one level: the
  // offender is multiplied by encode(1) at a corrective scale and rescaled,
  // and the rest are switched down to match.
  std::vector<CipherHandle> b_align(std::span<const CipherHandle> handles);

 protected:
  Evaluator(EngineKind kind, std::vector<std::uint64_t> data_primes, double scale);

  virtual CipherHandle do_encrypt(double x, int level, double scale) = 0;
  virtual PlainHandle do_encode(double x, int level, double scale) const = 0;
  virtual CipherHandle do_add(const CipherHandle& a, const CipherHandle& b) = 0;
  virtual CipherHandle do_sub(const CipherHandle& a, const CipherHandle& b) = 0;
  virtual CipherHandle do_negate(const CipherHandle& a) = 0;
  virtual CipherHandle do_add_plain(const CipherHandle& a, const PlainHandle& p) = 0;
  virtual CipherHandle do_mul_plain(const CipherHandle& a, const PlainHandle& p) = 0;
  virtual CipherHandle do_mul(const CipherHandle& a, const CipherHandle& b) = 0;
  virtual CipherHandle do_rescale(const CipherHandle& a) = 0;
  virtual CipherHandle do_mod_switch(const CipherHandle& a, int level) = 0;

  void check_kind(const CipherHandle& h) const;

 private:
  void record(const char* op, int before, const CipherHandle& out);

  EngineKind kind_;
  std::vector<std::uint64_t> primes_;
  std::vector<double> log2_prefix_;
  double scale_;
  DepthTrace trace_;
  bool tracing_ = true;
};

class Decryptor {
 public:
  virtual ~Decryptor() = default;
  virtual double b_decrypt(const CipherHandle& h) const = 0;
};

template <class E>
concept CanDecrypt = requires(const E& e, const CipherHandle& h) {
  { e.b_decrypt(h) };
};

// Real scheme with public evaluation material only.
class HeEvaluator : public Evaluator {
 public:
  HeEvaluator(std::shared_ptr<const Scheme> scheme, PublicKey pk, RelinKey rlk, Prng prng);

  const Scheme& scheme() const { return *scheme_; }
  const std::shared_ptr<const Scheme>& scheme_ptr() const { return scheme_; }
  const PublicKey& public_key() const { return pk_; }
  const RelinKey& relin_key() const { return rlk_; }

 protected:
  CipherHandle do_encrypt(double x, int level, double scale) override;
  PlainHandle do_encode(double x, int level, double scale) const override;
  CipherHandle do_add(const CipherHandle& a, const CipherHandle& b) override;
  CipherHandle do_sub(const CipherHandle& a, const CipherHandle& b) override;
  CipherHandle do_negate(const CipherHandle& a) override;
  CipherHandle do_add_plain(const CipherHandle& a, const PlainHandle& p) override;
  CipherHandle do_mul_plain(const CipherHandle& a, const PlainHandle& p) override;
  CipherHandle do_mul(const CipherHandle& a, const CipherHandle& b) override;
  CipherHandle do_rescale(const CipherHandle& a) override;
  CipherHandle do_mod_switch(const CipherHandle& a, int level) override;

 private:
  std::shared_ptr<const Scheme> scheme_;
  PublicKey pk_;
  RelinKey rlk_;
  Prng prng_;
};

// Real scheme plus the secret key.
class HeEngine : public HeEvaluator, public Decryptor {
 public:
  HeEngine(std::shared_ptr<const Scheme> scheme, const KeyMaterial& keys, Prng prng);
  // Keys and encryption randomness drawn from `seed`. Trader 0 uses the
  // same streams as a local run; trader k > 0 gets its own.
  static std::unique_ptr<HeEngine> create(const SchemeParams& params, std::uint64_t seed);
  static std::unique_ptr<HeEngine> create(std::shared_ptr<const Scheme> scheme, std::uint64_t seed,
                                          std::uint32_t trader = 0);

  double b_decrypt(const CipherHandle& h) const override;

 private:
  SecretKey sk_;
};

// Plain doubles with the real scheme's level and scale ledger. With
// `noise_sigma` > 0 each arithmetic result is perturbed by N(0, sigma^2).
class SimEngine : public Evaluator, public Decryptor {
 public:
  explicit SimEngine(const SchemeParams& params, double noise_sigma = 0.0,
                     std::uint64_t noise_seed = 0);

  double b_decrypt(const CipherHandle& h) const override;

 protected:
  CipherHandle do_encrypt(double x, int level, double scale) override;
  PlainHandle do_encode(double x, int level, double scale) const override;
  CipherHandle do_add(const CipherHandle& a, const CipherHandle& b) override;
  CipherHandle do_sub(const CipherHandle& a, const CipherHandle& b) override;
  CipherHandle do_negate(const CipherHandle& a) override;
  CipherHandle do_add_plain(const CipherHandle& a, const PlainHandle& p) override;
  CipherHandle do_mul_plain(const CipherHandle& a, const PlainHandle& p) override;
  CipherHandle do_mul(const CipherHandle& a, const CipherHandle& b) override;
  CipherHandle do_rescale(const CipherHandle& a) override;
  CipherHandle do_mod_switch(const CipherHandle& a, int level) override;

 private:
  CipherHandle make(double v);
  double perturb(double v);

  double noise_sigma_;
  Prng noise_;
};

}  // namespace hemacd
