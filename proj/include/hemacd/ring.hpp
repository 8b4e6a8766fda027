// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Negacyclic polynomial ring Z_q[X]/(X^N + 1) with NTT multiplication.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hemacd/modarith.hpp"
#include "hemacd/prng.hpp"

namespace hemacd {

struct RingParams {
  std::size_t degree = 0;
  std::uint64_t modulus = 0;

  friend bool operator==(const RingParams&, const RingParams&) = default;
};

// Immutable per-(N, q) data: the modulus and, when q = 1 mod 2N, the
// bit-reversed twiddle tables of the merged-twist negacyclic NTT.
class RingContext {
 public:
  static std::shared_ptr<const RingContext> create(const RingParams& params);

  const RingParams& params() const { return params_; }
  std::size_t degree() const { return params_.degree; }
  const Modulus& modulus() const { return modulus_; }
  bool has_ntt() const { return !psi_br_.empty(); }
  // Primitive 2N-th root of unity used for the tables (0 if none exists).
  std::uint64_t root() const { return root_; }

  // In-place transforms on a length-N buffer of reduced residues.
  // Throw ParameterError when q admits no primitive 2N-th root.
  void forward(std::span<std::uint64_t> a) const;
  void inverse(std::span<std::uint64_t> a) const;

  explicit RingContext(const RingParams& params);

 private:
  RingParams params_;
  Modulus modulus_;
  std::uint64_t root_ = 0;
  std::vector<ShoupConst> psi_br_;
  std::vector<ShoupConst> psi_inv_br_;
  ShoupConst degree_inv_;
};

using RingContextPtr = std::shared_ptr<const RingContext>;

enum class Domain : std::uint8_t { kCoefficient = 0, kEvaluation = 1 };

class RingElement {
 public:
  RingElement() = default;
  // The zero element.
  explicit RingElement(RingContextPtr ctx, Domain domain = Domain::kCoefficient);
  RingElement(RingContextPtr ctx, std::vector<std::uint64_t> coeffs,
              Domain domain = Domain::kCoefficient);
  static RingElement from_signed(RingContextPtr ctx, std::span<const std::int64_t> coeffs);

  const RingContextPtr& context() const { return ctx_; }
  const RingParams& params() const { return ctx_->params(); }
  const Modulus& modulus() const { return ctx_->modulus(); }
  std::size_t degree() const { return coeffs_.size(); }
  Domain domain() const { return domain_; }

  std::span<const std::uint64_t> coeffs() const { return coeffs_; }
  std::span<std::uint64_t> mutable_coeffs() { return coeffs_; }
  std::uint64_t operator[](std::size_t i) const { return coeffs_[i]; }

  bool is_zero() const;

  // In-place arithmetic; both operands must share params and domain.
  RingElement& operator+=(const RingElement& other);
  RingElement& operator-=(const RingElement& other);
  // Pointwise product; only meaningful in the evaluation domain.
  RingElement& mul_pointwise(const RingElement& other);
  RingElement& negate();
  RingElement& mul_scalar(std::uint64_t scalar);

  void to_evaluation();
  void to_coefficient();

  friend bool operator==(const RingElement& a, const RingElement& b);

 private:
  RingContextPtr ctx_;
  std::vector<std::uint64_t> coeffs_;
  Domain domain_ = Domain::kCoefficient;
};

RingElement ntt_forward(const RingElement& a);
RingElement ntt_inverse(const RingElement& a);

RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_sub(const RingElement& a, const RingElement& b);
RingElement ring_neg(const RingElement& a);
// a * b mod (X^N + 1, q). Coefficient-domain inputs are transformed through
// the NTT when available (schoolbook otherwise); evaluation-domain inputs are
// multiplied pointwise. The result is in the inputs' domain.
RingElement ring_mul(const RingElement& a, const RingElement& b);

// Coefficients uniform in {-1, 0, 1}.
RingElement sample_ternary(RingContextPtr ctx, Prng& prng);
// Rounded centered gaussian coefficients; sigma must be > 0.
RingElement sample_gaussian(RingContextPtr ctx, Prng& prng, double sigma);
RingElement sample_uniform(RingContextPtr ctx, Prng& prng, Domain domain = Domain::kCoefficient);

// Signed coefficient samplers shared by all residues of an RNS polynomial.
std::vector<std::int64_t> sample_ternary_coeffs(std::size_t degree, Prng& prng);
std::vector<std::int64_t> sample_gaussian_coeffs(std::size_t degree, Prng& prng, double sigma);

}  // namespace hemacd
