// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hemacd/errors.hpp"
#include "hemacd/scheme.hpp"

namespace hemacd {
namespace {

// Small ring for fast tests; same 60/40/60 shape as the defaults.
SchemeParams small_params(int rescale_primes = 4) {
  SchemeParams p;
  p.ring_degree = 2048;
  p.chain_bits = {60};
  for (int i = 0; i < rescale_primes; ++i) p.chain_bits.push_back(40);
  p.chain_bits.push_back(60);
  return p;
}

class SchemeTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    scheme_ = new Scheme(small_params());
    Prng prng(2024);
    keys_ = new KeyMaterial(scheme_->keygen(prng));
  }
  static void TearDownTestSuite() {
    delete keys_;
    delete scheme_;
  }

  Ciphertext enc(double x) {
    return scheme_->encrypt(keys_->public_key, scheme_->encode(x, scheme_->top_level()), prng_);
  }
  double dec(const Ciphertext& ct) { return scheme_->decode(scheme_->decrypt(keys_->secret, ct)); }

  static Scheme* scheme_;
  static KeyMaterial* keys_;
  Prng prng_{77};
};

Scheme* SchemeTest::scheme_ = nullptr;
KeyMaterial* SchemeTest::keys_ = nullptr;

TEST(SchemeParams, DefaultsMatchDocumentedChain) {
  const SchemeParams p = SchemeParams::defaults();
  EXPECT_EQ(p.ring_degree, 8192u);
  EXPECT_EQ(p.chain_bits.size(), 12u);
  EXPECT_EQ(p.depth_budget(), 10);
  EXPECT_EQ(p.scale, std::ldexp(1.0, 40));
  const auto chain = resolve_chain(p);
  ASSERT_EQ(chain.size(), 12u);
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
    // Middle primes within a factor 2 of the scale.
    EXPECT_LT(std::abs(std::log2(static_cast<double>(chain[i])) - 40.0), 1.0);
  }
  EXPECT_NE(chain.front(), chain.back());
}

TEST(SchemeParams, RejectsBadChains) {
  SchemeParams p = small_params();
  p.chain_bits = {60, 60};
  EXPECT_THROW(Scheme{p}, ParameterError);
  p = small_params();
  p.primes = {17, 97, 193};  // not 1 mod 4096
  EXPECT_THROW(Scheme{p}, ParameterError);
  p = small_params();
  p.ring_degree = 1000;
  EXPECT_THROW(Scheme{p}, ParameterError);
}

TEST_F(SchemeTest, EncodeDecodeRoundTrip) {
  EXPECT_EQ(scheme_->decode(scheme_->encode(0.0, scheme_->top_level())), 0.0);
  EXPECT_NEAR(scheme_->decode(scheme_->encode(126.44, scheme_->top_level())), 126.44, 1e-4);
  for (double x : {1.0, -3.75, 1e-3, 5000.0}) {
    const double back = scheme_->decode(scheme_->encode(x, 2));
    EXPECT_LE(std::abs(back - x), std::abs(x) * std::ldexp(1.0, -20)) << x;
  }
}

TEST_F(SchemeTest, EncodeZeroPadsOtherSlots) {
  // Evaluating the plaintext at a root other than slot 0's (here psi^3)
  // must give ~0, while psi^1 gives x * scale.
  const PlaintextPoly pt = scheme_->encode(2.5, 0);
  RingElement m = pt.poly[0];
  m.to_coefficient();
  const std::size_t n = scheme_->degree();
  long double slot0 = 0, slot_other = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const long double c = m.modulus().to_signed(m[k]);
    slot0 += c * std::cos(M_PIl * k / n);
    slot_other += c * std::cos(3 * M_PIl * k / n);
  }
  EXPECT_NEAR(static_cast<double>(slot0 / pt.scale), 2.5, 1e-9);
  EXPECT_NEAR(static_cast<double>(slot_other / pt.scale), 0.0, 1e-9);
}

TEST_F(SchemeTest, EncodeOverflowIsEncodingError) {
  EXPECT_THROW(scheme_->encode(std::ldexp(1.0, 30), 0), EncodingError);
  EXPECT_THROW(scheme_->encode(std::nan(""), 1), EncodingError);
  EXPECT_THROW(scheme_->encode(1.0, scheme_->top_level() + 1), AlignmentError);
}

TEST_F(SchemeTest, EncryptDecryptRoundTrip) {
  EXPECT_NEAR(dec(enc(0.0)), 0.0, 1e-6);
  EXPECT_NEAR(dec(enc(120.5)), 120.5, 1e-4);
  const Ciphertext ct = enc(1.0);
  EXPECT_EQ(ct.level, scheme_->top_level());
  EXPECT_EQ(ct.size(), 2u);
}

TEST_F(SchemeTest, ForeignKeyCannotDecrypt) {
  Prng other(99);
  const KeyMaterial foreign = scheme_->keygen(other);
  const double wrong = scheme_->decode(scheme_->decrypt(foreign.secret, enc(120.5)));
  EXPECT_GT(std::abs(wrong - 120.5), 1.0);
}

TEST_F(SchemeTest, AddSubNegate) {
  EXPECT_NEAR(dec(scheme_->add(enc(2.0), enc(3.0))), 5.0, 1e-4);
  const Ciphertext x = enc(7.25);
  EXPECT_NEAR(dec(scheme_->add(x, enc(0.0))), 7.25, 1e-4);
  EXPECT_NEAR(dec(scheme_->sub(x, x)), 0.0, 1e-6);
  EXPECT_NEAR(dec(scheme_->negate(x)), -7.25, 1e-4);
}

TEST_F(SchemeTest, AddRejectsMisalignedOperands) {
  const Ciphertext a = enc(1.0);
  const Ciphertext b = scheme_->mod_switch_to(enc(1.0), 1);
  EXPECT_THROW(scheme_->add(a, b), AlignmentError);
  Ciphertext c = enc(1.0);
  c.scale *= 1.0 + 1e-6;
  EXPECT_THROW(scheme_->add(a, c), AlignmentError);
}

TEST_F(SchemeTest, MulPlain) {
  const int top = scheme_->top_level();
  const Ciphertext x = enc(100.0);
  const auto half = scheme_->encode(0.5, top);
  const Ciphertext y = scheme_->rescale(scheme_->mul_plain(x, half));
  EXPECT_NEAR(dec(y), 50.0, 1e-3);
  EXPECT_EQ(y.level, top - 1);
  EXPECT_NEAR(dec(scheme_->rescale(scheme_->mul_plain(x, scheme_->encode(1.0, top)))), 100.0,
              1e-4);
  EXPECT_NEAR(dec(scheme_->rescale(scheme_->mul_plain(x, scheme_->encode(0.0, top)))), 0.0, 1e-6);
}

TEST_F(SchemeTest, MulRelinearizes) {
  const Ciphertext p = scheme_->mul(enc(3.0), enc(4.0), keys_->relin);
  EXPECT_EQ(p.size(), 2u);
  EXPECT_NEAR(dec(scheme_->rescale(p)), 12.0, 1e-3);
  EXPECT_NEAR(dec(scheme_->rescale(scheme_->mul(enc(6.5), enc(0.0), keys_->relin))), 0.0, 1e-6);
  const Ciphertext t = scheme_->mul_no_relin(enc(3.0), enc(4.0));
  EXPECT_EQ(t.size(), 3u);
  EXPECT_NEAR(dec(t), 12.0, 1e-3);  // decrypts with s^2 before relinearization
}

TEST_F(SchemeTest, RescaleBookkeeping) {
  const int top = scheme_->top_level();
  const Ciphertext x = enc(9.0);
  const Ciphertext m = scheme_->mul_plain(x, scheme_->encode(1.0, top));
  const Ciphertext r = scheme_->rescale(m);
  EXPECT_EQ(r.level, top - 1);
  EXPECT_EQ(r.scale, m.scale / static_cast<double>(scheme_->prime_at(top)));
  EXPECT_NEAR(dec(r), 9.0, 1e-4);
  EXPECT_THROW(scheme_->rescale(scheme_->mod_switch_to(x, 0)), DepthError);
}

TEST_F(SchemeTest, ModSwitch) {
  const Ciphertext x = enc(5.0);
  const Ciphertext same = scheme_->mod_switch_to(x, x.level);
  EXPECT_EQ(same.level, x.level);
  EXPECT_NEAR(dec(same), 5.0, 1e-4);
  const Ciphertext low = scheme_->mod_switch_to(x, x.level - 3);
  EXPECT_EQ(low.level, x.level - 3);
  EXPECT_EQ(low.scale, x.scale);
  EXPECT_NEAR(dec(low), 5.0, 1e-4);
  EXPECT_THROW(scheme_->mod_switch_to(x, -1), AlignmentError);
  EXPECT_THROW(scheme_->mod_switch_to(low, x.level), AlignmentError);
}

TEST_F(SchemeTest, MultiplyAtLevelZeroIsDepthError) {
  const Ciphertext z = scheme_->mod_switch_to(enc(2.0), 0);
  EXPECT_THROW(scheme_->mul(z, z, keys_->relin), DepthError);
  EXPECT_THROW(scheme_->mul_plain(z, scheme_->encode(1.0, 0)), DepthError);
}

TEST_F(SchemeTest, RandomizedHomomorphism) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int i = 0; i < 40; ++i) {
    const double x = dist(rng), y = dist(rng);
    const Ciphertext cx = enc(x), cy = enc(y);
    ASSERT_NEAR(dec(scheme_->add(cx, cy)), x + y, 1e-3);
    ASSERT_NEAR(dec(scheme_->sub(cx, cy)), x - y, 1e-3);
    ASSERT_NEAR(dec(scheme_->rescale(scheme_->mul(cx, cy, keys_->relin))), x * y, 1e-3);
  }
}

TEST_F(SchemeTest, NoiseGrowsAlongMultiplicationChain) {
  // Mean error after k squarings of E(1) (value stays 1) is non-decreasing.
  constexpr int kTrials = 100;
  std::vector<double> err(scheme_->top_level() + 1, 0.0);
  for (int t = 0; t < kTrials; ++t) {
    Ciphertext c = enc(1.0);
    err[0] += std::abs(dec(c) - 1.0);
    for (int k = 1; k <= scheme_->top_level(); ++k) {
      c = scheme_->rescale(scheme_->mul(c, c, keys_->relin));
      err[k] += std::abs(dec(c) - 1.0);
    }
  }
  for (std::size_t k = 1; k < err.size(); ++k) EXPECT_GE(err[k], err[k - 1]) << k;
}

TEST(SchemeDepth, TenSquaringsAtDefaultParameters) {
  const Scheme scheme(SchemeParams::defaults());
  Prng prng(5);
  const KeyMaterial keys = scheme.keygen(prng);
  Ciphertext c = scheme.encrypt(keys.public_key, scheme.encode(1.01, scheme.top_level()), prng);
  for (int i = 0; i < 10; ++i) c = scheme.rescale(scheme.mul(c, c, keys.relin));
  EXPECT_EQ(c.level, 0);
  const double want = std::pow(1.01, 1024);
  const double got = scheme.decode(scheme.decrypt(keys.secret, c));
  EXPECT_LT(std::abs(got - want) / want, 0.005);
  EXPECT_THROW(scheme.mul(c, c, keys.relin), DepthError);
}

}  // namespace
}  // namespace hemacd
