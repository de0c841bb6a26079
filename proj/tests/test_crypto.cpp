#include <gtest/gtest.h>

#include <random>

#include "cskpa/crypto.hpp"
#include "cskpa/keystream.hpp"
#include "oracles.hpp"

using namespace cskpa;

TEST(Keystream, FourBitRegisterMatchesHandStepping) {
  const Keystream key(4, {4, 1}, 0b1001);
  const std::vector<std::uint8_t> expected{1, 0, 0, 1, 0, 0, 0, 1};
  EXPECT_EQ(key.bits(8), expected);
  EXPECT_EQ(key.bits(40), oracle::lfsr_bits(4, {4, 1}, 0b1001, 40));
  EXPECT_TRUE(key.maximal());
  EXPECT_EQ(*key.period(), 15U);
}

TEST(Keystream, DefaultRegisterIsMaximal) {
  const auto key = Keystream::default_lfsr(0xdeadbeef);
  EXPECT_TRUE(key.maximal());
  EXPECT_EQ(*key.period(), 0xffffffffULL);
  EXPECT_EQ(key.bits(500), oracle::lfsr_bits(32, {32, 22, 2, 1}, 0xdeadbeef, 500));
}

TEST(Keystream, MaximalityAgreesWithMeasuredPeriod) {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned degree = 2 + static_cast<unsigned>(g() % 11);
    std::vector<unsigned> taps{degree};
    for (unsigned i = 1; i < degree; ++i) {
      if (g() % 3 == 0) taps.push_back(i);
    }
    const bool maximal = oracle::lfsr_period(degree, taps, 1) == (1ULL << degree) - 1;
    EXPECT_EQ(is_maximal_length(degree, taps), maximal) << "degree " << degree;
    const Keystream key(degree, taps, 1);
    EXPECT_EQ(*key.period(), oracle::lfsr_period(degree, taps, 1));
  }
}

TEST(Keystream, RejectsZeroSeed) { EXPECT_THROW(Keystream(4, {4, 1}, 0), DomainError); }

TEST(BerlekampMassey, RecoversFourBitRegisterFromEightBits) {
  const auto spec = berlekamp_massey(Keystream(4, {4, 1}, 0b1001).bits(8));
  EXPECT_EQ(spec.degree, 4U);
  EXPECT_EQ(spec.taps, (std::vector<unsigned>{4, 1}));
  EXPECT_EQ(spec.seed, 0b1001U);
}

TEST(BerlekampMassey, AllZeroHasComplexityZero) {
  const std::vector<std::uint8_t> zeros(20, 0);
  EXPECT_EQ(berlekamp_massey(zeros).degree, 0U);
  EXPECT_EQ(regenerate(berlekamp_massey(zeros), 10), std::vector<std::uint8_t>(10, 0));
}

TEST(BerlekampMassey, RoundTripOnDefaultRegister) {
  const auto key = Keystream::default_lfsr(0x1234567);
  const auto observed = key.bits(64);
  const auto spec = berlekamp_massey(observed);
  EXPECT_EQ(spec.degree, 32U);
  EXPECT_EQ(spec.taps, key.spec().taps);
  EXPECT_EQ(regenerate(spec, 2000), key.bits(2000));
}

TEST(ExpandMatrix, FirstWindowOfFourBitRegister) {
  const Keystream key(4, {4, 1}, 0b1001);
  const auto a = expand_matrix(key, 1, 4, 0);
  EXPECT_EQ(a, AntipodalMatrix(1, 4, {1, -1, -1, 1}));
}

TEST(ExpandMatrix, EmptyShapeConsumesNothing) {
  const Keystream key(4, {4, 1}, 0b1001);
  const auto a = expand_matrix(key, 0, 4, 0);
  EXPECT_EQ(a.rows(), 0U);
  EXPECT_TRUE(a.data().empty());
}

TEST(ExpandMatrix, ConsecutiveWindowsAreDisjoint) {
  const auto key = Keystream::default_lfsr(99);
  const auto bits = oracle::lfsr_bits(32, {32, 22, 2, 1}, 99, 8);
  const auto a0 = expand_matrix(key, 2, 2, 0);
  const auto a1 = expand_matrix(key, 2, 2, 1);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a0.data()[i], bits[i] ? 1 : -1);
    EXPECT_EQ(a1.data()[i], bits[4 + i] ? 1 : -1);
  }
  EXPECT_EQ(expand_matrix(key, 2, 2, 1), a1);
}

TEST(ExpandMatrix, PeriodExhaustion) {
  const Keystream key(4, {4, 1}, 1);
  EXPECT_NO_THROW(expand_matrix(key, 1, 5, 2));
  EXPECT_THROW(expand_matrix(key, 1, 5, 3), PeriodExhausted);
}

TEST(Flips, SingleFlip) {
  const auto a0 = AntipodalMatrix::from_rows({{1, 1}, {1, 1}});
  const FlipSet f(2, 2, {{0, 1}});
  EXPECT_EQ(apply_flips(a0, f), AntipodalMatrix::from_rows({{1, -1}, {1, 1}}));
  EXPECT_EQ(apply_flips(a0, FlipSet(2, 2, {})), a0);
}

TEST(Flips, InvolutionAndHammingDistance) {
  const EngineKey mk(3), fk(4);
  for (std::size_t c : {0UL, 1UL, 17UL, 200UL}) {
    const auto a0 = expand_matrix(mk, 10, 20, 0);
    const auto f = draw_flip_set(fk, 10, 20, c);
    EXPECT_EQ(f.size(), c);
    const auto a1 = apply_flips(a0, f);
    EXPECT_EQ(a1.hamming_distance(a0), c);
    EXPECT_EQ(apply_flips(a1, f), a0);
  }
}

TEST(Flips, RejectsBadPairs) {
  EXPECT_THROW(FlipSet(2, 2, {{2, 0}}), DomainError);
  EXPECT_THROW(FlipSet(2, 2, {{0, 0}, {0, 0}}), DomainError);
}

TEST(Flips, PerRowCountsAreExact) {
  const std::vector<std::size_t> counts{0, 3, 7, 1};
  const auto f = draw_flip_set_per_row(EngineKey(5), 4, 16, counts);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(f.row_counts()[j], counts[j]);
  EXPECT_NEAR(f.density(), 11.0 / 64.0, 1e-15);
}

TEST(Flips, UniformOverPositions) {
  std::vector<int> hits(16, 0);
  for (std::uint64_t s = 1; s <= 4000; ++s) {
    const auto f = draw_flip_set(EngineKey(s), 4, 4, 2);
    for (auto [j, l] : f.pairs()) ++hits[j * 4 + l];
  }
  double chi2 = 0.0;
  for (int h : hits) chi2 += (h - 500.0) * (h - 500.0) / 500.0;
  EXPECT_LT(chi2, 30.6);  // 15 dof, 1%
}

TEST(Encode, SmallCases) {
  EXPECT_EQ(encode(Plaintext({1, -1}, 1), AntipodalMatrix::from_rows({{1, 1}})).entries, std::vector<std::int64_t>{0});
  EXPECT_EQ(encode(Plaintext({3, -5, 2}, 5), AntipodalMatrix::from_rows({{1, 1, -1}})).entries,
            std::vector<std::int64_t>{-4});
}

TEST(Encode, DimensionMismatch) {
  EXPECT_THROW(encode(Plaintext({1, 2, 3}, 3), AntipodalMatrix::from_rows({{1, 1}})), DomainError);
}

TEST(Encode, ExactAndLinear) {
  std::mt19937_64 g(11);
  const auto a = expand_matrix(EngineKey(12), 8, 30, 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::int64_t> x1(30), x2(30), xs(30);
    for (std::size_t l = 0; l < 30; ++l) {
      x1[l] = static_cast<std::int64_t>(g() % 2001) - 1000;
      x2[l] = static_cast<std::int64_t>(g() % 2001) - 1000;
      xs[l] = x1[l] + x2[l];
    }
    const auto y1 = encode(Plaintext(x1, 1000), a);
    const auto y2 = encode(Plaintext(x2, 1000), a);
    const auto ys = encode(Plaintext(xs, 2000), a);
    for (std::size_t j = 0; j < 8; ++j) {
      std::int64_t backward = 0;
      for (std::size_t l = 30; l-- > 0;) backward += a(j, l) * x1[l];
      EXPECT_EQ(y1[j], backward);
      EXPECT_EQ(ys[j], y1[j] + y2[j]);
      EXPECT_LE(std::abs(y1[j]), 30 * 1000);
    }
  }
}

TEST(Encode, WordWidths) {
  const Plaintext x({1, -1, 2, 127}, 127);
  EXPECT_EQ(x.word_bits(), 8U);
  EXPECT_EQ(encode(x, AntipodalMatrix::from_rows({{1, 1, 1, 1}})).word_bits, 10U);
}

TEST(Plaintext, RejectsOutOfRange) {
  EXPECT_THROW(Plaintext({4}, 3), DomainError);
  EXPECT_FALSE(Plaintext({1, 0}, 3).strictly_nonzero());
}
