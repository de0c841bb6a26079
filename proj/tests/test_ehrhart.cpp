#include <gtest/gtest.h>

#include "cskpa/ehrhart.hpp"
#include "oracles.hpp"
#include "reference_ph.hpp"

using namespace cskpa;

TEST(BalancedCount, MatchesBruteForce) {
  for (unsigned h = 1; h <= 6; ++h) {
    for (unsigned bound = 1; bound <= 6; ++bound) {
      EXPECT_EQ(count_balanced_configs(h, bound), oracle::brute_balanced(h, bound)) << "h=" << h << " L=" << bound;
    }
  }
}

TEST(BalancedCount, SpotValues) {
  EXPECT_EQ(count_balanced_configs(2, 5), 10);
  EXPECT_EQ(count_balanced_configs(3, 4), 36);
  EXPECT_EQ(count_balanced_configs(4, 10), 4980);
}

TEST(BalancedCount, PatternDecompositionAgrees) {
  for (unsigned h = 2; h <= 9; ++h) {
    for (std::uint64_t bound : {3ULL, 11ULL, 20ULL}) {
      BigInt sum = 0;
      for (unsigned k = 0; k <= h; ++k) sum += detail::binomial(h, k) * balanced_configs_for_pattern(h, k, bound);
      EXPECT_EQ(sum, count_balanced_configs(h, bound));
    }
  }
}

TEST(BalancedCount, Budget) {
  EXPECT_THROW(count_balanced_configs(10, 200'000), BudgetExceeded);
  EXPECT_THROW(count_balanced_configs(0, 5), DomainError);
}

TEST(PhPolynomial, MatchesReferenceTable) {
  const auto& table = reference_ph_coefficients();
  for (unsigned h = 2; h <= 15; ++h) {
    const auto poly = fit_ph_polynomial(h);
    ASSERT_EQ(poly.degree(), static_cast<int>(h) - 1);
    EXPECT_EQ(poly.coefficient(0), 0);
    for (unsigned j = 1; j < h; ++j) {
      EXPECT_EQ(poly.coefficient(j), BigRational(table[h - 2][j - 1])) << "h=" << h << " j=" << j;
    }
  }
}

TEST(PhPolynomial, ValidForSmallL) {
  // The interpolant is fitted on L >= h but reproduces direct counts for every L >= 1.
  for (unsigned h = 2; h <= 10; ++h) {
    const auto poly = fit_ph_polynomial(h);
    for (std::uint64_t bound = 1; bound < h; ++bound) {
      EXPECT_EQ(poly(BigRational(bound)), BigRational(count_balanced_configs(h, bound)));
    }
  }
}

TEST(PhPolynomial, OddLeadingCoefficientsAlternate) {
  for (unsigned h = 3; h <= 12; ++h) {
    const auto poly = fit_ph_polynomial(h);
    EXPECT_GT(poly.coefficient(h - 1), 0);
    EXPECT_EQ(poly.coefficient(1) > 0, h % 2 == 0);
  }
}

TEST(PhTable, CachesAndBounds) {
  const PhTable table(6);
  EXPECT_EQ(&table(5), &table(5));
  EXPECT_EQ(table(4), fit_ph_polynomial(4));
  EXPECT_THROW(table(7), DomainError);
  EXPECT_THROW(PhTable(41), DomainError);
}

TEST(RationalPolynomial, Evaluation) {
  const RationalPolynomial p({BigRational(0), BigRational(14, 3), BigRational(-4), BigRational(16, 3)});
  EXPECT_EQ(p(BigRational(10)), 4980);
  EXPECT_EQ(RationalPolynomial({BigRational(1), BigRational(0)}).degree(), 0);
}
