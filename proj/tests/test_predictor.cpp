#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cskpa/log_count.hpp"
#include "cskpa/predictor.hpp"

using namespace cskpa;

namespace {

// Midpoint rule with many panels, independent of the library quadrature.
template <typename F>
double midpoint(F f, int panels = 200000) {
  double s = 0.0;
  for (int i = 0; i < panels; ++i) s += f((i + 0.5) / panels);
  return s / panels;
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(z)); }

}  // namespace

TEST(Fermi, AgainstMidpointRule) {
  for (double a : {-7.0, -1.0, 0.0, 0.5, 3.0, 20.0}) {
    for (double b : {-2.0, 0.0, 1.3}) {
      for (int p = 0; p <= 2; ++p) {
        const double f = midpoint([&](double x) { return std::pow(x, p) * logistic(a * x - b); });
        const double g = midpoint([&](double x) {
          const double s = logistic(a * x - b);
          return std::pow(x, p) * s * (1.0 - s);
        });
        EXPECT_NEAR(fermi_f(p, a, b), f, 1e-9);
        EXPECT_NEAR(fermi_g(p, a, b), g, 1e-9);
      }
    }
  }
}

TEST(Fermi, DerivativeIdentities) {
  const double h = 1e-5;
  for (double a : {-3.0, 0.7, 9.0}) {
    for (double b : {-1.0, 0.4}) {
      for (int p = 0; p <= 1; ++p) {
        const double da = (fermi_f(p, a + h, b) - fermi_f(p, a - h, b)) / (2 * h);
        const double db = (fermi_f(p, a, b + h) - fermi_f(p, a, b - h)) / (2 * h);
        EXPECT_NEAR(da, -fermi_g(p + 1, a, b), 1e-8);
        EXPECT_NEAR(db, fermi_g(p, a, b), 1e-8);
      }
    }
  }
}

TEST(SolveA, KnownPoints) {
  EXPECT_NEAR(solve_a(0.25).a, 0.0, 1e-10);
  EXPECT_GT(solve_a(0.1).a, 0.0);
  EXPECT_NEAR(solve_a(0.1).a, -solve_a(0.4).a, 1e-8);
  for (double tau : {0.01, 0.2, 0.33, 0.49}) EXPECT_NEAR(fermi_f(1, solve_a(tau).a, 0.0), tau, 1e-10);
  EXPECT_THROW(solve_a(0.5), DomainError);
  EXPECT_THROW(solve_a(0.0), DomainError);
}

TEST(SolveAB, ResidualAndSymmetricPoint) {
  const auto mid = solve_ab(0.15, 0.3);
  EXPECT_NEAR(mid.a, 0.0, 1e-9);
  EXPECT_NEAR(mid.b, std::log(0.3 / 0.7), 1e-9);
  for (auto [tau, r] : {std::pair{0.01, 0.05}, {0.3, 0.5}, {0.2, 0.6}, {0.4, 0.6}}) {
    const auto sp = solve_ab(tau, r);
    EXPECT_LE(sp.residual, 1e-9);
    EXPECT_NEAR(fermi_f(0, sp.a, sp.b), r, 1e-9);
    EXPECT_NEAR(fermi_f(1, sp.a, sp.b), tau, 1e-9);
  }
  EXPECT_THROW(solve_ab(0.001, 0.1), DomainError);
}

TEST(EveProfile, PeakValueMatchesClosedForm) {
  // At tau = 1/4: a = 0, G_2 = 1/12, S = 2^n / (L sqrt(pi n / 6)).
  const auto p = s_eve_profile(0.25, 100, 1000);
  const double expect = 100.0 - std::log2(1000.0) - 0.5 * std::log2(std::numbers::pi * 100.0 / 6.0);
  EXPECT_NEAR(p.value.log2(), expect, 1e-9);
  EXPECT_NEAR(s_eve_profile(0.1, 100, 1000).value.log2(), s_eve_profile(0.4, 100, 1000).value.log2(), 1e-7);
}

TEST(EveExpected, SpotValue) {
  const auto s = s_eve_expected(4096, 128).count;
  const auto d = s.decimal(3);
  EXPECT_EQ(d.exponent, 1229);
  EXPECT_NEAR(d.mantissa, 1.2458, 0.001);
  EXPECT_EQ(s.str(), "1.25e1229");
}

TEST(EveExpected, QuadratureAgrees) {
  for (std::uint64_t n : {32ULL, 96ULL}) {
    EXPECT_NEAR(s_eve_expected_by_quadrature(n, 1000).count.log2(), s_eve_expected(n, 1000).count.log2(), 0.05);
  }
}

TEST(GaussianWidth, CloseToOneOverTwelveN) {
  const double v = gaussian_profile_variance(64, 100);
  EXPECT_NEAR(v * 12.0 * 64.0, 1.0, 0.1);
}

TEST(HammingPrediction, SmallCasesExact) {
  // n = 3, L = 5, h = 2: C(3,2) P_2(5) / (2 * 5)^2 = 3 * 10 / 100.
  EXPECT_EQ(s_eve_hamming_exact(3, 5, 2), BigRational(3, 10));
  EXPECT_EQ(s_eve_hamming_exact(10, 5, 1), 0);
  EXPECT_FALSE(s_eve_hamming(10, 5, 3).asymptotic);
}

TEST(HammingPrediction, CumulativeSpotValues) {
  EXPECT_NEAR(s_eve_hamming_cumulative(4096, 256, 16).count.log10(), std::log10(1.9496e41), 1e-3);
  EXPECT_NEAR(s_eve_hamming_cumulative(4096, 256, 32).count.log10(), std::log10(6.3305e76), 1e-3);
}

TEST(SteveExpected, SpotValueAndQuadrature) {
  const auto s = s_steve_expected(4096, 128, 0.03).count;
  EXPECT_EQ(s.decimal(3).exponent, 234);
  EXPECT_NEAR(s.decimal(3).mantissa, 6.24, 0.01);
  EXPECT_NEAR(s_steve_expected_by_quadrature(48, 5000, 5.0 / 48).count.log2(),
              s_steve_expected(48, 5000, 5.0 / 48).count.log2(), 0.1);
  EXPECT_THROW(s_steve_expected(10, 5, 0.05), DomainError);  // n r < 1
}

TEST(SteveProfile, PeakNearHalfDensity) {
  const double r = 0.2;
  const double peak = s_steve_profile(r / 2, 64, 100, r).value.log2();
  EXPECT_GT(peak, s_steve_profile(r / 2 - 0.01, 64, 100, r).value.log2());
  EXPECT_GT(peak, s_steve_profile(r / 2 + 0.01, 64, 100, r).value.log2());
}

TEST(KeyLifetime, Values) {
  const auto t = key_lifetime(s_eve_expected(4096, 128).count, 0.9999);
  EXPECT_EQ(t.decimal(3).exponent, 1225);
  EXPECT_NEAR(t.decimal(3).mantissa, 1.2459, 0.001);
  // S = 2: T = ln(zeta) / ln(1/2)
  EXPECT_NEAR(key_lifetime(LogCount::from_value(2.0), 0.25).value(), 2.0, 1e-12);
  EXPECT_THROW(key_lifetime(LogCount::from_value(0.5), 0.5), DomainError);
}

TEST(LogCount, Arithmetic) {
  const auto a = LogCount::from_value(3.0), b = LogCount::from_value(5.0);
  EXPECT_NEAR((a + b).value(), 8.0, 1e-12);
  EXPECT_NEAR((a * b).value(), 15.0, 1e-12);
  EXPECT_NEAR((b / a).value(), 5.0 / 3.0, 1e-12);
  EXPECT_TRUE((LogCount::zero() + LogCount::zero()).is_zero());
  EXPECT_EQ(LogCount::from_big(BigInt(1) << 5000).log2(), 5000.0);
  EXPECT_EQ(LogCount::from_log10(1229.0954).str(), "1.25e1229");
  EXPECT_EQ(LogCount::from_value(9.996).str(), "1.00e1");
  EXPECT_LT(a, b);
}
