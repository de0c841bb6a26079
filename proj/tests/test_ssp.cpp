#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "cskpa/ssp.hpp"
#include "cskpa/ssp_count.hpp"
#include "cskpa/ssp_enumerate.hpp"
#include "oracles.hpp"

using namespace cskpa;

namespace {

SspInstance make(std::vector<std::uint64_t> u, std::uint64_t target) {
  SspInstance inst;
  inst.weights = std::move(u);
  inst.target = target;
  return inst;
}

GammaSspInstance make_gamma(std::vector<std::uint64_t> u, std::uint64_t target, std::uint64_t gamma) {
  GammaSspInstance inst;
  inst.weights = std::move(u);
  inst.target = target;
  inst.cardinality = gamma;
  return inst;
}

}  // namespace

TEST(EveReduction, WorkedExample) {
  const Plaintext x({3, -5, 2}, 5);
  const std::vector<std::int8_t> row{1, 1, -1};
  const auto inst = eve_reduction(x, -4, std::span<const std::int8_t>(row));
  EXPECT_EQ(inst.weights, (std::vector<std::uint64_t>{3, 5, 2}));
  EXPECT_EQ(inst.target, 3U);
  EXPECT_EQ(*inst.true_solution, 0b001U);
  EXPECT_EQ(inst.back_map(*inst.true_solution), row);
}

TEST(EveReduction, AllOnesHasUniqueSolution) {
  const Plaintext x(std::vector<std::int64_t>(10, 1), 1);
  const auto inst = eve_reduction(x, 10);
  EXPECT_EQ(inst.target, 10U);
  const auto set = enumerate_solutions(inst);
  ASSERT_EQ(set.members.size(), 1U);
  EXPECT_EQ(set.members[0], (1U << 10) - 1);
}

TEST(EveReduction, Errors) {
  EXPECT_THROW(eve_reduction(Plaintext({1, 0}, 1), 1), ZeroEntryError);
  EXPECT_THROW(eve_reduction(Plaintext({1, 2}, 2), 0), InconsistentPairError);  // parity
  EXPECT_THROW(eve_reduction(Plaintext({1, 2}, 2), 5), InconsistentPairError);  // beyond sum
}

TEST(EveReduction, RoundTripAndIndistinguishability) {
  std::mt19937_64 g(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = oracle::random_pair(g, 14, 50);
    const Plaintext x(p.x, 50);
    const auto inst = eve_reduction(x, p.y, std::span<const std::int8_t>(p.row));
    EXPECT_EQ(inst.back_map(*inst.true_solution), p.row);
    if (trial % 50 == 0) {
      for (auto b : enumerate_solutions(inst).members) {
        const auto cand = inst.back_map(b);
        EXPECT_EQ(row_dot(cand, x.entries()), p.y);
      }
    }
  }
}

TEST(SteveReduction, WorkedExample) {
  const Plaintext x({2, 3, -1}, 3);
  const std::vector<std::int8_t> a0{1, -1, 1}, a1{1, 1, 1};
  const auto y = row_dot(a1, x.entries());
  const auto inst = steve_reduction(x, y, a0, 1, std::span<const std::int8_t>(a1));
  EXPECT_EQ(inst.weights, (std::vector<std::uint64_t>{1, 6, 4}));
  EXPECT_EQ(inst.target, 6U);
  EXPECT_EQ(inst.cardinality, 1U);
  EXPECT_EQ(inst.weight_bound, 6U);
  EXPECT_EQ(*inst.true_solution, 0b010U);
  EXPECT_EQ(inst.back_map(0b010), a1);
}

TEST(SteveReduction, NoFlipsGivesZeroVector) {
  const Plaintext x({2, 1, -1}, 3);
  const std::vector<std::int8_t> a0{1, -1, 1};
  const auto inst = steve_reduction(x, row_dot(a0, x.entries()), a0, 0);
  EXPECT_EQ(count_gamma_solutions(inst).exact, 1);
  const auto set = enumerate_gamma_solutions(inst);
  ASSERT_EQ(set.members.size(), 1U);
  EXPECT_EQ(set.members[0], 0U);
  EXPECT_EQ(inst.back_map(0), a0);
}

TEST(SteveReduction, Errors) {
  const std::vector<std::int8_t> a0{1, -1, 1};
  EXPECT_THROW(steve_reduction(Plaintext({0, 1, 1}, 3), 0, a0, 1), ZeroEntryError);
  EXPECT_THROW(steve_reduction(Plaintext({3, 1, 1}, 3), 3, a0, 0), DomainError);  // A0_0 x_0 = L
  EXPECT_THROW(steve_reduction(Plaintext({2, 1, 1}, 3), 3, a0, 1), InconsistentPairError);  // odd
  const std::vector<std::int8_t> a1{-1, 1, 1};
  const Plaintext x({2, 1, 1}, 3);
  EXPECT_THROW(steve_reduction(x, row_dot(a1, x.entries()), a0, 1, std::span<const std::int8_t>(a1)),
               InconsistentPairError);  // differs in two entries
}

TEST(SteveReduction, RoundTrip) {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = oracle::random_pair(g, 16, 40);
    std::vector<std::int8_t> a1 = p.row;
    const std::size_t c = g() % 5;
    std::vector<std::size_t> idx(16);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), g);
    for (std::size_t i = 0; i < c; ++i) a1[idx[i]] = static_cast<std::int8_t>(-a1[idx[i]]);
    std::vector<std::int64_t> xs = p.x;
    for (std::size_t l = 0; l < 16; ++l) {
      if (p.row[l] * xs[l] == 40) xs[l] = -xs[l];  // keep every weight L - A0_l x_l positive
    }
    const Plaintext x(xs, 40);
    const auto y = row_dot(a1, x.entries());
    const auto inst = steve_reduction(x, y, p.row, c, std::span<const std::int8_t>(a1));
    EXPECT_EQ(inst.back_map(*inst.true_solution), a1);
    EXPECT_TRUE(inst.verifies(*inst.true_solution));
  }
}

TEST(Count, HandExamples) {
  EXPECT_EQ(count_solutions(make({1, 1, 2}, 2)).exact, 2);
  EXPECT_EQ(count_solutions(make({1, 2, 4, 8}, 5)).exact, 1);
  EXPECT_EQ(count_solutions(make({1, 2, 4, 8}, 16)).exact, 0);
  EXPECT_EQ(count_solutions(make({}, 0)).exact, 1);
  EXPECT_EQ(count_gamma_solutions(make_gamma({1, 1, 2}, 2, 2)).exact, 1);
  EXPECT_EQ(count_gamma_solutions(make_gamma({1, 1, 2}, 4, 3)).exact, 1);
  EXPECT_EQ(count_gamma_solutions(make_gamma({1, 1, 2}, 3, 3)).exact, 0);
}

TEST(Count, BudgetGuard) {
  EXPECT_THROW(count_solutions(make({60, 60}, 60), 100), BudgetExceeded);
  EXPECT_THROW(count_gamma_solutions(make_gamma({60, 60, 60}, 60, 1), 100), BudgetExceeded);
}

TEST(Count, MatchesExhaustiveScan) {
  std::mt19937_64 g(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + g() % 13;
    const std::uint64_t bound = trial < 30 ? 10000 : 20;
    std::vector<std::uint64_t> u(n);
    for (auto& w : u) w = 1 + g() % bound;
    std::uint64_t total = 0;
    for (auto w : u) total += w;
    const std::uint64_t target = g() % (total + 1);
    EXPECT_EQ(count_solutions(make(u, target)).exact, oracle::exhaustive_count(u, target));
    const unsigned gamma = static_cast<unsigned>(g() % (n + 1));
    EXPECT_EQ(count_gamma_solutions(make_gamma(u, target, gamma)).exact, oracle::exhaustive_count(u, target, gamma));
  }
}

TEST(Count, CardinalitySlicesSumToTotal) {
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::uint64_t> u(18);
    for (auto& w : u) w = 1 + g() % 30;
    const std::uint64_t target = 120 + g() % 60;
    BigInt sum = 0;
    for (std::uint64_t gamma = 0; gamma <= u.size(); ++gamma) sum += count_gamma_solutions(make_gamma(u, target, gamma)).exact;
    EXPECT_EQ(sum, count_solutions(make(u, target)).exact);
  }
}

TEST(Count, WideInstanceUsesBigCells) {
  // 64 unit weights: C(64, 32) solutions at target 32.
  const auto c = count_solutions(make(std::vector<std::uint64_t>(64, 1), 32));
  EXPECT_EQ(c.exact, BigInt("1832624140942590534"));
  const auto c70 = count_gamma_solutions(make_gamma(std::vector<std::uint64_t>(64, 2), 64, 32));
  EXPECT_EQ(c70.exact, BigInt("1832624140942590534"));
}

TEST(Enumerate, HandExample) {
  const auto set = enumerate_solutions(make({1, 1, 2}, 2));
  EXPECT_TRUE(set.exact);
  EXPECT_EQ(set.members, (std::vector<BitVector>{0b011, 0b100}));
}

TEST(Enumerate, MatchesExhaustiveAndCount) {
  std::mt19937_64 g(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + g() % 20;
    std::vector<std::uint64_t> u(n);
    for (auto& w : u) w = 1 + g() % (trial % 2 ? 8 : 1000);
    std::uint64_t total = 0;
    for (auto w : u) total += w;
    const std::uint64_t target = g() % (total + 1);
    const auto set = enumerate_solutions(make(u, target));
    EXPECT_TRUE(set.exact);
    EXPECT_EQ(set.members, oracle::exhaustive_solutions(u, target));
    EXPECT_EQ(set.count.exact, count_solutions(make(u, target)).exact);
    const unsigned gamma = static_cast<unsigned>(g() % (n + 1));
    const auto gset = enumerate_gamma_solutions(make_gamma(u, target, gamma));
    EXPECT_EQ(gset.members, oracle::exhaustive_solutions(u, target, gamma));
  }
}

TEST(Enumerate, PartialWhenOverBudget) {
  const auto inst = make(std::vector<std::uint64_t>(20, 1), 10);  // C(20, 10) = 184756
  const auto set = enumerate_solutions(inst, 1000);
  EXPECT_FALSE(set.exact);
  EXPECT_EQ(set.members.size(), 1000U);
  EXPECT_EQ(set.count.exact, 184756);
  for (auto b : set.members) EXPECT_TRUE(inst.verifies(b));
  EXPECT_THROW(hamming_histogram(set, 0), DomainError);
}

TEST(Enumerate, SizeLimit) {
  EXPECT_THROW(enumerate_solutions(make(std::vector<std::uint64_t>(49, 1), 3)), DomainError);
}

TEST(Enumerate, ContainsEmbeddedSolution) {
  std::mt19937_64 g(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = oracle::random_pair(g, 30, 10000);
    const auto inst = eve_reduction(Plaintext(p.x, 10000), p.y, std::span<const std::int8_t>(p.row));
    const auto set = enumerate_solutions(inst);
    EXPECT_TRUE(set.contains(*inst.true_solution));
    EXPECT_EQ(set.count.exact, count_solutions(inst).exact);
  }
}

TEST(Histogram, Basics) {
  SolutionSet set;
  set.n = 5;
  set.exact = true;
  set.members = {0b10110};
  EXPECT_EQ(hamming_histogram(set, 0b10110).counts, (std::vector<std::uint64_t>{1, 0, 0, 0, 0, 0}));
  set.members = {0b01001, 0b10110};
  const auto h = hamming_histogram(set, 0b10110);
  EXPECT_EQ(h.at(0), 1U);
  EXPECT_EQ(h.at(5), 1U);
  EXPECT_EQ(h.total(), 2U);
}
