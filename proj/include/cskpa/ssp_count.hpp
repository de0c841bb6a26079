#pragma once

#include <cstdint>
#include <vector>

#include "cskpa/errors.hpp"
#include "cskpa/log_count.hpp"
#include "cskpa/ssp.hpp"

namespace cskpa {

/// Exact solution count with a log-domain view for reporting.
struct SolutionCount {
  BigInt exact;

  LogCount log() const { return LogCount::from_big(exact); }
  friend bool operator==(const SolutionCount&, const SolutionCount&) = default;
};

/// Default ceiling on sum(u) (unconstrained) or (cardinality + 1) * (target + 1)
/// (constrained) for the pseudo-polynomial tables.
inline constexpr std::uint64_t kDefaultTableBudget = 100'000'000;

namespace detail {

template <typename Cell>
BigInt subset_sum_count(const std::vector<std::uint64_t>& u, std::uint64_t target) {
  std::vector<Cell> ways(target + 1, Cell{0});
  ways[0] = 1;
  std::uint64_t reach = 0;
  for (auto w : u) {
    reach = std::min(target, reach + w);
    if (w > target) continue;
    for (std::uint64_t s = reach; s >= w; --s) ways[s] += ways[s - w];
  }
  return BigInt(ways[target]);
}

template <typename Cell>
BigInt gamma_subset_sum_count(const std::vector<std::uint64_t>& u, std::uint64_t target, std::uint64_t gamma) {
  const std::uint64_t stride = target + 1;
  std::vector<Cell> ways((gamma + 1) * stride, Cell{0});
  ways[0] = 1;
  std::uint64_t used = 0;
  for (auto w : u) {
    ++used;
    if (w > target) continue;
    for (std::uint64_t k = std::min(used, gamma); k >= 1; --k) {
      Cell* cur = ways.data() + k * stride;
      const Cell* prev = ways.data() + (k - 1) * stride;
      for (std::uint64_t s = target; s >= w; --s) cur[s] += prev[s - w];
    }
  }
  return BigInt(ways[gamma * stride + target]);
}

}  // namespace detail

/// Number of b in {0,1}^n with sum b_l u_l = target, by a pseudo-polynomial
/// table over partial sums.
inline SolutionCount count_solutions(const SspInstance& inst, std::uint64_t budget = kDefaultTableBudget) {
  inst.validate();
  const std::uint64_t total = inst.weight_sum();
  if (total > budget) throw BudgetExceeded("count_solutions: sum of weights " + std::to_string(total) + " exceeds budget");
  if (inst.target > total) return {BigInt(0)};
  // Complementing b maps target to total - target; use the smaller table.
  const std::uint64_t target = std::min(inst.target, total - inst.target);
  if (inst.size() < 64) return {detail::subset_sum_count<std::uint64_t>(inst.weights, target)};
  return {detail::subset_sum_count<BigInt>(inst.weights, target)};
}

/// As count_solutions with the extra constraint popcount(b) = cardinality.
inline SolutionCount count_gamma_solutions(const GammaSspInstance& inst, std::uint64_t budget = kDefaultTableBudget) {
  inst.validate();
  const std::uint64_t total = inst.weight_sum();
  if (inst.target > total) return {BigInt(0)};
  std::uint64_t target = inst.target;
  std::uint64_t gamma = inst.cardinality;
  if (total - target < target) {
    target = total - target;
    gamma = inst.size() - gamma;
  }
  const auto cells = static_cast<long double>(gamma + 1) * static_cast<long double>(target + 1);
  if (cells > static_cast<long double>(budget)) {
    throw BudgetExceeded("count_gamma_solutions: table of " + std::to_string(static_cast<double>(cells)) +
                         " cells exceeds budget");
  }
  if (inst.size() < 64) return {detail::gamma_subset_sum_count<std::uint64_t>(inst.weights, target, gamma)};
  return {detail::gamma_subset_sum_count<BigInt>(inst.weights, target, gamma)};
}

}  // namespace cskpa
