#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cskpa/errors.hpp"
#include "cskpa/log_count.hpp"
#include "cskpa/ssp.hpp"
#include "cskpa/ssp_count.hpp"

namespace cskpa {

inline constexpr std::size_t kMaxEnumerationSize = 48;
inline constexpr std::uint64_t kDefaultSolutionBudget = 10'000'000;

/// Solutions of one instance, sorted ascending. When `exact` is false,
/// `members` is a deterministic subset of `budget` solutions while `count` is
/// still the exact total.
struct SolutionSet {
  std::size_t n = 0;
  std::vector<BitVector> members;
  bool exact = false;
  SolutionCount count;

  bool contains(BitVector b) const { return std::binary_search(members.begin(), members.end(), b); }
};

/// Number of solutions at each Hamming distance h = 0..n from a reference.
struct HammingHistogram {
  std::vector<std::uint64_t> counts;

  std::uint64_t at(std::size_t h) const { return h < counts.size() ? counts[h] : 0; }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
};

namespace detail {

template <typename Sum>
struct HalfEntry {
  Sum sum;
  std::uint32_t mask;
};

// All subset sums of weights[first, first + len) with popcount <= max_card,
// sorted by (sum, popcount).
template <typename Sum>
std::vector<HalfEntry<Sum>> half_table(const std::vector<std::uint64_t>& weights, std::size_t first, std::size_t len,
                                       std::size_t max_card) {
  const std::size_t size = std::size_t{1} << len;
  std::vector<Sum> sums(size, 0);
  for (std::size_t mask = 1; mask < size; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    sums[mask] = sums[mask & (mask - 1)] + static_cast<Sum>(weights[first + low]);
  }
  std::vector<HalfEntry<Sum>> out;
  out.reserve(max_card >= len ? size : size / 2);
  for (std::size_t mask = 0; mask < size; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) <= max_card) {
      out.push_back({sums[mask], static_cast<std::uint32_t>(mask)});
    }
  }
  std::sort(out.begin(), out.end(), [](const HalfEntry<Sum>& a, const HalfEntry<Sum>& b) {
    if (a.sum != b.sum) return a.sum < b.sum;
    const int pa = std::popcount(a.mask), pb = std::popcount(b.mask);
    return pa != pb ? pa < pb : a.mask < b.mask;
  });
  return out;
}

// Meet-in-the-middle join. Equal half-sums are grouped (and, with a
// cardinality constraint, split by popcount) so that the solution count is a
// sum of group-size products; bit vectors are materialized only up to budget.
template <typename Sum>
SolutionSet mitm_enumerate(const SspInstance& inst, std::optional<std::size_t> cardinality, std::uint64_t budget) {
  const std::size_t n = inst.size();
  const std::size_t left_len = n / 2;
  const std::size_t right_len = n - left_len;
  const std::size_t cap = cardinality.value_or(n);
  const auto left = half_table<Sum>(inst.weights, 0, left_len, cap);
  const auto right = half_table<Sum>(inst.weights, left_len, right_len, cap);

  struct Match {
    std::size_t l_begin, l_end, r_begin, r_end;
  };
  std::vector<Match> matches;
  BigInt total = 0;

  auto card = [](std::uint32_t m) { return static_cast<std::size_t>(std::popcount(m)); };
  auto sum_block_end = [](const auto& v, std::size_t i) {
    std::size_t j = i;
    while (j < v.size() && v[j].sum == v[i].sum) ++j;
    return j;
  };
  auto card_block_end = [&](const auto& v, std::size_t i, std::size_t end) {
    std::size_t j = i;
    while (j < end && card(v[j].mask) == card(v[i].mask)) ++j;
    return j;
  };

  const std::uint64_t target = inst.target;
  std::size_t li = 0;
  std::size_t rj = right.size();  // right scanned downward by sum
  while (li < left.size() && rj > 0) {
    const std::uint64_t ls = left[li].sum;
    if (ls > target) break;
    const std::uint64_t need = target - ls;
    // move rj so that right[rj-1].sum <= need
    while (rj > 0 && static_cast<std::uint64_t>(right[rj - 1].sum) > need) --rj;
    const std::size_t l_end = sum_block_end(left, li);
    if (rj == 0) break;
    if (static_cast<std::uint64_t>(right[rj - 1].sum) == need) {
      std::size_t r_begin = rj - 1;
      while (r_begin > 0 && right[r_begin - 1].sum == right[rj - 1].sum) --r_begin;
      const std::size_t r_end = rj;
      if (!cardinality) {
        matches.push_back({li, l_end, r_begin, r_end});
        total += BigInt(l_end - li) * BigInt(r_end - r_begin);
      } else {
        for (std::size_t a = li; a < l_end;) {
          const std::size_t a_end = card_block_end(left, a, l_end);
          const std::size_t want = *cardinality >= card(left[a].mask) ? *cardinality - card(left[a].mask) : n + 1;
          for (std::size_t b = r_begin; b < r_end;) {
            const std::size_t b_end = card_block_end(right, b, r_end);
            if (card(right[b].mask) == want) {
              matches.push_back({a, a_end, b, b_end});
              total += BigInt(a_end - a) * BigInt(b_end - b);
            }
            b = b_end;
          }
          a = a_end;
        }
      }
    }
    li = l_end;
  }

  SolutionSet out;
  out.n = n;
  out.count = {total};
  out.exact = total <= budget;
  const std::uint64_t keep = out.exact ? total.convert_to<std::uint64_t>() : budget;
  out.members.reserve(static_cast<std::size_t>(keep));
  for (const auto& mt : matches) {
    for (std::size_t a = mt.l_begin; a < mt.l_end && out.members.size() < keep; ++a) {
      for (std::size_t b = mt.r_begin; b < mt.r_end && out.members.size() < keep; ++b) {
        out.members.push_back(BitVector{left[a].mask} | (BitVector{right[b].mask} << left_len));
      }
    }
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

template <typename Fn>
SolutionSet dispatch_sum_width(const SspInstance& inst, Fn&& fn) {
  if (inst.weight_sum() <= std::numeric_limits<std::uint32_t>::max()) return fn(std::uint32_t{});
  return fn(std::uint64_t{});
}

}  // namespace detail

/// Complete solution set by meet-in-the-middle over two half tables of at
/// most 2^ceil(n/2) partial sums.
inline SolutionSet enumerate_solutions(const SspInstance& inst, std::uint64_t budget = kDefaultSolutionBudget) {
  inst.validate();
  detail::require(inst.size() <= kMaxEnumerationSize, "enumerate_solutions: n must be <= 48");
  return detail::dispatch_sum_width(inst, [&](auto tag) {
    return detail::mitm_enumerate<decltype(tag)>(inst, std::nullopt, budget);
  });
}

inline SolutionSet enumerate_gamma_solutions(const GammaSspInstance& inst,
                                             std::uint64_t budget = kDefaultSolutionBudget) {
  inst.validate();
  detail::require(inst.size() <= kMaxEnumerationSize, "enumerate_gamma_solutions: n must be <= 48");
  return detail::dispatch_sum_width(inst, [&](auto tag) {
    return detail::mitm_enumerate<decltype(tag)>(inst, static_cast<std::size_t>(inst.cardinality), budget);
  });
}

inline HammingHistogram hamming_histogram(const SolutionSet& set, BitVector reference) {
  detail::require(set.exact, "hamming_histogram: solution set is not exact");
  HammingHistogram hist;
  hist.counts.assign(set.n + 1, 0);
  for (auto b : set.members) ++hist.counts[static_cast<std::size_t>(std::popcount(b ^ reference))];
  return hist;
}

}  // namespace cskpa
