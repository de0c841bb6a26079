#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "cskpa/errors.hpp"
#include "cskpa/log_count.hpp"

namespace cskpa {

inline constexpr std::uint64_t kBalancedTableBudget = 1'000'000;
inline constexpr unsigned kMaxFitDegree = 40;

/// Polynomial with exact rational coefficients; coefficients[j] multiplies L^j.
class RationalPolynomial {
public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<BigRational> coefficients) : c_(std::move(coefficients)) { trim(); }

  const std::vector<BigRational>& coefficients() const { return c_; }
  BigRational coefficient(std::size_t j) const { return j < c_.size() ? c_[j] : BigRational(0); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  BigRational operator()(const BigRational& x) const {
    BigRational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<BigRational> c_;
};

namespace detail {

// compositions[j][s] = number of ways to write s as an ordered sum of j parts in {1..L}.
template <typename Int = BigInt>
std::vector<std::vector<Int>> composition_counts(unsigned parts, std::uint64_t bound) {
  const std::uint64_t smax = parts * bound;
  std::vector<std::vector<Int>> n(parts + 1, std::vector<Int>(smax + 1, Int(0)));
  n[0][0] = 1;
  std::vector<Int> prefix(smax + 2);
  for (unsigned j = 1; j <= parts; ++j) {
    prefix[0] = 0;
    for (std::uint64_t s = 0; s <= smax; ++s) prefix[s + 1] = prefix[s] + n[j - 1][s];
    for (std::uint64_t s = j; s <= j * bound; ++s) {
      const std::uint64_t lo = s > bound ? s - bound : 0;  // previous partial sum in [s - L, s - 1]
      n[j][s] = prefix[s] - prefix[lo];
    }
  }
  return n;
}

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline void check_balanced_budget(unsigned h, std::uint64_t bound) {
  detail::require(h >= 1 && h <= 64, "count_balanced_configs: h must be in [1, 64]");
  detail::require(bound >= 1, "count_balanced_configs: L must be positive");
  if (static_cast<std::uint64_t>(h) * bound > kBalancedTableBudget) {
    throw BudgetExceeded("count_balanced_configs: h * L exceeds the table budget");
  }
}

}  // namespace detail

/// Pairs (u, b) in {1..L}^h x {0,1}^h restricted to one sign pattern with
/// `zeros` zero bits that satisfy sum_{b_l = 0} u_l = sum_{b_l = 1} u_l.
inline BigInt balanced_configs_for_pattern(unsigned h, unsigned zeros, std::uint64_t bound) {
  detail::check_balanced_budget(h, bound);
  detail::require(zeros <= h, "balanced_configs_for_pattern: zeros exceeds h");
  const auto n = detail::composition_counts(h, bound);
  BigInt acc = 0;
  for (std::size_t s = 0; s < n[0].size(); ++s) acc += n[zeros][s] * n[h - zeros][s];
  return acc;
}

namespace detail {

// Coefficients of (sum_{v=1..L} z^v + z^-v)^j; entry s + j L holds z^s.
inline std::vector<BigInt> symmetric_power(unsigned j, std::uint64_t bound, std::vector<BigInt> prev, unsigned from) {
  for (unsigned step = from; step < j; ++step) {
    const std::uint64_t old_half = step * bound;
    std::vector<BigInt> prefix(prev.size() + 1, BigInt(0));
    for (std::size_t i = 0; i < prev.size(); ++i) prefix[i + 1] = prefix[i] + prev[i];
    auto window = [&](std::int64_t lo, std::int64_t hi) {  // sum of prev over exponents [lo, hi]
      lo = std::max<std::int64_t>(lo, -static_cast<std::int64_t>(old_half));
      hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(old_half));
      if (lo > hi) return BigInt(0);
      return BigInt(prefix[static_cast<std::size_t>(hi + static_cast<std::int64_t>(old_half)) + 1] -
                    prefix[static_cast<std::size_t>(lo + static_cast<std::int64_t>(old_half))]);
    };
    const auto half = static_cast<std::int64_t>(old_half + bound);
    const auto l = static_cast<std::int64_t>(bound);
    std::vector<BigInt> next(static_cast<std::size_t>(2 * half + 1));
    for (std::int64_t e = -half; e <= half; ++e) {
      next[static_cast<std::size_t>(e + half)] = window(e - l, e - 1) + window(e + 1, e + l);
    }
    prev = std::move(next);
  }
  return prev;
}

}  // namespace detail

/// P_h(L): number of (u, b) in {1..L}^h x {0,1}^h with
/// sum_{b_l = 0} u_l - sum_{b_l = 1} u_l = 0. Each position contributes a
/// signed part in {-L..-1} u {1..L}, so P_h(L) is the constant term of
/// (sum_{v=1..L} z^v + z^-v)^h, taken as the inner product of the two half powers.
inline BigInt count_balanced_configs(unsigned h, std::uint64_t bound) {
  detail::check_balanced_budget(h, bound);
  const unsigned a = h / 2;
  const auto low = detail::symmetric_power(a, bound, {BigInt(1)}, 0);
  const auto high = h % 2 ? detail::symmetric_power(a + 1, bound, low, a) : low;
  // coefficients are symmetric, so z^s in one half pairs with z^s in the other
  const std::size_t off = bound;  // high is L wider on each side when h is odd
  BigInt total = 0;
  for (std::size_t i = 0; i < low.size(); ++i) total += low[i] * high[h % 2 ? i + off : i];
  return total;
}

/// Exact P_h as a polynomial in L with zero constant term. P_h(L) / L has
/// degree h - 2, so it is interpolated in Newton form through the consecutive
/// nodes L = h, ..., 2h - 2, expanded to monomials, and cross-checked against
/// direct counts at L = 2h - 1 and 2h.
inline RationalPolynomial fit_ph_polynomial(unsigned h) {
  detail::require(h >= 2 && h <= kMaxFitDegree, "fit_ph_polynomial: h must be in [2, 40]");
  const unsigned k = h - 1;  // nodes
  std::vector<BigRational> diff(k);
  for (unsigned i = 0; i < k; ++i) diff[i] = BigRational(count_balanced_configs(h, h + i), BigInt(h + i));
  // diff[i] becomes the i-th forward difference at the first node
  for (unsigned order = 1; order < k; ++order) {
    for (unsigned i = k - 1; i >= order; --i) diff[i] -= diff[i - 1];
  }
  std::vector<BigRational> quotient(k, BigRational(0));  // coefficients of P_h(L) / L
  std::vector<BigInt> basis{BigInt(1)};                   // prod_{i < j} (L - h - i)
  BigInt factorial = 1;
  for (unsigned j = 0; j < k; ++j) {
    if (j > 0) factorial *= j;
    const BigRational c = diff[j] / BigRational(factorial);
    for (std::size_t q = 0; q < basis.size(); ++q) quotient[q] += c * BigRational(basis[q]);
    std::vector<BigInt> next(basis.size() + 1, BigInt(0));
    const BigInt shift = h + j;
    for (std::size_t q = 0; q < basis.size(); ++q) {
      next[q + 1] += basis[q];
      next[q] -= shift * basis[q];
    }
    basis = std::move(next);
  }
  std::vector<BigRational> coeffs(h, BigRational(0));
  for (unsigned q = 0; q < k; ++q) coeffs[q + 1] = quotient[q];
  RationalPolynomial poly(std::move(coeffs));

  for (std::uint64_t holdout : {2ULL * h - 1, 2ULL * h}) {
    if (poly(BigRational(holdout)) != BigRational(count_balanced_configs(h, holdout))) {
      throw VerificationError("fit_ph_polynomial: interpolant for h = " + std::to_string(h) +
                              " disagrees with the direct count at L = " + std::to_string(holdout));
    }
  }
  return poly;
}

/// Memoized P_h polynomials, h = 2..max_h.
class PhTable {
public:
  explicit PhTable(unsigned max_h = 15) : max_h_(max_h) {
    detail::require(max_h >= 2 && max_h <= kMaxFitDegree, "PhTable: max_h must be in [2, 40]");
  }

  unsigned max_h() const { return max_h_; }

  const RationalPolynomial& operator()(unsigned h) const {
    detail::require(h >= 2 && h <= max_h_, "PhTable: h = " + std::to_string(h) + " outside the table");
    std::lock_guard lock(mutex_);
    auto it = cache_.find(h);
    if (it == cache_.end()) it = cache_.emplace(h, fit_ph_polynomial(h)).first;
    return it->second;
  }

  /// Process-wide table large enough for the cumulative Hamming predictions.
  static const PhTable& shared() {
    static const PhTable table(kMaxFitDegree);
    return table;
  }

private:
  unsigned max_h_;
  mutable std::mutex mutex_;
  mutable std::map<unsigned, RationalPolynomial> cache_;
};

}  // namespace cskpa
