#pragma once

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cskpa/errors.hpp"
#include "cskpa/random.hpp"

namespace cskpa {

/// Shift-register description. Taps are the exponents of the nonzero
/// non-constant terms of the connection polynomial C(x) = 1 + sum x^i, so the
/// register obeys s[t] = XOR_{i in taps} s[t - i]. Bit i of `seed` is s[i].
struct LfsrSpec {
  unsigned degree = 0;
  std::vector<unsigned> taps;  // sorted descending
  std::uint64_t seed = 0;

  friend bool operator==(const LfsrSpec&, const LfsrSpec&) = default;
};

/// Fibonacci LFSR over GF(2), degree <= 64.
class Lfsr {
public:
  explicit Lfsr(const LfsrSpec& spec) : degree_(spec.degree) {
    detail::require(degree_ <= 64, "Lfsr: degree must be <= 64");
    for (unsigned t : spec.taps) {
      detail::require(t >= 1 && t <= degree_, "Lfsr: tap outside [1, degree]");
      mask_ |= std::uint64_t{1} << (degree_ - t);
    }
    window_ = degree_ == 64 ? spec.seed : (spec.seed & ((std::uint64_t{1} << degree_) - 1));
  }

  bool next() {
    if (degree_ == 0) return false;
    const bool out = window_ & 1U;
    const std::uint64_t fresh = std::popcount(window_ & mask_) & 1U;
    window_ = (window_ >> 1) | (fresh << (degree_ - 1));
    return out;
  }

  void discard(std::uint64_t count) {
    for (std::uint64_t i = 0; i < count; ++i) next();
  }

  /// Current window; bit i is the (i+1)-th upcoming output.
  std::uint64_t state() const { return window_; }

private:
  unsigned degree_;
  std::uint64_t mask_ = 0;
  std::uint64_t window_ = 0;
};

namespace detail {

// GF(2)[x] arithmetic modulo a polynomial of degree <= 64 given without its
// leading term (`low`), with the leading x^deg implicit.
struct Gf2Modulus {
  unsigned deg;
  std::uint64_t low;

  std::uint64_t times_x(std::uint64_t a) const {
    const bool carry = (a >> (deg - 1)) & 1U;
    a = deg == 64 ? (a << 1) : ((a << 1) & ((std::uint64_t{1} << deg) - 1));
    return carry ? a ^ low : a;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t acc = 0;
    for (unsigned i = deg; i-- > 0;) {
      acc = times_x(acc);
      if ((b >> i) & 1U) acc ^= a;
    }
    return acc;
  }
  std::uint64_t pow_x(std::uint64_t e) const {
    std::uint64_t result = 1;
    std::uint64_t base = deg == 1 ? low : 2;  // x mod f
    while (e) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }
};

__extension__ using u128 = unsigned __int128;

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1U) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline std::uint64_t pollard_rho(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t x = 2, y = 2, d = 1;
    auto f = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

inline void prime_factors(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  for (std::uint64_t p = 2; p < 1000; ++p) {
    if (n % p == 0) {
      prime_factors(p, out);
      prime_factors(n / p, out);
      return;
    }
  }
  const std::uint64_t d = pollard_rho(n);
  prime_factors(d, out);
  prime_factors(n / d, out);
}

}  // namespace detail

/// True when the connection polynomial with these taps is primitive, i.e. the
/// register has the maximal period 2^degree - 1.
inline bool is_maximal_length(unsigned degree, std::span<const unsigned> taps) {
  if (degree == 0 || degree > 64) return false;
  if (std::find(taps.begin(), taps.end(), degree) == taps.end()) return false;
  // Reciprocal of C(x): x^deg + sum_{i in taps, i<deg} x^(deg-i) + 1. Same primitivity.
  std::uint64_t low = 1;
  for (unsigned t : taps) {
    if (t < degree) low |= std::uint64_t{1} << (degree - t);
  }
  const detail::Gf2Modulus f{degree, low};
  const std::uint64_t order = degree == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << degree) - 1;
  if (f.pow_x(order) != 1) return false;
  std::vector<std::uint64_t> primes;
  detail::prime_factors(order, primes);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (std::uint64_t q : primes) {
    if (f.pow_x(order / q) == 1) return false;
  }
  return true;
}

/// Keyed bit source for matrix expansion: seed plus tap polynomial.
class Keystream {
public:
  /// Maximal-length degree-32 register, taps {32, 22, 2, 1}.
  static Keystream default_lfsr(std::uint64_t seed) { return Keystream(32, {32, 22, 2, 1}, seed); }

  Keystream(unsigned degree, std::vector<unsigned> taps, std::uint64_t seed) {
    detail::require(degree >= 1 && degree <= 64, "Keystream: degree must be in [1, 64]");
    std::sort(taps.begin(), taps.end(), std::greater<>());
    taps.erase(std::unique(taps.begin(), taps.end()), taps.end());
    spec_ = LfsrSpec{degree, std::move(taps), seed};
    if (degree < 64) spec_.seed &= (std::uint64_t{1} << degree) - 1;
    detail::require(spec_.seed != 0, "Keystream: all-zero seed yields a constant stream");
    (void)Lfsr(spec_);  // validates taps
    maximal_ = is_maximal_length(degree, spec_.taps);
    if (maximal_) {
      period_ = degree == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << degree) - 1;
    } else {
      detail::require(degree <= 20, "Keystream: non-maximal taps are only supported up to degree 20");
      period_ = measure_period();
    }
  }

  const LfsrSpec& spec() const { return spec_; }
  unsigned degree() const { return spec_.degree; }
  bool maximal() const { return maximal_; }
  std::optional<std::uint64_t> period() const { return period_; }
  Lfsr stream() const { return Lfsr(spec_); }

  /// Number of distinct m x n matrices before the stream repeats.
  std::uint64_t matrix_period(std::uint64_t m, std::uint64_t n) const {
    return m * n == 0 ? ~std::uint64_t{0} : period_ / (m * n);
  }

  std::vector<std::uint8_t> bits(std::uint64_t count) const {
    Lfsr s = stream();
    std::vector<std::uint8_t> out(count);
    for (auto& b : out) b = s.next();
    return out;
  }

  std::string seed_hex() const {
    std::ostringstream os;
    os << std::hex << spec_.seed;
    return os.str();
  }

private:
  std::uint64_t measure_period() const {
    Lfsr s = stream();
    std::vector<std::uint32_t> seen(std::size_t{1} << spec_.degree, 0);
    std::uint32_t step = 1;
    std::uint64_t w = s.state();
    while (seen[w] == 0) {
      seen[w] = step++;
      s.next();
      w = s.state();
    }
    return step - seen[w];
  }

  LfsrSpec spec_;
  bool maximal_ = false;
  std::uint64_t period_ = 0;
};

/// Unbounded-period key for experiments that need more bits than a short
/// register provides.
class EngineKey {
public:
  explicit EngineKey(std::uint64_t seed) : seed_(seed) {}

  class Stream {
  public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}
    bool next() {
      if (left_ == 0) {
        word_ = engine_();
        left_ = 64;
      }
      const bool b = word_ & 1U;
      word_ >>= 1;
      --left_;
      return b;
    }
    void discard(std::uint64_t count) {
      for (std::uint64_t i = 0; i < count; ++i) next();
    }

  private:
    Engine engine_;
    std::uint64_t word_ = 0;
    unsigned left_ = 0;
  };

  std::optional<std::uint64_t> period() const { return std::nullopt; }
  Stream stream() const { return Stream(seed_); }
  std::uint64_t seed() const { return seed_; }

private:
  std::uint64_t seed_;
};

template <typename K>
concept KeyMaterial = requires(const K& k) {
  { k.period() } -> std::convertible_to<std::optional<std::uint64_t>>;
  { k.stream().next() } -> std::convertible_to<bool>;
};

/// Shortest LFSR generating `bits` (Berlekamp-Massey over GF(2)). The returned
/// seed holds the first `degree` observed bits, so regenerating from it
/// reproduces the whole input.
inline LfsrSpec berlekamp_massey(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  std::vector<std::uint8_t> c(n + 1, 0), b(n + 1, 0), t;
  c[0] = b[0] = 1;
  std::size_t len = 0;
  std::size_t m = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t d = bits[i] & 1U;
    for (std::size_t k = 1; k <= len; ++k) d ^= c[k] & bits[i - k];
    if (d == 0) {
      ++m;
      continue;
    }
    if (2 * len <= i) {
      t = c;
      for (std::size_t k = 0; k + m <= n; ++k) c[k + m] ^= b[k];
      len = i + 1 - len;
      b = std::move(t);
      m = 1;
    } else {
      for (std::size_t k = 0; k + m <= n; ++k) c[k + m] ^= b[k];
      ++m;
    }
  }
  detail::require(len <= 64, "berlekamp_massey: linear complexity exceeds 64");
  LfsrSpec spec;
  spec.degree = static_cast<unsigned>(len);
  for (std::size_t k = len; k >= 1; --k) {
    if (c[k]) spec.taps.push_back(static_cast<unsigned>(k));
  }
  for (std::size_t i = 0; i < len; ++i) spec.seed |= std::uint64_t{bits[i] & 1U} << i;
  return spec;
}

inline std::vector<std::uint8_t> regenerate(const LfsrSpec& spec, std::size_t count) {
  Lfsr s(spec);
  std::vector<std::uint8_t> out(count);
  for (auto& b : out) b = s.next();
  return out;
}

}  // namespace cskpa
