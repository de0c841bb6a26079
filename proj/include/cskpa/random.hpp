#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace cskpa {

/// SplitMix64 finalizer; used to turn (master, stream, index) triples into
/// well-separated engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-mode seed splitting. Streams separate unrelated uses of randomness
/// in one experiment (plaintexts, keys, searches); indices enumerate tasks.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) + index);
}

namespace streams {
inline constexpr std::uint64_t kPlaintext = 0x706c61696eULL;
inline constexpr std::uint64_t kMatrix = 0x6d6174726978ULL;
inline constexpr std::uint64_t kFlips = 0x666c697073ULL;
inline constexpr std::uint64_t kSearch = 0x736561726368ULL;
inline constexpr std::uint64_t kInstance = 0x696e7374ULL;
}  // namespace streams

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine{seed}; }

/// Uniform integer in [lo, hi]; std::uniform_int_distribution is avoided so
/// streams are identical across standard libraries.
inline std::int64_t uniform_int(Engine& g, std::int64_t lo, std::int64_t hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(g());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v;
  do {
    v = g();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % range);
}

/// k distinct indices from {0..n-1}, uniformly, by partial Fisher-Yates.
inline std::vector<std::size_t> sample_without_replacement(Engine& g, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = static_cast<std::size_t>(uniform_int(g, static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

/// Standard normal deviate (Marsaglia polar method).
inline double normal(Engine& g) {
  for (;;) {
    const double u = 2.0 * (static_cast<double>(g() >> 11) * 0x1.0p-53) - 1.0;
    const double v = 2.0 * (static_cast<double>(g() >> 11) * 0x1.0p-53) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

}  // namespace cskpa
