#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "cskpa/attack_lab.hpp"
#include "cskpa/crypto.hpp"
#include "cskpa/predictor.hpp"
#include "cskpa/random.hpp"
#include "cskpa/ssp.hpp"
#include "cskpa/ssp_count.hpp"
#include "cskpa/ssp_enumerate.hpp"

namespace cskpa {

/// One random known pair: x uniform on {+-1..+-L}, A_j uniform antipodal.
struct RandomPair {
  Plaintext x;
  std::vector<std::int8_t> row;
  std::int64_t y = 0;
};

inline RandomPair random_pair(Engine& g, std::size_t n, std::int64_t bound) {
  std::vector<std::int64_t> x(n);
  std::vector<std::int8_t> row(n);
  std::int64_t y = 0;
  for (std::size_t l = 0; l < n; ++l) {
    x[l] = uniform_int(g, 1, bound) * ((g() & 1U) ? 1 : -1);
    row[l] = (g() & 1U) ? 1 : -1;
    y += row[l] * x[l];
  }
  return {Plaintext(std::move(x), bound), std::move(row), y};
}

/// A random pair for the second-class user: A1_j is A0_j with c uniformly
/// placed sign flips. Entries with A0_l x_l = L are redrawn so every subset-
/// sum weight is positive.
struct RandomFlippedPair {
  Plaintext x;
  std::vector<std::int8_t> a0_row;
  std::vector<std::int8_t> a1_row;
  std::int64_t y = 0;
};

inline RandomFlippedPair random_flipped_pair(Engine& g, std::size_t n, std::int64_t bound, std::size_t c) {
  std::vector<std::int64_t> x(n);
  std::vector<std::int8_t> a0(n);
  for (std::size_t l = 0; l < n; ++l) {
    a0[l] = (g() & 1U) ? 1 : -1;
    do {
      x[l] = uniform_int(g, 1, bound) * ((g() & 1U) ? 1 : -1);
    } while (a0[l] * x[l] == bound);
  }
  auto a1 = a0;
  for (auto l : sample_without_replacement(g, n, c)) a1[l] = static_cast<std::int8_t>(-a1[l]);
  std::int64_t y = 0;
  for (std::size_t l = 0; l < n; ++l) y += a1[l] * x[l];
  return {Plaintext(std::move(x), bound), std::move(a0), std::move(a1), y};
}

/// Sample mean of a count against its prediction at one grid point.
struct CountPoint {
  std::size_t n = 0;
  unsigned h = 0;  // Hamming distance, 0 when not applicable
  std::size_t instances = 0;
  double mean_count = 0.0;
  LogCount theory;

  double log2_gap() const { return std::log2(mean_count) - theory.log2(); }
};

struct CountProtocol {
  std::vector<std::size_t> ns;
  std::int64_t bound = 10'000;
  std::size_t instances = 50;
  std::uint64_t seed = 1;
};

namespace detail {

inline std::uint64_t instance_seed(const CountProtocol& p, std::size_t n, std::size_t i) {
  return derive_seed(p.seed, streams::kInstance, (static_cast<std::uint64_t>(n) << 32) | i);
}

}  // namespace detail

/// Eavesdropper counts: the complete solution set of each instance is
/// enumerated by meet-in-the-middle and its size averaged per n.
inline std::vector<CountPoint> eve_count_protocol(const CountProtocol& p) {
  std::vector<CountPoint> out;
  for (auto n : p.ns) {
    std::vector<double> counts(p.instances);
    parallel_for(p.instances, [&](std::size_t i) {
      auto g = make_engine(detail::instance_seed(p, n, i));
      const auto pair = random_pair(g, n, p.bound);
      const auto set = enumerate_solutions(eve_reduction(pair.x, pair.y, pair.row));
      counts[i] = set.count.exact.convert_to<double>();
    });
    double mean = 0.0;
    for (double c : counts) mean += c / static_cast<double>(p.instances);
    out.push_back({n, 0, p.instances, mean, s_eve_expected(n, static_cast<std::uint64_t>(p.bound)).count});
  }
  return out;
}

/// Eavesdropper counts split by Hamming distance from the true row, for
/// h = 2..max_h.
inline std::vector<CountPoint> hamming_count_protocol(const CountProtocol& p, unsigned max_h) {
  std::vector<CountPoint> out;
  for (auto n : p.ns) {
    std::vector<HammingHistogram> hist(p.instances);
    parallel_for(p.instances, [&](std::size_t i) {
      auto g = make_engine(detail::instance_seed(p, n, i));
      const auto pair = random_pair(g, n, p.bound);
      const auto inst = eve_reduction(pair.x, pair.y, pair.row);
      hist[i] = hamming_histogram(enumerate_solutions(inst), *inst.true_solution);
    });
    for (unsigned h = 2; h <= max_h && h <= n; ++h) {
      double mean = 0.0;
      for (const auto& hh : hist) mean += static_cast<double>(hh.at(h)) / static_cast<double>(p.instances);
      out.push_back({n, h, p.instances, mean, s_eve_hamming(n, static_cast<std::uint64_t>(p.bound), h).count});
    }
  }
  return out;
}

/// Second-class counts with c = round(r n) flips per row, counted by the
/// cardinality-constrained table.
inline std::vector<CountPoint> steve_count_protocol(const CountProtocol& p, double flips_per_row = 5.0) {
  std::vector<CountPoint> out;
  for (auto n : p.ns) {
    const auto c = static_cast<std::size_t>(std::llround(flips_per_row));
    const double r = static_cast<double>(c) / static_cast<double>(n);
    std::vector<double> counts(p.instances);
    parallel_for(p.instances, [&](std::size_t i) {
      auto g = make_engine(detail::instance_seed(p, n, i));
      const auto pair = random_flipped_pair(g, n, p.bound, c);
      const auto inst = steve_reduction(pair.x, pair.y, pair.a0_row, c, pair.a1_row);
      counts[i] = count_gamma_solutions(inst).exact.convert_to<double>();
    });
    double mean = 0.0;
    for (double v : counts) mean += v / static_cast<double>(p.instances);
    out.push_back({n, 0, p.instances, mean, s_steve_expected(n, static_cast<std::uint64_t>(p.bound), r).count});
  }
  return out;
}

}  // namespace cskpa
