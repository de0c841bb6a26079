#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "cskpa/crypto.hpp"
#include "cskpa/errors.hpp"
#include "cskpa/log_count.hpp"
#include "cskpa/predictor.hpp"
#include "cskpa/random.hpp"
#include "cskpa/recovery.hpp"

namespace cskpa {

inline constexpr std::uint64_t kMaxExpectedDraws = 10'000'000;

/// Worker count from CSKPA_THREADS, else the hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("CSKPA_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count) on a small pool. The first exception is
/// rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned threads = thread_count()) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct RowSearch {
  std::vector<std::int8_t> row;
  std::uint64_t draws = 0;
};

/// Expected rejection-sampling draws for one eavesdropper row, 2^n / S_Eve.
inline double eve_expected_draws(std::uint64_t n, std::uint64_t bound) {
  return std::exp2(static_cast<double>(n) - s_eve_expected(n, bound).count.log2());
}

/// Expected draws for one second-class row, C(n, c) / S_Steve(n, L, c / n).
inline double steve_expected_draws(std::uint64_t n, std::uint64_t bound, std::uint64_t c) {
  if (c == 0 || c == n) return 1.0;
  const double log2_subsets =
      (std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(c) + 1) -
       std::lgamma(static_cast<double>(n - c) + 1)) / std::log(2.0);
  const double s = s_steve_expected(n, bound, static_cast<double>(c) / static_cast<double>(n)).count.log2();
  return std::exp2(log2_subsets - std::max(s, 0.0));
}

namespace detail {

inline void check_expected_draws(double expected, const char* who) {
  if (expected > static_cast<double>(kMaxExpectedDraws)) {
    throw BudgetExceeded(std::string(who) + ": about " + std::to_string(expected) +
                         " expected draws per row exceeds 1e7; lower n or L");
  }
}

}  // namespace detail

/// Uniform antipodal rows until one satisfies A_j x = y_j. With `greedy`, each
/// draw is repaired by flipping the entry that most reduces |y_j - A_j x|
/// until no flip helps; repaired rows are not uniform over the solutions.
inline RowSearch eve_search_row(const Plaintext& x, std::int64_t y_j, std::uint64_t seed, std::uint64_t max_draws,
                                bool greedy = false) {
  if (!x.strictly_nonzero()) throw ZeroEntryError("eve_search_row: plaintext has a zero entry");
  const std::size_t n = x.size();
  const std::int64_t total = x.abs_sum();
  if (y_j > total || y_j < -total || ((y_j + total) & 1) != 0) {
    throw InconsistentPairError("eve_search_row: y_j is not reachable by any antipodal row");
  }
  std::int64_t signed_sum = 0;
  for (auto v : x.entries()) signed_sum += v;
  // A_l = 2 bit_l - 1, so A x = 2 sum_{bit_l = 1} x_l - sum x.
  const std::int64_t want = (y_j + signed_sum) / 2;

  auto g = make_engine(seed);
  std::vector<std::int8_t> row(n);
  std::uint64_t word = 0;
  for (std::uint64_t draw = 1; draw <= max_draws; ++draw) {
    std::int64_t acc = 0;
    for (std::size_t l = 0; l < n; ++l) {
      if (l % 64 == 0) word = g();
      const bool bit = (word >> (l % 64)) & 1U;
      row[l] = bit ? 1 : -1;
      if (bit) acc += x[l];
    }
    if (acc == want) return {row, draw};
    if (greedy) {
      std::int64_t residual = y_j - (2 * acc - signed_sum);
      for (;;) {
        std::size_t best = n;
        std::int64_t best_abs = residual < 0 ? -residual : residual;
        for (std::size_t l = 0; l < n; ++l) {
          const std::int64_t r = residual + 2 * row[l] * x[l];
          const std::int64_t ra = r < 0 ? -r : r;
          if (ra < best_abs) {
            best_abs = ra;
            best = l;
          }
        }
        if (best == n) break;
        residual += 2 * row[best] * x[best];
        row[best] = static_cast<std::int8_t>(-row[best]);
        if (residual == 0) return {row, draw};
      }
    }
  }
  throw SearchExhausted("eve_search_row: no verifying row within " + std::to_string(max_draws) + " draws");
}

/// Uniform c_j-subsets of positions to flip in A0_j until the flipped row
/// satisfies A_j x = y_j.
inline RowSearch steve_search_row(const Plaintext& x, std::int64_t y_j, std::span<const std::int8_t> a0_row,
                                  std::size_t c_j, std::uint64_t seed, std::uint64_t max_draws) {
  if (!x.strictly_nonzero()) throw ZeroEntryError("steve_search_row: plaintext has a zero entry");
  const std::size_t n = x.size();
  detail::require(a0_row.size() == n, "steve_search_row: A0 row length mismatch");
  detail::require(c_j <= n, "steve_search_row: c_j exceeds n");
  const std::int64_t eps = y_j - row_dot(a0_row, x.entries());
  if ((eps & 1) != 0) throw InconsistentPairError("steve_search_row: y_j - A0_j x is odd");
  std::vector<std::int8_t> row(a0_row.begin(), a0_row.end());
  if (c_j == 0) {
    if (eps != 0) throw InconsistentPairError("steve_search_row: c_j = 0 but y_j != A0_j x");
    return {row, 1};
  }
  // Flipping l changes the product by -2 A0_l x_l; the flipped terms must sum to -eps / 2.
  std::vector<std::int64_t> term(n);
  for (std::size_t l = 0; l < n; ++l) term[l] = a0_row[l] * x[l];
  const std::int64_t want = -eps / 2;

  auto g = make_engine(seed);
  std::vector<std::size_t> pool(n);
  for (std::uint64_t draw = 1; draw <= max_draws; ++draw) {
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < c_j; ++i) {
      const auto k = static_cast<std::size_t>(uniform_int(g, static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
      std::swap(pool[i], pool[k]);
      acc += term[pool[i]];
    }
    if (acc == want) {
      for (std::size_t i = 0; i < c_j; ++i) row[pool[i]] = static_cast<std::int8_t>(-row[pool[i]]);
      return {row, draw};
    }
  }
  throw SearchExhausted("steve_search_row: no verifying flip set within " + std::to_string(max_draws) + " draws");
}

/// Probability that T independent attacks all miss, (1 - 1/S)^T, in the log
/// domain so that S and T may be astronomically large.
inline double repeated_attack_failure(LogCount expected_solutions, LogCount attacks) {
  detail::require(expected_solutions.log2() > 0.0, "repeated_attack_failure: need S > 1");
  if (attacks.is_zero()) return 1.0;
  const double s2 = expected_solutions.log2();
  const double log2_hazard = s2 > 49.9 ? -s2 : std::log2(-std::log1p(-std::exp2(-s2)));  // log2(-ln(1 - 1/S))
  return std::exp(-std::exp2(attacks.log2() + log2_hazard));
}

enum class Attacker { eve, steve };

struct KpaConfig {
  Attacker attacker = Attacker::eve;
  std::size_t n = 64;
  std::size_t m = 32;
  std::size_t k = 6;
  std::int64_t bound = 127;  // B_x = 8
  double eta = 0.03;
  std::size_t candidates = 500;
  std::uint64_t master_seed = 1;
  std::uint64_t max_draws = kMaxExpectedDraws;
  bool greedy = false;
};

struct KpaExperimentRecord {
  std::size_t candidate_id = 0;
  std::vector<std::uint64_t> row_draws;
  std::uint64_t draws_total = 0;
  double rsnr1_db = 0.0;  // known pair decoded with the candidate
  double rsnr2_db = 0.0;  // verification pair decoded with the candidate
  std::size_t distance_to_true = 0;
};

struct KpaSummary {
  std::size_t candidates = 0;
  double mean_rsnr1_db = 0.0;
  double mean_rsnr2_db = 0.0;
  double std_rsnr2_db = 0.0;
  double correlation = 0.0;
  double nominal_second_class_db = 0.0;  // verification pair decoded with A0
  double control_rsnr1_db = 0.0;         // both pairs decoded with the true matrix
  double control_rsnr2_db = 0.0;
  double mean_draws_per_row = 0.0;
  double expected_draws_per_row = 0.0;
  std::size_t exact_candidates = 0;  // candidates equal to the true matrix
  std::size_t flips = 0;
};

struct KpaExperiment {
  KpaConfig config;
  std::vector<KpaExperimentRecord> records;
  KpaSummary summary;
};

/// Pearson correlation; NaN when either sample has zero variance.
inline double pearson(std::span<const double> a, std::span<const double> b) {
  detail::require(a.size() == b.size() && a.size() >= 2, "pearson: need two equal-length samples of size >= 2");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

/// LFSR key from an arbitrary 64-bit seed (zero states are skipped).
inline Keystream lfsr_key(std::uint64_t seed) {
  auto s = seed & 0xffffffffULL;
  return Keystream::default_lfsr(s == 0 ? 1 : s);
}

/// Attack, recovery and verification: a known pair (x', y') and a
/// verification pair (x'', y'') share the true matrix A1 = flips(A0). Each
/// candidate is assembled row by row from verifying searches, then used to
/// decode both pairs.
inline KpaExperiment run_kpa_experiment(const KpaConfig& cfg) {
  detail::require(cfg.m < cfg.n && cfg.k >= 1 && cfg.k <= cfg.m, "run_kpa_experiment: need 1 <= k <= m < n");
  detail::require(cfg.candidates >= 1, "run_kpa_experiment: need at least one candidate");
  detail::require(cfg.n <= 64, "run_kpa_experiment: n must be <= 64");

  const auto basis = SparseBasis::dct(cfg.n);
  const auto a0 = expand_matrix(lfsr_key(derive_seed(cfg.master_seed, streams::kMatrix)), cfg.m, cfg.n, 0);
  const auto flips = draw_flip_set(lfsr_key(derive_seed(cfg.master_seed, streams::kFlips)), cfg.m, cfg.n,
                                   flips_for_density(cfg.m, cfg.n, cfg.eta));
  const auto a1 = apply_flips(a0, flips);
  const auto known = synth_sparse(cfg.n, cfg.k, cfg.bound, basis, derive_seed(cfg.master_seed, streams::kPlaintext, 0));
  const auto verify = synth_sparse(cfg.n, cfg.k, cfg.bound, basis, derive_seed(cfg.master_seed, streams::kPlaintext, 1));
  const auto y1 = encode(known.x, a1);
  const auto y2 = encode(verify.x, a1);
  const Eigen::VectorXd x1 = to_vector(known.x.entries());
  const Eigen::VectorXd x2 = to_vector(verify.x.entries());
  const Eigen::VectorXd y1v = to_vector(y1.entries);
  const Eigen::VectorXd y2v = to_vector(y2.entries);
  const RecoveryOptions opt{.sparsity = cfg.k};

  KpaExperiment out;
  out.config = cfg;
  auto& sum = out.summary;
  sum.flips = flips.size();
  sum.control_rsnr1_db = *recover(y1v, to_matrix(a1), basis, opt, &x1).rsnr_db;
  sum.control_rsnr2_db = *recover(y2v, to_matrix(a1), basis, opt, &x2).rsnr_db;
  sum.nominal_second_class_db = *recover(y2v, to_matrix(a0), basis, opt, &x2).rsnr_db;

  const auto bound = static_cast<std::uint64_t>(cfg.bound);
  double expected = 0.0;
  for (std::size_t j = 0; j < cfg.m; ++j) {
    const double e = cfg.attacker == Attacker::eve ? eve_expected_draws(cfg.n, bound)
                                                   : steve_expected_draws(cfg.n, bound, flips.row_counts()[j]);
    if (!cfg.greedy) detail::check_expected_draws(e, "run_kpa_experiment");
    expected += e;
  }
  sum.expected_draws_per_row = expected / static_cast<double>(cfg.m);

  out.records.resize(cfg.candidates);
  parallel_for(cfg.candidates, [&](std::size_t id) {
    KpaExperimentRecord rec;
    rec.candidate_id = id;
    std::vector<std::vector<std::int8_t>> rows(cfg.m);
    for (std::size_t j = 0; j < cfg.m; ++j) {
      const auto seed = derive_seed(cfg.master_seed, streams::kSearch, id * cfg.m + j);
      auto hit = cfg.attacker == Attacker::eve
                     ? eve_search_row(known.x, y1[j], seed, cfg.max_draws, cfg.greedy)
                     : steve_search_row(known.x, y1[j], a0.row(j), flips.row_counts()[j], seed, cfg.max_draws);
      rows[j] = std::move(hit.row);
      rec.row_draws.push_back(hit.draws);
      rec.draws_total += hit.draws;
    }
    const auto cand = AntipodalMatrix::from_rows(rows);
    if (encode(known.x, cand).entries != y1.entries) {
      throw VerificationError("run_kpa_experiment: candidate does not reproduce the known ciphertext");
    }
    const Eigen::MatrixXd cm = to_matrix(cand);
    rec.rsnr1_db = *recover(y1v, cm, basis, opt, &x1).rsnr_db;
    rec.rsnr2_db = *recover(y2v, cm, basis, opt, &x2).rsnr_db;
    rec.distance_to_true = cand.hamming_distance(a1);
    out.records[id] = std::move(rec);
  });

  std::vector<double> r1, r2;
  double draws = 0.0;
  for (const auto& rec : out.records) {
    r1.push_back(rec.rsnr1_db);
    r2.push_back(rec.rsnr2_db);
    draws += static_cast<double>(rec.draws_total);
    if (rec.distance_to_true == 0) ++sum.exact_candidates;
  }
  const double c = static_cast<double>(out.records.size());
  sum.candidates = out.records.size();
  for (std::size_t i = 0; i < r1.size(); ++i) {
    sum.mean_rsnr1_db += r1[i] / c;
    sum.mean_rsnr2_db += r2[i] / c;
  }
  double var = 0.0;
  for (double v : r2) var += (v - sum.mean_rsnr2_db) * (v - sum.mean_rsnr2_db);
  sum.std_rsnr2_db = r2.size() > 1 ? std::sqrt(var / (c - 1.0)) : 0.0;
  sum.correlation = r1.size() >= 2 ? pearson(r1, r2) : std::numeric_limits<double>::quiet_NaN();
  sum.mean_draws_per_row = draws / (c * static_cast<double>(cfg.m));
  return out;
}

}  // namespace cskpa
