#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <span>
#include <utility>
#include <vector>

#include "cskpa/errors.hpp"
#include "cskpa/keystream.hpp"

namespace cskpa {

/// ceil(log2(v)) for v >= 1.
inline unsigned ceil_log2(std::uint64_t v) { return v <= 1 ? 0U : static_cast<unsigned>(std::bit_width(v - 1)); }

/// Integer plaintext x with |x_l| <= L.
class Plaintext {
public:
  Plaintext(std::vector<std::int64_t> entries, std::int64_t bound) : entries_(std::move(entries)), bound_(bound) {
    detail::require(bound_ >= 1, "Plaintext: bound L must be positive");
    detail::require(bound_ < (std::int64_t{1} << 40), "Plaintext: bound L too large");
    for (auto v : entries_) detail::require(v >= -bound_ && v <= bound_, "Plaintext: entry outside [-L, L]");
  }

  std::span<const std::int64_t> entries() const { return entries_; }
  std::int64_t operator[](std::size_t l) const { return entries_[l]; }
  std::size_t size() const { return entries_.size(); }
  std::int64_t bound() const { return bound_; }

  /// Word width B_x = ceil(log2(2L + 1)).
  unsigned word_bits() const { return ceil_log2(2 * static_cast<std::uint64_t>(bound_) + 1); }

  bool strictly_nonzero() const {
    return std::none_of(entries_.begin(), entries_.end(), [](std::int64_t v) { return v == 0; });
  }

  std::int64_t abs_sum() const {
    std::int64_t s = 0;
    for (auto v : entries_) s += v < 0 ? -v : v;
    return s;
  }

  friend bool operator==(const Plaintext&, const Plaintext&) = default;

private:
  std::vector<std::int64_t> entries_;
  std::int64_t bound_;
};

/// m x n matrix with entries in {-1, +1}, stored row-major.
class AntipodalMatrix {
public:
  AntipodalMatrix() = default;

  AntipodalMatrix(std::size_t rows, std::size_t cols, std::vector<std::int8_t> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    detail::require(entries_.size() == rows_ * cols_, "AntipodalMatrix: entry count does not match shape");
    for (auto v : entries_) detail::require(v == 1 || v == -1, "AntipodalMatrix: entries must be -1 or +1");
  }

  static AntipodalMatrix from_rows(const std::vector<std::vector<std::int8_t>>& rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m ? rows.front().size() : 0;
    std::vector<std::int8_t> e;
    e.reserve(m * n);
    for (const auto& r : rows) {
      detail::require(r.size() == n, "AntipodalMatrix: ragged rows");
      e.insert(e.end(), r.begin(), r.end());
    }
    return AntipodalMatrix(m, n, std::move(e));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int8_t operator()(std::size_t j, std::size_t l) const { return entries_[j * cols_ + l]; }
  std::span<const std::int8_t> row(std::size_t j) const { return {entries_.data() + j * cols_, cols_}; }
  std::span<const std::int8_t> data() const { return entries_; }

  /// Replace row j; the row must already be antipodal.
  void set_row(std::size_t j, std::span<const std::int8_t> r) {
    detail::require(j < rows_ && r.size() == cols_, "AntipodalMatrix: set_row shape mismatch");
    for (auto v : r) detail::require(v == 1 || v == -1, "AntipodalMatrix: entries must be -1 or +1");
    std::copy(r.begin(), r.end(), entries_.begin() + static_cast<std::ptrdiff_t>(j * cols_));
  }

  std::size_t hamming_distance(const AntipodalMatrix& o) const {
    detail::require(rows_ == o.rows_ && cols_ == o.cols_, "AntipodalMatrix: shape mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) d += entries_[i] != o.entries_[i];
    return d;
  }

  friend bool operator==(const AntipodalMatrix&, const AntipodalMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int8_t> entries_;
};

/// Set of matrix positions to sign-flip, turning A^(0) into A^(1).
class FlipSet {
public:
  FlipSet(std::size_t rows, std::size_t cols, std::vector<std::pair<std::size_t, std::size_t>> pairs)
      : rows_(rows), cols_(cols), pairs_(std::move(pairs)), row_counts_(rows, 0) {
    std::sort(pairs_.begin(), pairs_.end());
    detail::require(std::adjacent_find(pairs_.begin(), pairs_.end()) == pairs_.end(), "FlipSet: duplicate index pair");
    for (auto [j, l] : pairs_) {
      detail::require(j < rows_ && l < cols_, "FlipSet: index pair out of range");
      ++row_counts_[j];
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const std::pair<std::size_t, std::size_t>> pairs() const { return pairs_; }
  std::span<const std::size_t> row_counts() const { return row_counts_; }
  std::size_t size() const { return pairs_.size(); }
  double density() const { return rows_ * cols_ != 0 ? static_cast<double>(size()) / static_cast<double>(rows_ * cols_) : 0.0; }

  bool contains(std::size_t j, std::size_t l) const {
    return std::binary_search(pairs_.begin(), pairs_.end(), std::pair{j, l});
  }

  /// Columns flipped in row j, ascending.
  std::vector<std::size_t> row_indices(std::size_t j) const {
    std::vector<std::size_t> out;
    auto lo = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair<std::size_t, std::size_t>{j, 0});
    for (; lo != pairs_.end() && lo->first == j; ++lo) out.push_back(lo->second);
    return out;
  }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::size_t> row_counts_;
};

struct Ciphertext {
  std::vector<std::int64_t> entries;
  unsigned word_bits = 0;  // B_y = B_x + ceil(log2 n)

  std::size_t size() const { return entries.size(); }
  std::int64_t operator[](std::size_t j) const { return entries[j]; }
};

/// Matrix t of the keyed sequence: bits t*m*n .. (t+1)*m*n - 1 of the
/// stream, row-major, with bit 0 -> -1 and bit 1 -> +1.
template <KeyMaterial K>
AntipodalMatrix expand_matrix(const K& key, std::size_t m, std::size_t n, std::uint64_t t) {
  const std::uint64_t mn = static_cast<std::uint64_t>(m) * n;
  if (mn == 0) return AntipodalMatrix(m, n, {});
  if (const auto period = key.period()) {
    if (t >= *period / mn) {
      throw PeriodExhausted("expand_matrix: matrix index " + std::to_string(t) + " exceeds the keystream period (" +
                            std::to_string(*period / mn) + " matrices); the key must be replaced");
    }
  }
  auto stream = key.stream();
  stream.discard(t * mn);
  std::vector<std::int8_t> e(mn);
  for (auto& v : e) v = stream.next() ? 1 : -1;
  return AntipodalMatrix(m, n, std::move(e));
}

inline AntipodalMatrix apply_flips(const AntipodalMatrix& a0, const FlipSet& flips) {
  detail::require(flips.rows() == a0.rows() && flips.cols() == a0.cols(), "apply_flips: flip set shape mismatch");
  std::vector<std::int8_t> e(a0.data().begin(), a0.data().end());
  for (auto [j, l] : flips.pairs()) e[j * a0.cols() + l] = static_cast<std::int8_t>(-e[j * a0.cols() + l]);
  return AntipodalMatrix(a0.rows(), a0.cols(), std::move(e));
}

inline std::int64_t row_dot(std::span<const std::int8_t> row, std::span<const std::int64_t> x) {
  std::int64_t s = 0;
  for (std::size_t l = 0; l < row.size(); ++l) s += row[l] * x[l];
  return s;
}

/// y = A x in exact integer arithmetic.
inline Ciphertext encode(const Plaintext& x, const AntipodalMatrix& a) {
  detail::require(a.cols() == x.size(), "encode: matrix columns do not match plaintext length");
  const auto n = static_cast<std::uint64_t>(x.size());
  detail::require(n == 0 || static_cast<std::uint64_t>(x.bound()) < (std::uint64_t{1} << 62) / n,
                  "encode: n * L must stay below 2^62");
  Ciphertext y;
  y.word_bits = x.word_bits() + ceil_log2(std::max<std::uint64_t>(n, 1));
  y.entries.resize(a.rows());
  for (std::size_t j = 0; j < a.rows(); ++j) y.entries[j] = row_dot(a.row(j), x.entries());
  return y;
}

namespace detail {

template <typename Stream>
std::uint64_t uniform_below(Stream& s, std::uint64_t range) {
  const unsigned w = ceil_log2(range);
  for (;;) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < w; ++i) v |= std::uint64_t{s.next()} << i;
    if (v < range) return v;
  }
}

}  // namespace detail

/// c positions drawn uniformly without replacement from the m*n cells, using
/// the key's bit stream as the randomness source.
template <KeyMaterial K>
FlipSet draw_flip_set(const K& key, std::size_t m, std::size_t n, std::size_t c) {
  const std::size_t mn = m * n;
  detail::require(c <= mn, "draw_flip_set: more flips than matrix entries");
  auto stream = key.stream();
  std::vector<std::size_t> pool(mn);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(c);
  for (std::size_t i = 0; i < c; ++i) {
    const std::size_t k = i + detail::uniform_below(stream, mn - i);
    std::swap(pool[i], pool[k]);
    pairs.emplace_back(pool[i] / n, pool[i] % n);
  }
  return FlipSet(m, n, std::move(pairs));
}

/// Exactly counts[j] flips in row j, each row's columns uniform without replacement.
template <KeyMaterial K>
FlipSet draw_flip_set_per_row(const K& key, std::size_t m, std::size_t n, std::span<const std::size_t> counts) {
  detail::require(counts.size() == m, "draw_flip_set_per_row: need one count per row");
  auto stream = key.stream();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> pool(n);
  for (std::size_t j = 0; j < m; ++j) {
    detail::require(counts[j] <= n, "draw_flip_set_per_row: row count exceeds n");
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < counts[j]; ++i) {
      const std::size_t k = i + detail::uniform_below(stream, n - i);
      std::swap(pool[i], pool[k]);
      pairs.emplace_back(j, pool[i]);
    }
  }
  return FlipSet(m, n, std::move(pairs));
}

/// Flip count c = round(eta * m * n) for a target density.
inline std::size_t flips_for_density(std::size_t m, std::size_t n, double eta) {
  detail::require(eta >= 0.0 && eta <= 1.0, "flip density must lie in [0, 1]");
  return static_cast<std::size_t>(std::llround(eta * static_cast<double>(m * n)));
}

}  // namespace cskpa
