#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cskpa/crypto.hpp"
#include "cskpa/errors.hpp"

namespace cskpa {

/// Binary assignment b in {0,1}^n packed into a word (bit l = b_l); n <= 64.
using BitVector = std::uint64_t;

inline constexpr std::size_t kMaxBits = 64;

inline BitVector pack_bits(std::span<const std::uint8_t> bits) {
  detail::require(bits.size() <= kMaxBits, "pack_bits: more than 64 variables");
  BitVector v = 0;
  for (std::size_t l = 0; l < bits.size(); ++l) v |= BitVector{bits[l] & 1U} << l;
  return v;
}

inline std::vector<std::uint8_t> unpack_bits(BitVector v, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (std::size_t l = 0; l < n; ++l) out[l] = (v >> l) & 1U;
  return out;
}

inline std::string bit_string(BitVector v, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t l = 0; l < n; ++l) s[l] = ((v >> l) & 1U) ? '1' : '0';
  return s;
}

/// How a binary assignment maps back to an antipodal row.
///  - Eavesdropper: A_l = sign(x_l) * (2 b_l - 1), `reference` holds sign(x).
///  - Second-class: A_l = A0_l * (1 - 2 b_l), `reference` holds the known A0 row.
struct Provenance {
  enum class Attacker { eve, steve };
  Attacker attacker = Attacker::eve;
  std::size_t row = 0;
  std::vector<std::int8_t> reference;
};

/// sum_l b_l u_l = target with u_l >= 1.
struct SspInstance {
  std::vector<std::uint64_t> weights;
  std::uint64_t target = 0;
  std::optional<BitVector> true_solution;
  Provenance provenance;

  std::size_t size() const { return weights.size(); }

  std::uint64_t weight_sum() const {
    std::uint64_t s = 0;
    for (auto u : weights) s += u;
    return s;
  }

  std::uint64_t evaluate(BitVector b) const {
    std::uint64_t s = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
      if ((b >> l) & 1U) s += weights[l];
    }
    return s;
  }

  bool verifies(BitVector b) const { return evaluate(b) == target; }

  /// Density n / log2(max weight).
  double density(std::uint64_t weight_bound) const {
    return static_cast<double>(size()) / std::log2(static_cast<double>(weight_bound));
  }

  std::vector<std::int8_t> back_map(BitVector b) const {
    const auto& ref = provenance.reference;
    detail::require(ref.size() == weights.size(), "back_map: instance carries no provenance");
    std::vector<std::int8_t> row(ref.size());
    const bool eve = provenance.attacker == Provenance::Attacker::eve;
    for (std::size_t l = 0; l < ref.size(); ++l) {
      const int bit = static_cast<int>((b >> l) & 1U);
      row[l] = static_cast<std::int8_t>(eve ? ref[l] * (2 * bit - 1) : ref[l] * (1 - 2 * bit));
    }
    return row;
  }

  void validate() const {
    detail::require(weights.size() <= kMaxBits, "SspInstance: at most 64 weights are supported");
    for (auto u : weights) detail::require(u >= 1, "SspInstance: weights must be positive");
    if (true_solution) {
      detail::require(size() == kMaxBits || (*true_solution >> size()) == 0, "SspInstance: true solution has stray bits");
      detail::require(verifies(*true_solution), "SspInstance: true solution does not verify the instance");
    }
  }
};

/// Subset-sum with an additional cardinality constraint sum_l b_l = cardinality.
struct GammaSspInstance : SspInstance {
  std::uint64_t cardinality = 0;
  std::uint64_t weight_bound = 0;  // Q = 2L

  bool verifies(BitVector b) const {
    return static_cast<std::uint64_t>(std::popcount(b)) == cardinality && SspInstance::verifies(b);
  }

  void validate() const {
    SspInstance tmp = *this;
    tmp.true_solution.reset();
    tmp.validate();
    detail::require(cardinality <= size(), "GammaSspInstance: cardinality exceeds n");
    if (true_solution) {
      detail::require(verifies(*true_solution), "GammaSspInstance: true solution does not verify the instance");
    }
  }
};

/// Eavesdropper's known-plaintext attack on row j as a subset-sum problem:
/// u_l = |x_l|, target = (y_j + sum |x_l|) / 2, b_l = (sign(x_l) A_l + 1) / 2.
inline SspInstance eve_reduction(const Plaintext& x, std::int64_t y_j,
                                 std::optional<std::span<const std::int8_t>> a1_row = std::nullopt,
                                 std::size_t row_index = 0) {
  if (!x.strictly_nonzero()) throw ZeroEntryError("eve_reduction: plaintext has a zero entry");
  detail::require(x.size() <= kMaxBits, "eve_reduction: n must be <= 64");
  const std::int64_t total = x.abs_sum();
  if (y_j > total || y_j < -total) throw InconsistentPairError("eve_reduction: |y_j| exceeds sum |x_l|");
  if (((y_j + total) & 1) != 0) throw InconsistentPairError("eve_reduction: y_j + sum |x_l| is odd");

  SspInstance inst;
  inst.weights.reserve(x.size());
  inst.provenance.attacker = Provenance::Attacker::eve;
  inst.provenance.row = row_index;
  for (auto v : x.entries()) {
    inst.weights.push_back(static_cast<std::uint64_t>(v < 0 ? -v : v));
    inst.provenance.reference.push_back(v < 0 ? -1 : 1);
  }
  inst.target = static_cast<std::uint64_t>((y_j + total) / 2);
  if (a1_row) {
    detail::require(a1_row->size() == x.size(), "eve_reduction: row length mismatch");
    if (row_dot(*a1_row, x.entries()) != y_j) throw InconsistentPairError("eve_reduction: A1_j x != y_j");
    BitVector b = 0;
    for (std::size_t l = 0; l < x.size(); ++l) {
      detail::require((*a1_row)[l] == 1 || (*a1_row)[l] == -1, "eve_reduction: row is not antipodal");
      if (inst.provenance.reference[l] * (*a1_row)[l] > 0) b |= BitVector{1} << l;
    }
    inst.true_solution = b;
  }
  inst.validate();
  return inst;
}

/// Second-class user's known-plaintext attack on row j as a cardinality-
/// constrained subset-sum problem: u_l = L - A0_l x_l, target = eps_j / 2 + L c_j,
/// cardinality c_j, b_l = 1 where the sign was flipped.
inline GammaSspInstance steve_reduction(const Plaintext& x, std::int64_t y_j, std::span<const std::int8_t> a0_row,
                                       std::size_t c_j,
                                       std::optional<std::span<const std::int8_t>> a1_row = std::nullopt,
                                       std::size_t row_index = 0) {
  if (!x.strictly_nonzero()) throw ZeroEntryError("steve_reduction: plaintext has a zero entry");
  detail::require(x.size() <= kMaxBits, "steve_reduction: n must be <= 64");
  detail::require(a0_row.size() == x.size(), "steve_reduction: A0 row length mismatch");
  detail::require(c_j <= x.size(), "steve_reduction: c_j exceeds n");
  const std::int64_t bound = x.bound();

  GammaSspInstance inst;
  inst.provenance.attacker = Provenance::Attacker::steve;
  inst.provenance.row = row_index;
  inst.cardinality = c_j;
  inst.weight_bound = 2 * static_cast<std::uint64_t>(bound);
  for (std::size_t l = 0; l < x.size(); ++l) {
    detail::require(a0_row[l] == 1 || a0_row[l] == -1, "steve_reduction: A0 row is not antipodal");
    const std::int64_t u = bound - a0_row[l] * x[l];
    if (u == 0) throw DomainError("steve_reduction: zero weight at l = " + std::to_string(l) + " (A0_l x_l = L)");
    inst.weights.push_back(static_cast<std::uint64_t>(u));
    inst.provenance.reference.push_back(a0_row[l]);
  }
  const std::int64_t eps = y_j - row_dot(a0_row, x.entries());
  if ((eps & 1) != 0) throw InconsistentPairError("steve_reduction: y_j - A0_j x is odd");
  const std::int64_t target = eps / 2 + bound * static_cast<std::int64_t>(c_j);
  if (target < 0) throw InconsistentPairError("steve_reduction: negative subset-sum target");
  inst.target = static_cast<std::uint64_t>(target);

  if (a1_row) {
    detail::require(a1_row->size() == x.size(), "steve_reduction: A1 row length mismatch");
    if (row_dot(*a1_row, x.entries()) != y_j) throw InconsistentPairError("steve_reduction: A1_j x != y_j");
    BitVector b = 0;
    for (std::size_t l = 0; l < x.size(); ++l) {
      if ((*a1_row)[l] != a0_row[l]) b |= BitVector{1} << l;
    }
    if (static_cast<std::size_t>(std::popcount(b)) != c_j) {
      throw InconsistentPairError("steve_reduction: A1_j differs from A0_j in " + std::to_string(std::popcount(b)) +
                                  " entries, not c_j = " + std::to_string(c_j));
    }
    inst.true_solution = b;
  }
  inst.validate();
  return inst;
}

}  // namespace cskpa
