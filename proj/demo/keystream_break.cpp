// A short LFSR keystream falls to Berlekamp-Massey: 2B consecutive matrix
// entries give the whole key, and with it every later matrix.
#include <iostream>

#include "cskpa/cskpa.hpp"

using namespace cskpa;

int main() {
  const Keystream key(20, {20, 17}, 0xACE01);
  std::cout << "maximal length: " << (key.maximal() ? "yes" : "no") << ", period " << *key.period() << "\n";

  const std::size_t m = 16, n = 32;
  const auto a0 = expand_matrix(key, m, n, 0);
  // Matrix entries map to keystream bits; 40 of the 512 entries are enough.
  std::vector<std::uint8_t> observed;
  for (std::size_t i = 0; i < 2 * key.degree(); ++i) observed.push_back(a0.data()[i] > 0 ? 1 : 0);
  const auto spec = berlekamp_massey(observed);
  std::cout << "recovered degree " << spec.degree << ", taps";
  for (auto t : spec.taps) std::cout << ' ' << t;
  std::cout << "\n";

  const Keystream clone(spec.degree, spec.taps, spec.seed);
  for (std::uint64_t t : {0ULL, 1ULL, 100ULL}) {
    const auto same = expand_matrix(clone, m, n, t).hamming_distance(expand_matrix(key, m, n, t)) == 0;
    std::cout << "matrix " << t << ": " << (same ? "reproduced" : "differs") << "\n";
  }
}
