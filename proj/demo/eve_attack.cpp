// An eavesdropper who knows one plaintext/ciphertext pair builds candidate
// matrices that reproduce the known ciphertext, then tries them on a second
// ciphertext encrypted with the same matrix.
#include <iostream>

#include "cskpa/cskpa.hpp"

using namespace cskpa;

int main() {
  const std::size_t n = 24, m = 12;
  const std::int64_t bound = 127;
  const auto basis = SparseBasis::dct(n);
  const auto key = Keystream::default_lfsr(0x2545F491);
  const auto a = expand_matrix(key, m, n, 0);

  const auto known = synth_sparse(n, 3, bound, basis, 11);
  const auto secret = synth_sparse(n, 3, bound, basis, 12);
  const auto y1 = encode(known.x, a);
  const auto y2 = encode(secret.x, a);

  const auto inst = eve_reduction(known.x, y1[0], a.row(0));
  const auto set = enumerate_solutions(inst);
  std::cout << "row 0: " << set.count.exact << " rows reproduce y_0 (predicted "
            << s_eve_expected(n, bound).count.str() << ")\n";

  std::vector<std::vector<std::int8_t>> rows;
  for (std::size_t j = 0; j < m; ++j) rows.push_back(eve_search_row(known.x, y1[j], j, 10'000'000).row);
  const auto cand = AntipodalMatrix::from_rows(rows);
  std::cout << "candidate differs from the key matrix in " << cand.hamming_distance(a) << " of " << m * n
            << " entries\n";

  const Eigen::VectorXd x1 = to_vector(known.x.entries());
  const Eigen::VectorXd x2 = to_vector(secret.x.entries());
  const RecoveryOptions opt{.sparsity = 3};
  std::cout << "RSNR on the known pair:  "
            << *recover(to_vector(y1.entries), to_matrix(cand), basis, opt, &x1).rsnr_db << " dB\n";
  std::cout << "RSNR on the secret pair: "
            << *recover(to_vector(y2.entries), to_matrix(cand), basis, opt, &x2).rsnr_db << " dB\n";
  std::cout << "with the key matrix:     "
            << *recover(to_vector(y2.entries), to_matrix(a), basis, opt, &x2).rsnr_db << " dB\n";
}
