#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "cskpa/crypto.hpp"
#include "cskpa/errors.hpp"
#include "cskpa/random.hpp"

namespace cskpa {

inline constexpr double kRsnrCapDb = 150.0;

/// Orthonormal n x n sparsity basis D; a signal x is k-sparse when x = D s
/// with at most k nonzero s.
class SparseBasis {
public:
  explicit SparseBasis(Eigen::MatrixXd d) : d_(std::move(d)) {
    detail::require(d_.rows() == d_.cols() && d_.rows() > 0, "SparseBasis: matrix must be square and nonempty");
    const Eigen::MatrixXd gram = d_.transpose() * d_;
    const double dev = (gram - Eigen::MatrixXd::Identity(d_.rows(), d_.cols())).cwiseAbs().maxCoeff();
    detail::require(dev <= 1e-10, "SparseBasis: matrix is not orthonormal");
  }

  static SparseBasis identity(std::size_t n) {
    return SparseBasis(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
  }

  /// Orthonormal DCT-II synthesis basis; column k is the k-th cosine atom.
  static SparseBasis dct(std::size_t n) {
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd d(nn, nn);
    const double nd = static_cast<double>(n);
    for (Eigen::Index i = 0; i < nn; ++i) {
      for (Eigen::Index k = 0; k < nn; ++k) {
        const double scale = k == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
        d(i, k) = scale * std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) * static_cast<double>(k) / nd);
      }
    }
    return SparseBasis(std::move(d));
  }

  std::size_t size() const { return static_cast<std::size_t>(d_.rows()); }
  const Eigen::MatrixXd& matrix() const { return d_; }
  Eigen::VectorXd synthesize(const Eigen::VectorXd& s) const { return d_ * s; }
  Eigen::VectorXd analyze(const Eigen::VectorXd& x) const { return d_.transpose() * x; }

private:
  Eigen::MatrixXd d_;
};

inline Eigen::VectorXd to_vector(std::span<const std::int64_t> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = static_cast<double>(v[i]);
  return out;
}

inline Eigen::MatrixXd to_matrix(const AntipodalMatrix& a) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  for (std::size_t j = 0; j < a.rows(); ++j) {
    for (std::size_t l = 0; l < a.cols(); ++l) out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = a(j, l);
  }
  return out;
}

/// 10 log10(|x|^2 / |x - x_hat|^2), capped at 150 dB for exact recovery.
inline double rsnr(const Eigen::VectorXd& reference, const Eigen::VectorXd& estimate) {
  detail::require(reference.size() == estimate.size(), "rsnr: length mismatch");
  const double signal = reference.squaredNorm();
  detail::require(signal > 0.0, "rsnr: zero reference signal");
  const double noise = (reference - estimate).squaredNorm();
  if (noise <= signal * std::pow(10.0, -kRsnrCapDb / 10.0)) return kRsnrCapDb;
  return 10.0 * std::log10(signal / noise);
}

/// Average RSNR: the energy ratio is averaged before taking the logarithm.
inline double arsnr(std::span<const std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs) {
  detail::require(!pairs.empty(), "arsnr: no pairs");
  const double cap = std::pow(10.0, kRsnrCapDb / 10.0);
  double acc = 0.0;
  for (const auto& [ref, est] : pairs) {
    detail::require(ref.size() == est.size(), "arsnr: length mismatch");
    const double signal = ref.squaredNorm();
    detail::require(signal > 0.0, "arsnr: zero reference signal");
    const double noise = (ref - est).squaredNorm();
    acc += noise > 0.0 ? std::min(signal / noise, cap) : cap;
  }
  return std::min(10.0 * std::log10(acc / static_cast<double>(pairs.size())), kRsnrCapDb);
}

struct SparseSample {
  Plaintext x;
  Eigen::VectorXd coefficients;  // scaled so that basis * coefficients approximates x
  double quantization_rsnr_db = 0.0;
  std::size_t nudged = 0;  // zero entries replaced by +-1
};

/// k-sparse s with Gaussian amplitudes at uniform positions, x = D s scaled so
/// max |x_l| = L, rounded, and zeros nudged to +-1 with random sign.
inline SparseSample synth_sparse(std::size_t n, std::size_t k, std::int64_t bound, const SparseBasis& basis,
                                 std::uint64_t seed) {
  detail::require(k >= 1 && k <= n, "synth_sparse: need 1 <= k <= n");
  detail::require(basis.size() == n, "synth_sparse: basis size does not match n");
  detail::require(bound >= 1, "synth_sparse: L must be positive");
  auto g = make_engine(seed);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (auto pos : sample_without_replacement(g, n, k)) s(static_cast<Eigen::Index>(pos)) = normal(g);
  Eigen::VectorXd xf = basis.synthesize(s);
  const double peak = xf.cwiseAbs().maxCoeff();
  const double scale = static_cast<double>(bound) / peak;
  xf *= scale;
  s *= scale;

  std::vector<std::int64_t> entries(n);
  std::size_t nudged = 0;
  for (std::size_t l = 0; l < n; ++l) {
    auto v = static_cast<std::int64_t>(std::llround(xf(static_cast<Eigen::Index>(l))));
    v = std::clamp(v, -bound, bound);
    if (v == 0) {
      v = (g() & 1U) ? 1 : -1;
      ++nudged;
    }
    entries[l] = v;
  }
  Plaintext x(std::move(entries), bound);
  const double q = rsnr(xf, to_vector(x.entries()));
  return {std::move(x), std::move(s), q, nudged};
}

struct RecoveryOptions {
  std::optional<std::size_t> sparsity;  // stop OMP at k atoms; otherwise grow until the residual is <= omega
  double omega = 0.0;
  std::size_t max_iter = 50;  // refinement passes
};

struct RecoveryResult {
  Eigen::VectorXd estimate;
  Eigen::VectorXd coefficients;
  std::vector<std::size_t> support;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<double> rsnr_db;
};

namespace detail {

struct SupportFit {
  Eigen::VectorXd coef;  // on the support, in support order
  Eigen::VectorXd residual;
};

inline SupportFit fit_support(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, const std::vector<std::size_t>& support) {
  Eigen::MatrixXd sub(phi.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = phi.col(static_cast<Eigen::Index>(support[i]));
  Eigen::VectorXd coef = sub.colPivHouseholderQr().solve(y);
  Eigen::VectorXd res = y - sub * coef;
  return {std::move(coef), std::move(res)};
}

inline std::vector<std::size_t> top_indices(const Eigen::VectorXd& v, std::size_t count) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(v.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  count = std::min(count, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(), [&](std::size_t a, std::size_t b) {
    const double va = std::abs(v(static_cast<Eigen::Index>(a))), vb = std::abs(v(static_cast<Eigen::Index>(b)));
    return va != vb ? va > vb : a < b;
  });
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace detail

/// Sparse recovery of x from y = A x with x = D s: orthogonal matching pursuit
/// on Phi = A D followed by hard-thresholded support refinement (merge the k
/// strongest correlations with the current support, least squares, keep the
/// k largest coefficients) while the residual keeps shrinking.
inline RecoveryResult recover(const Eigen::VectorXd& y, const Eigen::MatrixXd& a, const SparseBasis& basis,
                              const RecoveryOptions& opt = {}, const Eigen::VectorXd* reference = nullptr) {
  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  detail::require(static_cast<std::size_t>(y.size()) == m, "recover: y length does not match A");
  detail::require(basis.size() == n, "recover: basis size does not match A");
  detail::require(m < n, "recover: need m < n");
  detail::require(opt.omega >= 0.0, "recover: omega must be nonnegative");
  const std::size_t max_atoms = opt.sparsity ? *opt.sparsity : m;
  detail::require(max_atoms >= 1 && max_atoms <= m, "recover: sparsity must lie in [1, m]");

  const Eigen::MatrixXd phi = a * basis.matrix();
  const Eigen::VectorXd col_norm = phi.colwise().norm().transpose();
  const double tol = std::max(opt.omega, 1e-9 * std::max(y.norm(), 1.0));

  std::vector<std::size_t> support;
  detail::SupportFit fit{Eigen::VectorXd(), y};
  std::vector<char> used(n, 0);
  std::size_t iters = 0;
  while (support.size() < max_atoms && fit.residual.norm() > tol) {
    const Eigen::VectorXd corr = (phi.transpose() * fit.residual).cwiseQuotient(col_norm);
    std::size_t best = n;
    double best_v = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::abs(corr(static_cast<Eigen::Index>(i)));
      if (!used[i] && v > best_v) {
        best_v = v;
        best = i;
      }
    }
    if (best == n) break;
    used[best] = 1;
    support.push_back(best);
    std::sort(support.begin(), support.end());
    fit = detail::fit_support(phi, y, support);
    ++iters;
  }

  if (opt.sparsity && !support.empty() && 2 * support.size() <= m) {
    const std::size_t k = support.size();
    for (std::size_t pass = 0; pass < opt.max_iter && fit.residual.norm() > tol; ++pass) {
      const Eigen::VectorXd corr = (phi.transpose() * fit.residual).cwiseQuotient(col_norm);
      std::vector<std::size_t> merged = detail::top_indices(corr, k);
      merged.insert(merged.end(), support.begin(), support.end());
      std::sort(merged.begin(), merged.end());
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      const auto wide = detail::fit_support(phi, y, merged);
      Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < merged.size(); ++i) full(static_cast<Eigen::Index>(merged[i])) = wide.coef(static_cast<Eigen::Index>(i));
      auto trial_support = detail::top_indices(full, k);
      auto trial = detail::fit_support(phi, y, trial_support);
      ++iters;
      if (trial.residual.norm() >= fit.residual.norm() * (1.0 - 1e-12)) break;
      support = std::move(trial_support);
      fit = std::move(trial);
    }
  }

  RecoveryResult out;
  out.coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < support.size(); ++i) out.coefficients(static_cast<Eigen::Index>(support[i])) = fit.coef(static_cast<Eigen::Index>(i));
  out.estimate = basis.synthesize(out.coefficients);
  out.support = std::move(support);
  out.residual_norm = fit.residual.norm();
  out.iterations = iters;
  out.converged = opt.sparsity ? out.support.size() == *opt.sparsity || out.residual_norm <= tol : out.residual_norm <= tol;
  if (reference) out.rsnr_db = rsnr(*reference, out.estimate);
  return out;
}

struct EtaPoint {
  double eta = 0.0;
  double mean_rsnr_db = 0.0;
  double std_db = 0.0;
  std::size_t n_seeds = 0;
};

struct EtaSweepConfig {
  std::size_t n = 64;
  std::size_t m = 32;
  std::size_t k = 6;
  std::int64_t bound = 127;
  std::vector<double> etas;
  std::size_t seeds = 20;
  std::uint64_t master_seed = 1;
};

/// Second-class recovery quality against flip density: each seed draws a
/// sparse x and a true matrix A1 = flips(A0), encodes with A1 and decodes
/// with A0. Seeds are shared across the grid so points are paired.
inline std::vector<EtaPoint> eta_sweep(const EtaSweepConfig& cfg) {
  detail::require(cfg.m < cfg.n && cfg.k >= 1 && cfg.k <= cfg.m, "eta_sweep: need 1 <= k <= m < n");
  detail::require(cfg.seeds >= 1, "eta_sweep: need at least one seed");
  for (double e : cfg.etas) detail::require(e >= 0.0 && e < 1.0, "eta_sweep: eta must lie in [0, 1)");
  const auto basis = SparseBasis::dct(cfg.n);
  std::vector<EtaPoint> out;
  for (double eta : cfg.etas) {
    std::vector<double> vals;
    for (std::size_t s = 0; s < cfg.seeds; ++s) {
      const auto sample = synth_sparse(cfg.n, cfg.k, cfg.bound, basis, derive_seed(cfg.master_seed, streams::kPlaintext, s));
      const EngineKey mkey(derive_seed(cfg.master_seed, streams::kMatrix, s));
      const EngineKey fkey(derive_seed(cfg.master_seed, streams::kFlips, s));
      const auto a0 = expand_matrix(mkey, cfg.m, cfg.n, 0);
      const auto a1 = apply_flips(a0, draw_flip_set(fkey, cfg.m, cfg.n, flips_for_density(cfg.m, cfg.n, eta)));
      const auto y = encode(sample.x, a1);
      const Eigen::VectorXd ref = to_vector(sample.x.entries());
      const auto res = recover(to_vector(y.entries), to_matrix(a0), basis, {.sparsity = cfg.k}, &ref);
      vals.push_back(*res.rsnr_db);
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    const double sd = vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size() - 1)) : 0.0;
    out.push_back({eta, mean, sd, vals.size()});
  }
  return out;
}

}  // namespace cskpa
