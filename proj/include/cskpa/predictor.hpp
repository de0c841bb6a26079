#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "cskpa/ehrhart.hpp"
#include "cskpa/errors.hpp"
#include "cskpa/log_count.hpp"

namespace cskpa {

/// A predicted count together with the problem size it was evaluated at.
/// Asymptotic predictions are only exact as n grows without bound.
struct Prediction {
  LogCount count;
  std::uint64_t n = 0;
  bool asymptotic = true;
};

namespace detail {

// 1 / (1 + e^z) without overflow.
inline double fermi(double z) {
  if (z > 0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

// log(1 + e^z) without overflow.
inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

template <typename F>
double integrate(F&& f, double lo, double hi, double tol = 1e-12) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 12, tol, &err);
}

// Integral over [0, 1] of an integrand with a logistic step at xi = b / a,
// split there so each piece is smooth.
template <typename F>
double integrate_step(F&& f, double a, double b) {
  const double knee = a != 0.0 ? b / a : -1.0;
  if (knee > 0.0 && knee < 1.0) return integrate(f, 0.0, knee) + integrate(f, knee, 1.0);
  return integrate(f, 0.0, 1.0);
}

inline double ipow(double x, int p) { return p == 0 ? 1.0 : (p == 1 ? x : x * x); }

}  // namespace detail

/// F_p(a, b) = int_0^1 xi^p / (1 + e^(a xi - b)) dxi.
inline double fermi_f(int p, double a, double b) {
  detail::require(p >= 0 && p <= 2, "fermi_f: p must be 0, 1 or 2");
  return detail::integrate_step([=](double xi) { return detail::ipow(xi, p) * detail::fermi(a * xi - b); }, a, b);
}

/// G_p(a, b) = int_0^1 xi^p / ((1 + e^(a xi - b)) (1 + e^(b - a xi))) dxi.
inline double fermi_g(int p, double a, double b) {
  detail::require(p >= 0 && p <= 2, "fermi_g: p must be 0, 1 or 2");
  return detail::integrate_step(
      [=](double xi) {
        const double z = a * xi - b;
        return detail::ipow(xi, p) * detail::fermi(z) * detail::fermi(-z);
      },
      a, b);
}

struct SaddleRoot {
  double a = 0.0;
  double residual = 0.0;
  bool clamped = false;  // root lies beyond the search bracket; `a` is the bracket bound
};

inline constexpr double kSaddleBracket = 1e6;

/// The a solving tau = F_1(a, 0). F_1(., 0) decreases from 1/2 to 0, so the
/// root is unique and bracketed.
inline SaddleRoot solve_a(double tau) {
  detail::require(tau > 0.0 && tau < 0.5, "solve_a: tau must lie strictly inside (0, 1/2)");
  auto g = [tau](double a) { return fermi_f(1, a, 0.0) - tau; };
  if (g(kSaddleBracket) > 0) return {kSaddleBracket, g(kSaddleBracket), true};
  if (g(-kSaddleBracket) < 0) return {-kSaddleBracket, g(-kSaddleBracket), true};

  double lo = -1.0, hi = 1.0;
  while (g(hi) > 0) {
    lo = hi;
    hi *= 4.0;
    if (hi > kSaddleBracket) hi = kSaddleBracket;
  }
  while (g(lo) < 0) {
    hi = lo;
    lo *= 4.0;
    if (lo < -kSaddleBracket) lo = -kSaddleBracket;
  }
  std::uintmax_t iters = 200;
  auto [x0, x1] =
      boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  const double a = 0.5 * (x0 + x1);
  const double res = g(a);
  if (std::abs(res) > 1e-10) throw ConvergenceError("solve_a: residual above 1e-10");
  return {a, res, false};
}

struct SaddlePair {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;  // Euclidean norm of (F_0 - r, F_1 - tau)
  int iterations = 0;
};

/// Admissible tau for a given row density r: with a fraction r of ones spread
/// over [0, 1], the first moment lies strictly between r^2/2 and r - r^2/2.
inline bool saddle_pair_domain(double tau, double r) {
  return r > 0.0 && r < 1.0 && tau > r * r / 2.0 && tau < r - r * r / 2.0;
}

/// (a, b) solving r = F_0(a, b), tau = F_1(a, b) by damped Newton, by default
/// from the symmetric point (0, log(r / (1 - r))). Jacobian entries are the exact
/// derivatives dF_p/da = -G_{p+1}, dF_p/db = G_p.
inline SaddlePair solve_ab(double tau, double r, std::optional<std::pair<double, double>> start = std::nullopt) {
  detail::require(saddle_pair_domain(tau, r), "solve_ab: (tau, r) outside r^2/2 < tau < r - r^2/2, 0 < r < 1");
  double a = start ? start->first : 0.0;
  double b = start ? start->second : std::log(r / (1.0 - r));
  auto residual = [&](double aa, double bb) {
    return std::array<double, 2>{fermi_f(0, aa, bb) - r, fermi_f(1, aa, bb) - tau};
  };
  auto norm = [](const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); };
  auto res = residual(a, b);
  int it = 0;
  for (; it < 200 && norm(res) > 1e-13; ++it) {
    const double g0 = fermi_g(0, a, b), g1 = fermi_g(1, a, b), g2 = fermi_g(2, a, b);
    // J = [[-g1, g0], [-g2, g1]]
    const double det = -g1 * g1 + g0 * g2;
    if (!(std::abs(det) > 0)) break;
    const double da = (-res[0] * g1 + g0 * res[1]) / det;
    const double db = (res[1] * g1 - g2 * res[0]) / det;
    double step = 1.0;
    bool improved = false;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      const auto trial = residual(a + step * da, b + step * db);
      if (norm(trial) < norm(res)) {
        a += step * da;
        b += step * db;
        res = trial;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  const double rn = norm(res);
  if (!(rn <= 1e-9)) throw ConvergenceError("solve_ab: no convergence at (tau, r) = (" + std::to_string(tau) + ", " + std::to_string(r) + ")");
  return {a, b, rn, it};
}

/// One point of a count-vs-normalized-target profile.
struct ProfileSample {
  double tau = 0.0;
  LogCount value;
  double a = 0.0;
  std::optional<double> b;
};

/// Saddle-point count of subset-sum solutions at normalized target
/// tau = target / (n L), weights uniform on {1..L}.
inline ProfileSample s_eve_profile(double tau, std::uint64_t n, std::uint64_t bound) {
  const auto root = solve_a(tau);
  const double a = root.a;
  const double nn = static_cast<double>(n), ll = static_cast<double>(bound);
  const double entropy = detail::integrate([a](double xi) { return detail::softplus(-a * xi); }, 0.0, 1.0);
  const double ln_count = nn * (a * tau + entropy) - 0.5 * std::log(2.0 * std::numbers::pi * nn * ll * ll * fermi_g(2, a, 0.0));
  return {tau, LogCount::from_ln(ln_count), a, std::nullopt};
}

/// Saddle-point count of cardinality-constrained solutions (cardinality r n,
/// weights uniform on {1..2L}) at normalized target tau.
inline ProfileSample s_steve_profile(double tau, std::uint64_t n, std::uint64_t bound, double r,
                                     std::optional<std::pair<double, double>> start = std::nullopt) {
  const auto sp = solve_ab(tau, r, start);
  const double nn = static_cast<double>(n), ll = static_cast<double>(bound);
  const double a = sp.a, b = sp.b;
  const double entropy = detail::integrate_step([=](double xi) { return detail::softplus(b - a * xi); }, a, b);
  const double g0 = fermi_g(0, a, b), g1 = fermi_g(1, a, b), g2 = fermi_g(2, a, b);
  const double det = g0 * g2 - g1 * g1;
  const double ln_count =
      nn * (a * tau - b * r) + nn * entropy - std::log(4.0 * std::numbers::pi * nn * ll * std::sqrt(det));
  return {tau, LogCount::from_ln(ln_count), a, b};
}

/// Expected number of solutions of the eavesdropper's subset-sum problem,
/// 2^n / L * sqrt(3 / (pi n)).
inline Prediction s_eve_expected(std::uint64_t n, std::uint64_t bound) {
  detail::require(n >= 2 && bound >= 2, "s_eve_expected: need n >= 2 and L >= 2");
  const double nn = static_cast<double>(n);
  const double l2 = nn - std::log2(static_cast<double>(bound)) + 0.5 * std::log2(3.0 / (std::numbers::pi * nn));
  return {LogCount::from_log2(l2), n, true};
}

/// Exact expected number of candidates at Hamming distance h from the true
/// solution: C(n, h) P_h(L) / (2^h L^h). Zero for h = 1.
inline BigRational s_eve_hamming_exact(std::uint64_t n, std::uint64_t bound, unsigned h,
                                       const PhTable& table = PhTable::shared()) {
  detail::require(bound >= 1, "s_eve_hamming: L must be positive");
  detail::require(h >= 1 && h <= n, "s_eve_hamming: need 1 <= h <= n");
  if (h == 1) return 0;
  const BigInt ph = [&] {
    const BigRational v = table(h)(BigRational(bound));
    return BigInt(boost::multiprecision::numerator(v));
  }();
  BigInt den = 1;
  for (unsigned i = 0; i < h; ++i) den *= 2 * BigInt(bound);
  return BigRational(detail::binomial(static_cast<unsigned>(n), h) * ph, den);
}

inline Prediction s_eve_hamming(std::uint64_t n, std::uint64_t bound, unsigned h,
                                const PhTable& table = PhTable::shared()) {
  return {LogCount::from_rational(s_eve_hamming_exact(n, bound, h, table)), n, false};
}

/// Candidates within Hamming distance max_h, summed exactly over h = 2..max_h.
inline Prediction s_eve_hamming_cumulative(std::uint64_t n, std::uint64_t bound, unsigned max_h,
                                           const PhTable& table = PhTable::shared()) {
  BigRational acc = 0;
  for (unsigned h = 2; h <= max_h && h <= n; ++h) acc += s_eve_hamming_exact(n, bound, h, table);
  return {LogCount::from_rational(acc), n, false};
}

/// Expected number of solutions of the second-class user's cardinality-
/// constrained problem with row density r:
/// sqrt(3/2) r^(-1-nr) (1-r)^(-1-n(1-r)) / (2 pi n L).
inline Prediction s_steve_expected(std::uint64_t n, std::uint64_t bound, double r) {
  detail::require(r > 0.0 && r < 1.0, "s_steve_expected: r must lie in (0, 1)");
  const double nn = static_cast<double>(n);
  detail::require(nn * r >= 1.0 - 1e-12, "s_steve_expected: need n r >= 1");
  detail::require(bound >= 1, "s_steve_expected: L must be positive");
  const double l2 = 0.5 * std::log2(1.5) + (-1.0 - nn * r) * std::log2(r) + (-1.0 - nn * (1.0 - r)) * std::log2(1.0 - r) -
                    std::log2(2.0 * std::numbers::pi * nn * static_cast<double>(bound));
  return {LogCount::from_log2(l2), n, true};
}

namespace detail {

// E[S] = int S^2 / int S over the admissible targets, evaluated around the
// profile peak where essentially all mass sits.
template <typename Profile>
LogCount profile_average(Profile&& profile, double lo, double hi, double peak) {
  const double ref = profile(peak).ln();
  auto ratio = [&](double t) { return std::exp(profile(t).ln() - ref); };
  const double first = integrate(ratio, lo, hi, 1e-10);
  const double second = integrate([&](double t) { const double v = ratio(t); return v * v; }, lo, hi, 1e-10);
  return LogCount::from_ln(ref + std::log(second) - std::log(first));
}

}  // namespace detail

/// Numerical tau-average of the eavesdropper profile (no Gaussian shortcut).
inline Prediction s_eve_expected_by_quadrature(std::uint64_t n, std::uint64_t bound) {
  const double sigma = 1.0 / std::sqrt(12.0 * static_cast<double>(n));
  const double lo = std::max(1e-6, 0.25 - 14.0 * sigma);
  const double hi = std::min(0.5 - 1e-6, 0.25 + 14.0 * sigma);
  auto prof = [&](double t) { return s_eve_profile(t, n, bound).value; };
  return {detail::profile_average(prof, lo, hi, 0.25), n, true};
}

/// Numerical tau-average of the second-class profile. The saddle point is
/// continued outward from the peak on a fine grid so every Newton solve
/// starts next to its answer; the range stops where S has fallen by e^-40 or
/// just inside the admissible interval.
inline Prediction s_steve_expected_by_quadrature(std::uint64_t n, std::uint64_t bound, double r) {
  const double peak = r / 2.0;
  const double edge_lo = r * r / 2.0, edge_hi = r - r * r / 2.0;
  const double margin = 1e-3 * (edge_hi - edge_lo);
  const double step = (edge_hi - edge_lo) / 400.0;
  std::map<double, std::pair<double, double>> solved;
  const auto top = s_steve_profile(peak, n, bound, r);
  solved[peak] = {top.a, *top.b};
  double lo = peak, hi = peak;
  for (int dir : {-1, 1}) {
    auto prev = solved[peak];
    for (double t = peak + dir * step;; t += dir * step) {
      const bool at_edge = dir < 0 ? t <= edge_lo + margin : t >= edge_hi - margin;
      if (at_edge) t = dir < 0 ? edge_lo + margin : edge_hi - margin;
      const auto p = s_steve_profile(t, n, bound, r, prev);
      prev = {p.a, *p.b};
      solved[t] = prev;
      (dir < 0 ? lo : hi) = t;
      if (at_edge || p.value.ln() < top.value.ln() - 40.0) break;
    }
  }
  auto prof = [&](double t) {
    auto it = solved.lower_bound(t);
    if (it == solved.end()) --it;
    return s_steve_profile(t, n, bound, r, it->second).value;
  };
  return {detail::profile_average(prof, lo, hi, peak), n, true};
}

/// Least-squares Gaussian width of the eavesdropper profile: fits
/// ln S(tau) = c - (tau - 1/4)^2 / (2 sigma^2) on a uniform grid over [lo, hi]
/// and returns sigma^2.
inline double gaussian_profile_variance(std::uint64_t n, std::uint64_t bound, double lo = 0.2, double hi = 0.3,
                                        double step = 1e-3) {
  detail::require(lo > 0.0 && hi < 0.5 && lo < hi && step > 0.0, "gaussian_profile_variance: bad grid");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  const auto points = static_cast<std::size_t>(std::llround((hi - lo) / step));
  for (std::size_t i = 0; i <= points; ++i) {
    const double t = lo + static_cast<double>(i) * step;
    const double x = (t - 0.25) * (t - 0.25);
    const double y = s_eve_profile(t, n, bound).value.ln();
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double c = static_cast<double>(count);
  const double slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
  return -1.0 / (2.0 * slope);
}

/// Attack opportunities T = log(zeta) / log(1 - 1/S) before the probability
/// that every attack failed drops to zeta.
inline LogCount key_lifetime(LogCount expected_solutions, double zeta) {
  detail::require(zeta > 0.0 && zeta < 1.0, "key_lifetime: zeta must lie in (0, 1)");
  detail::require(expected_solutions.log2() > 0.0, "key_lifetime: need S > 1");
  const double neg_ln_zeta = -std::log(zeta);
  if (expected_solutions.log2() > 49.9) {  // 1/S < 1e-15
    return LogCount::from_log2(expected_solutions.log2() + std::log2(neg_ln_zeta));
  }
  const double inv = std::exp2(-expected_solutions.log2());
  return LogCount::from_value(neg_ln_zeta / -std::log1p(-inv));
}

}  // namespace cskpa
