#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "cskpa/errors.hpp"

namespace cskpa {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// log2 of a positive big integer, accurate to double precision.
inline double big_log2(const BigInt& v) {
  if (v <= 0) return -std::numeric_limits<double>::infinity();
  const auto msb = static_cast<std::int64_t>(boost::multiprecision::msb(v));
  if (msb < 53) return std::log2(v.convert_to<double>());
  const std::int64_t shift = msb - 52;
  const BigInt top = v >> static_cast<unsigned>(shift);
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

inline double big_log2(const BigRational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (q <= 0) return -std::numeric_limits<double>::infinity();
  return big_log2(BigInt(numerator(q))) - big_log2(BigInt(denominator(q)));
}

/// A base-10 rendering of a count too large for any native float.
struct DecimalForm {
  double mantissa = 0.0;  // in [1, 10), or 0 for a zero count
  std::int64_t exponent = 0;

  std::string str(int digits = 3) const {
    if (mantissa == 0.0) return "0";
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits > 1 ? digits - 1 : 0) << mantissa << "e" << exponent;
    return os.str();
  }
};

/// Nonnegative count stored as its base-2 logarithm (-inf for zero).
class LogCount {
public:
  constexpr LogCount() = default;

  static constexpr LogCount zero() { return LogCount{}; }
  static LogCount one() { return from_log2(0.0); }

  static LogCount from_log2(double l2) {
    detail::require(!std::isnan(l2) && l2 != std::numeric_limits<double>::infinity(),
                    "LogCount: log2 value must be finite or -inf");
    LogCount c;
    c.log2_ = l2;
    return c;
  }
  static LogCount from_log10(double l10) { return from_log2(l10 / std::log10(2.0)); }
  static LogCount from_ln(double ln) { return from_log2(ln / std::log(2.0)); }

  static LogCount from_value(double v) {
    detail::require(v >= 0.0 && std::isfinite(v), "LogCount: value must be finite and nonnegative");
    return v == 0.0 ? zero() : from_log2(std::log2(v));
  }
  static LogCount from_big(const BigInt& v) {
    detail::require(v >= 0, "LogCount: negative count");
    return v == 0 ? zero() : from_log2(big_log2(v));
  }
  static LogCount from_rational(const BigRational& q) {
    detail::require(q >= 0, "LogCount: negative count");
    return q == 0 ? zero() : from_log2(big_log2(q));
  }

  double log2() const { return log2_; }
  double log10() const { return log2_ * std::log10(2.0); }
  double ln() const { return log2_ * std::log(2.0); }
  bool is_zero() const { return log2_ == -std::numeric_limits<double>::infinity(); }

  /// Linear-domain value; overflows to +inf past ~1.8e308.
  double value() const { return std::exp2(log2_); }

  DecimalForm decimal(int digits = 3) const {
    if (is_zero()) return {};
    const double l10 = log10();
    auto e = static_cast<std::int64_t>(std::floor(l10));
    double m = std::pow(10.0, l10 - static_cast<double>(e));
    const double scale = std::pow(10.0, digits > 1 ? digits - 1 : 0);
    if (std::round(m * scale) / scale >= 10.0) {
      m /= 10.0;
      ++e;
    }
    return {m, e};
  }

  std::string str(int digits = 3) const { return decimal(digits).str(digits); }

  friend LogCount operator*(LogCount a, LogCount b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return from_log2(a.log2_ + b.log2_);
  }
  friend LogCount operator/(LogCount a, LogCount b) {
    detail::require(!b.is_zero(), "LogCount: division by zero");
    if (a.is_zero()) return zero();
    return from_log2(a.log2_ - b.log2_);
  }
  /// Sum in the linear domain, evaluated as a log-sum-exp.
  friend LogCount operator+(LogCount a, LogCount b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = std::max(a.log2_, b.log2_);
    const double lo = std::min(a.log2_, b.log2_);
    return from_log2(hi + std::log1p(std::exp2(lo - hi)) / std::log(2.0));
  }
  LogCount& operator+=(LogCount o) { return *this = *this + o; }
  LogCount& operator*=(LogCount o) { return *this = *this * o; }

  friend bool operator==(LogCount a, LogCount b) { return a.log2_ == b.log2_; }
  friend auto operator<=>(LogCount a, LogCount b) { return a.log2_ <=> b.log2_; }

private:
  double log2_ = -std::numeric_limits<double>::infinity();
};

}  // namespace cskpa
