#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

namespace gsh {

/// A nonnegative value stored as mantissa * 2^exp2, for magnitudes far
/// outside double range. mantissa == 0 encodes zero regardless of exp2.
struct Scaled {
  double mantissa = 0.0;
  long exp2 = 0;

  static Scaled from_log(double natural_log) {
    if (natural_log == -std::numeric_limits<double>::infinity()) return {0.0, 0};
    const double l2 = natural_log / std::numbers::ln2_v<double>;
    const double e = std::floor(l2);
    return {std::exp2(l2 - e), static_cast<long>(e)};
  }

  double log() const {
    if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::fabs(mantissa)) + static_cast<double>(exp2) * std::numbers::ln2_v<double>;
  }

  /// Collapse to a plain double; underflows to 0 / overflows to inf honestly.
  double value() const { return std::ldexp(mantissa, static_cast<int>(std::clamp(exp2, -4400L, 4400L))); }

  void renormalize() {
    if (mantissa == 0.0 || !std::isfinite(mantissa)) return;
    int e = 0;
    mantissa = std::frexp(mantissa, &e);
    exp2 += e;
  }
};

/// log(sum_i exp(args[i])) with the usual max shift; empty input -> -inf.
inline double log_sum_exp(std::span<const double> args) {
  double m = -std::numeric_limits<double>::infinity();
  for (double a : args) m = std::max(m, a);
  if (!std::isfinite(m)) return m;  // all -inf (or empty)
  double s = 0.0;
  for (double a : args) s += std::exp(a - m);
  return m + std::log(s);
}

inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace gsh
