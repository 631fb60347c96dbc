#pragma once

#include <cmath>
#include <limits>

namespace vcs {

// Signed magnitude stored as log|v|. sign == 0 means exactly zero.
struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static LogValue zero() { return {}; }
  static LogValue one() { return {0.0, 1}; }
  static LogValue from_log(double la, int s = 1) { return {la, s}; }
  static LogValue from_double(double v) {
    if (v == 0.0) return zero();
    return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
  }

  bool is_zero() const { return sign == 0; }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  LogValue operator*(const LogValue& o) const {
    if (sign == 0 || o.sign == 0) return zero();
    return {log_abs + o.log_abs, sign * o.sign};
  }
  LogValue operator/(const LogValue& o) const {
    if (o.sign == 0) return {std::numeric_limits<double>::infinity(), sign == 0 ? 1 : sign};
    if (sign == 0) return zero();
    return {log_abs - o.log_abs, sign * o.sign};
  }
};

// log(exp(a) + exp(b)) without overflow
inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

}  // namespace vcs
