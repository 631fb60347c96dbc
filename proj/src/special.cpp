#include "vcslab/special.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace vcs::sf {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

// B_{2k} / (2k (2k-1)), k = 1..8
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,        -1.0 / 360.0,    1.0 / 1260.0, -1.0 / 1680.0,
    1.0 / 1188.0,      -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0};

constexpr unsigned kDirectPochhammer = 4096;

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("log_gamma: argument must be positive, got " + std::to_string(x));
  return boost::math::lgamma(x);
}

double log_gamma_stirling(double x) {
  if (!(x >= 10.0)) throw std::domain_error("log_gamma_stirling: argument below 10");
  double s = (x - 0.5) * std::log(x) - x + kHalfLog2Pi;
  double inv = 1.0 / x, inv2 = inv * inv, p = inv;
  for (double c : kStirling) {
    s += c * p;
    p *= inv2;
  }
  return s;
}

double log_gamma_diff(double x, double h) {
  if (h == 0.0) return 0.0;
  const double lo = std::min(x, x + h);
  if (lo < 10.0) return log_gamma(x + h) - log_gamma(x);
  // difference of Stirling series, arranged so nothing large cancels
  const double l1p = std::log1p(h / x);
  double d = (x - 0.5) * l1p + h * std::log(x + h) - h;
  double m = 1.0;
  for (double c : kStirling) {
    // (x+h)^-m - x^-m
    d += c * std::pow(x, -m) * std::expm1(-m * l1p);
    m += 2.0;
  }
  return d;
}

double stirling_gamma_ratio(double num_arg, double den_arg) {
  if (!(num_arg >= 10.0) || !(den_arg >= 10.0))
    throw std::domain_error("stirling_gamma_ratio: arguments must be >= 10");
  return std::exp(log_gamma_diff(den_arg, num_arg - den_arg));
}

LogValue pochhammer(double g, unsigned n) {
  if (n == 0) return LogValue::one();
  if (!(g > 0.0)) throw std::domain_error("pochhammer: base must be positive");
  if (n <= kDirectPochhammer) {
    double s = 0.0;
    for (unsigned k = 0; k < n; ++k) s += std::log(g + k);
    return LogValue::from_log(s);
  }
  return LogValue::from_log(log_gamma_diff(g, static_cast<double>(n)));
}

LogValue upper_incomplete_gamma(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("upper_incomplete_gamma: a must be positive");
  if (!(x >= 0.0)) throw std::domain_error("upper_incomplete_gamma: x must be non-negative");
  if (x == 0.0) return LogValue::from_log(log_gamma(a));
  const double q = boost::math::gamma_q(a, x);
  if (q == 0.0) return LogValue::zero();
  return LogValue::from_log(log_gamma(a) + std::log(q));
}

LogValue hyp1f1_one_closed(double b, double x) {
  if (!(b >= 1.0)) throw std::domain_error("hyp1f1_one: b must be >= 1");
  if (!(x >= 0.0)) throw std::domain_error("hyp1f1_one: x must be >= 0");
  if (x == 0.0) return LogValue::one();
  if (b == 1.0) return LogValue::from_log(x);
  // 1F1(1; a+1; x) = e^x x^-a (Gamma(a+1) - a Gamma(a, x)), a = b - 1.
  // The bracket equals Gamma(a+1) P(a, x); the regularized lower function
  // avoids the cancellation at small x.
  const double a = b - 1.0;
  const double p = boost::math::gamma_p(a, x);
  return LogValue::from_log(x - a * std::log(x) + log_gamma(a + 1.0) + std::log(p));
}

namespace {

struct SeriesSum {
  double log_value;
  double rel_tail;
  unsigned terms;
};

SeriesSum hyp1f1_series_sum(double b, double x) {
  if (!(b >= 1.0)) throw std::domain_error("hyp1f1_one: b must be >= 1");
  if (!(x >= 0.0)) throw std::domain_error("hyp1f1_one: x must be >= 0");
  if (x == 0.0) return {0.0, 0.0, 1};
  double scale = 0.0;  // log of the common factor
  double sum = 1.0, t = 1.0;
  unsigned k = 0;
  constexpr unsigned kMaxTerms = 50000000;
  for (; k < kMaxTerms; ++k) {
    t *= x / (b + k);
    sum += t;
    if (sum > 1e280) {
      sum *= 1e-280;
      t *= 1e-280;
      scale += 280.0 * std::log(10.0);
    }
    const double r = x / (b + k + 2);
    if (r < 1.0) {
      const double tail = t * (x / (b + k + 1)) / (1.0 - r);
      if (tail <= 1e-17 * sum) return {scale + std::log(sum), tail / sum, k + 2};
    }
  }
  throw std::runtime_error("hyp1f1_one: series did not reach tolerance");
}

}  // namespace

LogValue hyp1f1_one_series(double b, double x) {
  return LogValue::from_log(hyp1f1_series_sum(b, x).log_value);
}

Hyp1f1Eval hyp1f1_one_both(double b, double x) {
  Hyp1f1Eval out;
  const SeriesSum s = hyp1f1_series_sum(b, x);
  out.series = LogValue::from_log(s.log_value);
  out.tail_bound = s.rel_tail;
  out.terms = s.terms;
  out.closed = hyp1f1_one_closed(b, x);
  out.discrepancy = std::fabs(std::expm1(out.closed.log_abs - out.series.log_abs));
  return out;
}

LogValue hyp1f1_one(double b, double x) { return hyp1f1_one_series(b, x); }

}  // namespace vcs::sf
