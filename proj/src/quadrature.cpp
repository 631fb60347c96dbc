#include "vcslab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "vcslab/log_value.hpp"
#include "vcslab/special.hpp"

namespace vcs::quad {

namespace {

// L_n^(alpha)(z) and L_{n-1}^(alpha)(z) with a common scale exp(log_scale).
struct LaguerrePair {
  double pn, pn1, log_scale;
};

LaguerrePair laguerre_pair(int n, double alpha, double z) {
  double p1 = 1.0, p2 = 0.0, ls = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = ((2.0 * j + 1.0 + alpha - z) * p2 - (j + alpha) * p3) / (j + 1.0);
    if (std::fabs(p1) > 1e150) {
      p1 *= 1e-150;
      p2 *= 1e-150;
      ls += 150.0 * std::log(10.0);
    }
  }
  return {p1, p2, ls};
}

std::shared_ptr<const LaguerreRule> build_rule(double alpha, int n) {
  Eigen::VectorXd diag(n), sub(n - 1);
  for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + 1.0 + alpha;
  for (int i = 1; i < n; ++i) sub[i - 1] = std::sqrt(i * (i + alpha));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_laguerre: eigen solve failed");

  auto rule = std::make_shared<LaguerreRule>();
  rule->alpha = alpha;
  rule->nodes.resize(n);
  rule->log_weights.resize(n);
  const double lg = sf::log_gamma(alpha + n) - sf::log_gamma(static_cast<double>(n)) - std::log(double(n));
  for (int i = 0; i < n; ++i) {
    double z = es.eigenvalues()[i];
    LaguerrePair lp{};
    double pp = 0.0;
    for (int it = 0; it < 8; ++it) {
      lp = laguerre_pair(n, alpha, z);
      pp = (n * lp.pn - (n + alpha) * lp.pn1) / z;
      const double dz = lp.pn / pp;
      z -= dz;
      if (std::fabs(dz) <= 1e-15 * z) break;
    }
    lp = laguerre_pair(n, alpha, z);
    pp = (n * lp.pn - (n + alpha) * lp.pn1) / z;
    rule->nodes[i] = z;
    rule->log_weights[i] = lg - std::log(std::fabs(pp)) - std::log(std::fabs(lp.pn1)) - 2.0 * lp.log_scale;
  }
  return rule;
}

}  // namespace

std::shared_ptr<const LaguerreRule> gauss_laguerre(double alpha, int n) {
  if (!(alpha > -1.0)) throw std::domain_error("gauss_laguerre: alpha must exceed -1");
  if (n < 2) throw std::domain_error("gauss_laguerre: need at least 2 nodes");
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::shared_ptr<const LaguerreRule>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({alpha, n});
    if (it != cache.end()) return it->second;
  }
  auto rule = build_rule(alpha, n);
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 4096) cache.clear();
  cache.emplace(std::make_pair(alpha, n), rule);
  return rule;
}

double log_stretched_laguerre(double x, double a, double c, int nodes) {
  if (!(x > 0.0) || !(a > 0.0) || !(c > 0.0)) throw std::domain_error("log_stretched_laguerre: bad parameters");
  // J = c^{x/a}/a * int t^{p} e^-t dt with p = x/a - 1 = alpha + k
  const double p = x / a - 1.0;
  double alpha = p;
  int k = 0;
  if (p >= 0.0) {
    k = static_cast<int>(std::floor(p));
    alpha = p - k;
  }
  if (k > nodes) throw std::domain_error("log_stretched_laguerre: polynomial degree exceeds rule exactness");
  const auto rule = gauss_laguerre(alpha, nodes);
  double acc = -INFINITY;
  for (size_t i = 0; i < rule->nodes.size(); ++i)
    acc = log_add(acc, rule->log_weights[i] + k * std::log(rule->nodes[i]));
  return (x / a) * std::log(c) - std::log(a) + acc;
}

namespace {

struct Integrand {
  double x, a, c, ts, peak;
  double operator()(double t) const {
    // exponent relative to the peak value
    return std::exp(x * t - std::exp(a * t) / c - peak);
  }
};

double simpson_rec(const Integrand& f, double l, double r, double fl, double fm, double fr, double whole,
                   double eps, int depth) {
  const double m = 0.5 * (l + r);
  const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - l) / 6.0 * (fl + 4.0 * flm + fm);
  const double right = (r - m) / 6.0 * (fm + 4.0 * frm + fr);
  const double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
  return simpson_rec(f, l, m, fl, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_rec(f, m, r, fm, frm, fr, right, 0.5 * eps, depth - 1);
}

}  // namespace

double log_stretched_simpson(double x, double a, double c, double rel_tol) {
  if (!(x > 0.0) || !(a > 0.0) || !(c > 0.0)) throw std::domain_error("log_stretched_simpson: bad parameters");
  const double ts = std::log(c * x / a) / a;
  const double peak = x * ts - x / a;
  Integrand f{x, a, c, ts, peak};
  // log-integrand relative to the peak as a function of d = t - ts
  auto expo = [&](double d) { return x * d - (x / a) * std::expm1(a * d); };
  constexpr double kCut = -60.0;
  double dl = -1.0, dr = 1.0;
  while (expo(dl) > kCut) dl *= 2.0;
  while (expo(dr) > kCut) dr *= 2.0;
  const double lo = ts + dl, hi = ts + dr;

  // the integral is O(width of the peak); tolerance is relative to a crude estimate
  constexpr int kPanels = 64;
  const double h = (hi - lo) / kPanels;
  double crude = 0.0;
  for (int i = 0; i <= kPanels; ++i) crude += f(lo + i * h);
  crude *= h;
  const double eps = rel_tol * crude / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double l = lo + i * h, r = l + h, m = 0.5 * (l + r);
    const double fl = f(l), fm = f(m), fr = f(r);
    const double whole = h / 6.0 * (fl + 4.0 * fm + fr);
    total += simpson_rec(f, l, r, fl, fm, fr, whole, eps, 40);
  }
  return peak + std::log(total);
}

}  // namespace vcs::quad
