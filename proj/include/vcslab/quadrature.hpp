#pragma once

#include <memory>
#include <vector>

namespace vcs::quad {

// Generalized Gauss-Laguerre rule for weight t^alpha e^-t, alpha > -1.
struct LaguerreRule {
  double alpha = 0.0;
  std::vector<double> nodes;
  std::vector<double> log_weights;
};

std::shared_ptr<const LaguerreRule> gauss_laguerre(double alpha, int n = 200);

// log of J(x, a, c) = int_0^inf s^(x-1) exp(-s^a / c) ds for x, a, c > 0.
// Route A: substitution t = s^a/c, fractional power folded into the Laguerre weight.
double log_stretched_laguerre(double x, double a, double c, int nodes = 200);
// Route B: adaptive Simpson in log s, peak-centred.
double log_stretched_simpson(double x, double a, double c, double rel_tol = 1e-12);

}  // namespace vcs::quad
