#pragma once

#include "vcslab/log_value.hpp"

namespace vcs::sf {

// log Gamma(x), x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

// Rising factorial (g)_n = Gamma(g+n)/Gamma(g).
LogValue pochhammer(double g, unsigned n);

// Gamma(a, x) = int_x^inf t^(a-1) e^-t dt
LogValue upper_incomplete_gamma(double a, double x);

struct Hyp1f1Eval {
  LogValue series;
  LogValue closed;
  double tail_bound = 0.0;  // relative to the series value
  unsigned terms = 0;
  double discrepancy = 0.0;  // |series - closed| / series
};

// 1F1(1; b; x) for b >= 1, x >= 0, by direct series and by the
// incomplete-gamma closed form e^x x^-a (Gamma(a+1) - a Gamma(a, x)), a = b - 1.
Hyp1f1Eval hyp1f1_one_both(double b, double x);
LogValue hyp1f1_one_series(double b, double x);
LogValue hyp1f1_one_closed(double b, double x);
LogValue hyp1f1_one(double b, double x);

// log Gamma(x + h) - log Gamma(x), stable when h << x.
double log_gamma_diff(double x, double h);

// Stirling series log Gamma, valid for x >= 10.
double log_gamma_stirling(double x);

// exp(lgS(num) - lgS(den)); both arguments >= 10. Asymptotic use only.
double stirling_gamma_ratio(double num_arg, double den_arg);

}  // namespace vcs::sf
