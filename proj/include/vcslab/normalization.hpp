#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vcslab/core_types.hpp"
#include "vcslab/report.hpp"

namespace vcs {

// c0 + sum_s c[s] n_s
struct LinearForm {
  double c0 = 0.0;
  std::vector<double> c;
  double eval(const std::vector<double>& n) const;
  bool depends_on_n() const;
};

// sign = -1 divides by Gamma(arg), +1 multiplies
struct GammaTerm {
  LinearForm arg;
  int sign = -1;
};

// log t(n) = linear(n) + sum sign_k lgGamma(arg_k(n)); dims listed in frozen only take n = 0
// (z = 0 on a variable whose exponent grows with that index).
class TermGenerator {
 public:
  std::string name;
  LinearForm linear;
  std::vector<GammaTerm> gammas;
  std::vector<bool> frozen;
  bool zero = false;  // every term vanishes

  int dims() const { return static_cast<int>(linear.c.size()); }
  double log_term(const std::vector<double>& n) const;
  LogValue eval(const std::vector<unsigned>& n) const;
  // per-index weights exp(c_s)
  std::vector<double> weights() const;
  // -lgGamma of affine arguments only: log-concave, so ratios decrease along every axis
  bool log_concave() const;
};

// |a_n(z)|^2 over the summed indices of a class.
TermGenerator term_generator(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<Complex>& z,
                             const std::vector<unsigned>& fixed);
// prod_s r_s^{n_s}
TermGenerator geometric_generator(const std::vector<double>& ratios);
// prod_s w_s^{n_s} / n_s!
TermGenerator double_exponential(const std::vector<double>& weights);

struct NormResult {
  double log_norm = 0.0;
  std::vector<unsigned> truncation;
  double tail_bound = 0.0;  // relative to the value
  std::string method;       // "series" or "closed_form"
  size_t terms = 0;
  bool ok = true;
  std::string diagnostic;
  // printed closed form when it disagrees with the coefficients it belongs to
  std::optional<double> printed_log_norm;
  bool suspected_typo = false;
};

NormResult norm_series(const TermGenerator& gen, double rel_tol = 1e-13, unsigned max_terms = 200000);

// Available when every summed index enters one unit-coefficient Gamma of its own, so the
// sum factorizes into 1F1(1; b; w) factors. Unavailable for coupled double sums.
std::optional<NormResult> norm_closed_form(const ClassSpec& spec, const FrequencyConfig& cfg,
                                           const std::vector<Complex>& z, const std::vector<unsigned>& fixed);

// Series against the closed form at |z_v|^2 = f * omega_v for each f in z_scales. Classes
// without a closed form report the series tail bound instead.
VerificationReport verify_norm(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<unsigned>& fixed,
                               const std::vector<double>& z_scales = {0.1, 1.0, 5.0}, double tol = 1e-9);

struct TruncatedState {
  ClassSpec spec;
  std::vector<Complex> z;
  unsigned nmax = 0;
  std::map<std::vector<unsigned>, Complex> coeffs;
  double lognorm = 0.0;
  double tail_bound = 0.0;  // 1 - sum |c|^2 over the window, plus the norm's own tail
};

TruncatedState state(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<Complex>& z,
                     const std::vector<unsigned>& fixed, unsigned nmax);

}  // namespace vcs
