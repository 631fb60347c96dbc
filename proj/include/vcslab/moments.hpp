#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vcslab/core_types.hpp"
#include "vcslab/report.hpp"

namespace vcs {

// chi(u) = K prod_j u_j^{q_j} exp(-sum_v prod_j u_j^{A_vj} / c_v),  u_v = r_v^2.
// Moments: int prod du chi(u) prod u^{E(n)} = prod omega^P Gamma(G) / prod Gamma(den).
struct MeasureDensity {
  ClassSpec spec;
  FrequencyConfig cfg;
  std::vector<unsigned> fixed;
  std::vector<std::vector<double>> A;
  std::vector<double> log_c;
  std::vector<double> q;
  double log_K = 0.0;
  std::vector<int> peel_order;
  std::string source;  // "catalog" or "solver"

  int size() const { return static_cast<int>(q.size()); }
  double log_value(const std::vector<double>& u) const;
  std::string formula() const;
  Json to_json() const;
};

class DensityUndefined : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Generalized moment solver (mixed formalism with a triangular change of variables).
// log_c_override pins the scale of a non-pivot variable; the rest adjusts.
MeasureDensity solve_density(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<unsigned>& fixed,
                             const std::map<int, double>& log_c_override = {});

// Printed closed forms: one-dof general solutions, the four two-dof general
// solutions, and product densities for the 3D classes. Unshifted, no kappa overrides.
std::optional<MeasureDensity> catalog_density(const ClassSpec& spec, const FrequencyConfig& cfg,
                                              const std::vector<unsigned>& fixed);

MeasureDensity density_for(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<unsigned>& fixed);

enum class TargetForm { PlainPlain, GammaPlain, PlainGamma, GammaGamma };
MeasureDensity solve_generalized(TargetForm form, const std::array<double, 8>& tuple, const FrequencyConfig& cfg,
                                 unsigned n2);

// max |a - b| over the entries of A, log c, q and log K
double density_distance(const MeasureDensity& a, const MeasureDensity& b);

struct QuadSpec {
  int laguerre_nodes = 200;
  double simpson_tol = 1e-12;
  double agree_tol = 1e-9;
  double fail_tol = 1e-7;
  double tolerance = 1e-8;  // moment residual
};

struct MomentEval {
  LogValue value;
  double log_laguerre = 0.0;
  double log_simpson = 0.0;
  double disagreement = 0.0;  // worst relative disagreement over the 1D factors
  bool ok = true;
  std::string diagnostic;
};

MomentEval moment_integral(const MeasureDensity& d, const std::vector<unsigned>& summed, const QuadSpec& quad = {});
// int chi(u) prod_v u_v^{e_v} du for arbitrary real exponents e_v
MomentEval moment_at_exponents(const MeasureDensity& d, const std::vector<double>& exponents,
                               const QuadSpec& quad = {});

// Relative residual |integral - target| / target for every summed index <= nmax.
VerificationReport verify_moments(const ClassSpec& spec, const FrequencyConfig& cfg,
                                  const std::vector<unsigned>& fixed, unsigned nmax, const QuadSpec& quad = {},
                                  const MeasureDensity* density = nullptr);

// all summed multi-indices with entries <= nmax, lexicographic
std::vector<std::vector<unsigned>> index_window(size_t dims, unsigned nmax);

}  // namespace vcs
