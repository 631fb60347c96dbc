#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcslab/core_types.hpp"
#include "vcslab/moments.hpp"
#include "vcslab/report.hpp"

namespace vcs {

// One row per z variable: sum_t coeffs[t] * Delta_t = 0, Delta_t = n_t - n'_t over all towers.
// Fixed towers have Delta = 0 inside a VCS.
struct SelectionRule {
  std::string class_id;
  int dim = 2;
  std::vector<int> summed;
  std::vector<std::vector<double>> rows;

  static SelectionRule single(const std::vector<double>& coeffs);
  // include_fixed keeps terms on fixed towers
  std::vector<std::string> equations(bool include_fixed = true) const;
  bool satisfied(const std::vector<long long>& delta_summed) const;
};

SelectionRule selection_rule(const ClassSpec& spec, const FrequencyConfig& cfg);

// p/q with q <= max_den and |x - p/q| <= tol max(1, |x|), if any. The default tol only admits
// rounding error, so an irrational close to a convergent (pi/3 ~ 382136/364913) stays irrational.
std::optional<std::pair<long long, long long>> rationalize(double x, long long max_den = 1000000, double tol = 1e-14);

// all nonzero Delta over the summed towers with |Delta_s| <= window satisfying every row
std::vector<std::vector<long long>> aliasing_solutions(const SelectionRule& rule, int window);

// Gram matrix against the identity on the truncated basis; diagonal from the moment integrals,
// off-diagonal zeros certified by the selection rule, aliased pairs integrated and flagged.
VerificationReport resolution_residual(const ClassSpec& spec, const FrequencyConfig& cfg,
                                       const std::vector<unsigned>& fixed, unsigned nmax,
                                       const MeasureDensity* density = nullptr, double tol = 1e-6);

}  // namespace vcs
