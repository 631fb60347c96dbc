#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcslab/core_types.hpp"
#include "vcslab/report.hpp"

namespace vcs {

// VCSLAB_THREADS if set and positive, else the hardware concurrency
int thread_count();
// Runs fn(0..n-1) on up to `threads` workers. Callers write results by index, so the
// outcome does not depend on scheduling. The lowest-index exception is rethrown.
void parallel_for(size_t n, const std::function<void(size_t)>& fn, int threads);

// registry entry as JSON: towers printed 1-based, affine forms as text
Json class_json(const ClassSpec& spec);

// omega grid used by the moment and norm sweeps
std::vector<std::vector<double>> omega_grid(int dim);
// irrational frequencies (1, sqrt2[, sqrt3]): no rational kappa, so no phase aliasing
FrequencyConfig admissible_point(int dim);

struct RunConfig {
  std::vector<std::string> classes{"all"};
  std::vector<double> omegas;  // empty: omega_grid per class dimension
  std::vector<double> shifts;
  std::map<int, unsigned> fixed;  // tower -> value; missing towers sweep {0, 1, 3}
  std::map<std::pair<int, int>, double> kappa;
  std::vector<double> z_grid{0.1, 1.0, 5.0};
  std::optional<unsigned> nmax;
  std::optional<double> tol;
  std::vector<std::string> checks{"moment", "norm", "resolution", "convergence", "factor", "limits"};
  std::string out;

  void validate() const;  // throws std::invalid_argument
  Json to_json() const;
  static RunConfig from_json(const Json& j);
};

extern const std::vector<std::string> kAllChecks;

struct RunOutcome {
  Json report;
  int exit_code = 0;  // 0 all expectations met, 1 a check failed
};
RunOutcome run_verify(const RunConfig& cfg, int threads);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  Json details = Json::object();
  Json to_json() const;
};

CriterionResult criterion_moments(int threads);
CriterionResult criterion_norms(int threads);
CriterionResult criterion_resolution(int threads);
CriterionResult criterion_convergence(int threads);
CriterionResult criterion_surfaces();
CriterionResult criterion_taxonomy(int threads);

// criteria 1-6 in order; determinism (7) compares two of these documents
std::vector<CriterionResult> run_acceptance(int threads);
Json acceptance_report(const std::vector<CriterionResult>& results);

}  // namespace vcs
