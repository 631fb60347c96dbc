#pragma once

#include <string>
#include <vector>

#include "vcslab/normalization.hpp"
#include "vcslab/report.hpp"

namespace vcs {

enum class Status { Convergent, Divergent, Inconclusive };
std::string status_name(Status s);

struct Verdict {
  Status status = Status::Inconclusive;
  std::string witness;
  Json details = Json::object();
};

// Ratio-limit estimate along one axis: log ratios at depths D, 2D, 4D fitted to C - s log N.
struct AxisLimit {
  int axis = 0;
  std::vector<double> at;      // probe point (axis entry replaced by the depth)
  std::vector<double> depths;  // three depths
  std::vector<double> log_ratio;
  double slope = 0.0;  // s; > 0 means the ratio tends to 0
  double limit = 0.0;  // estimated limiting ratio (0 when slope > 0)
  Status status = Status::Inconclusive;
};

constexpr double kDecisiveMargin = 0.05;

// log t(n + e_axis) - log t(n), evaluated without cancellation
double log_ratio(const TermGenerator& gen, const std::vector<double>& n, int axis);
// depth D >= probe_depth such that every Gamma argument grows by at least 64 max(1, offset)
double scaled_depth(const TermGenerator& gen, const std::vector<double>& at, int axis, double probe_depth);
AxisLimit axis_limit(const TermGenerator& gen, std::vector<double> at, int axis, double probe_depth);

// per-axis ratio tests with the other index held at 0, 8 and 64
std::vector<Verdict> row_column_check(const TermGenerator& gen, double probe_depth = 64);
// term-wise domination gen <= reference beyond the threshold window (K0, L0) = (2, 2)
Verdict comparison_check(const TermGenerator& gen, const TermGenerator& reference, unsigned threshold = 2);
// joint paths (N,N), (N,2N), (2N,N)
Verdict ratio_test_double(const TermGenerator& gen, double probe_depth = 64);
// a_{k,l+1} b_{k,l} <= a_{k,l} b_{k,l+1} and the k-shifted inequality beyond the threshold
Verdict ratio_comparison_check(const TermGenerator& gen, const TermGenerator& reference, double probe_depth = 64,
                               unsigned threshold = 2);
// partial sums over growing windows (from the scaled depth) that keep increasing
bool divergence_flag(const TermGenerator& gen, double probe_depth = 64, double eps_div = 1e-3, int windows = 3);

// Reference series for the comparison test: each summed index keeps its log-linear weight and
// gets 1/n! in place of its own Gamma factor; all other Gamma factors are dropped.
TermGenerator comparison_reference(const TermGenerator& gen);

// Comparison, then ratio, then ratio-comparison; first decisive verdict wins.
Verdict generator_verdict(const TermGenerator& gen, double probe_depth = 64);
Verdict class_verdict(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<unsigned>& fixed);

struct SurfacePoint {
  unsigned m = 0, n = 0;
  double kappa = 0.0;
  double difference = 0.0;
};
// Gamma[g + kappa n + m] / Gamma[g + kappa (n+1) + m] - [g + kappa (n+1) + m]^-kappa
std::vector<SurfacePoint> gamma_ratio_surface(double kappa, double gamma13, unsigned m_lo, unsigned m_hi,
                                              unsigned n_lo, unsigned n_hi);
std::string surface_csv(const std::vector<SurfacePoint>& pts, bool header = true);

}  // namespace vcs
