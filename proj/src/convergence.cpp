#include "vcslab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vcslab/special.hpp"

namespace vcs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSlopeFloor = 1e-9;
constexpr double kMaxDepth = 1e13;

std::vector<double> point(const std::vector<double>& base, const std::vector<double>& dir, double N) {
  std::vector<double> p = base;
  for (size_t k = 0; k < p.size(); ++k) p[k] += dir[k] * N;
  return p;
}

double depth_along(const TermGenerator& gen, const std::vector<double>& base, const std::vector<double>& dir,
                   double probe_depth) {
  double D = probe_depth;
  for (const auto& g : gen.gammas) {
    double rate = 0.0;
    for (int s = 0; s < gen.dims(); ++s) rate += g.arg.c[s] * dir[s];
    if (rate <= 0.0) continue;
    const double offset = std::fabs(g.arg.eval(base));
    D = std::max(D, 64.0 * std::max(1.0, offset) / rate);
  }
  return std::min(std::ceil(D), kMaxDepth);
}

AxisLimit limit_along(const TermGenerator& gen, const std::vector<double>& base, const std::vector<double>& dir,
                      int axis, double probe_depth) {
  AxisLimit a;
  a.axis = axis;
  a.at = base;
  const double D = depth_along(gen, base, dir, probe_depth);
  for (double N : {D, 2 * D, 4 * D}) {
    a.depths.push_back(N);
    a.log_ratio.push_back(log_ratio(gen, point(base, dir, N), axis));
  }
  const auto& l = a.log_ratio;
  if (l[0] == kNegInf || l[1] == kNegInf || l[2] == kNegInf) {
    a.limit = 0.0;
    a.status = Status::Convergent;
    return a;
  }
  a.slope = (l[0] - l[2]) / std::log(4.0);
  const double resid = std::fabs(l[0] - a.slope * std::log(2.0) - l[1]);
  const bool fits = resid <= kDecisiveMargin * std::fabs(l[0] - l[2]) + 1e-12;
  if (fits && a.slope > kSlopeFloor) {
    a.limit = 0.0;
    a.status = Status::Convergent;
    return a;
  }
  if (fits && a.slope < -kSlopeFloor) {
    a.limit = INFINITY;
    a.status = Status::Divergent;
    return a;
  }
  a.limit = std::exp(l[2]);
  const double lo = std::exp(std::min({l[0], l[1], l[2]}));
  const double hi = std::exp(std::max({l[0], l[1], l[2]}));
  if (hi < 1.0 - kDecisiveMargin) {
    a.status = Status::Convergent;
  } else if (lo > 1.0 + kDecisiveMargin) {
    a.status = Status::Divergent;
  } else if (std::min({l[0], l[1], l[2]}) >= -1e-12) {
    // ratio pinned at 1 with non-decreasing terms: the terms do not vanish
    a.status = Status::Divergent;
  }
  return a;
}

Json limit_json(const AxisLimit& a) {
  Json j;
  j["axis"] = a.axis + 1;
  j["at"] = a.at;
  j["depths"] = a.depths;
  j["log_ratio"] = a.log_ratio;
  j["slope"] = a.slope;
  j["limit"] = a.limit;
  j["status"] = status_name(a.status);
  return j;
}

Verdict combine(const std::vector<AxisLimit>& lims, const std::string& test) {
  Verdict v;
  bool all_conv = true;
  const AxisLimit* bad = nullptr;
  for (const auto& a : lims) {
    v.details["limits"].push_back(limit_json(a));
    if (a.status != Status::Convergent) all_conv = false;
    if (a.status == Status::Divergent && !bad) bad = &a;
  }
  if (bad) {
    v.status = Status::Divergent;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: ratio along n%d does not fall below 1 (estimated limit %.6g)", test.c_str(),
                  bad->axis + 1, bad->limit);
    v.witness = buf;
  } else if (all_conv) {
    v.status = Status::Convergent;
    v.witness = test + ": every limiting ratio is below 1";
  } else {
    v.witness = test + ": a limiting ratio is within the margin of 1";
  }
  return v;
}

// probe window beyond the threshold plus a few far points along axes and diagonals
std::vector<std::vector<double>> probe_points(const TermGenerator& gen, unsigned threshold) {
  const int D = gen.dims();
  std::vector<std::vector<double>> pts;
  auto lo = [&](int s) { return gen.frozen[s] ? 0.0 : static_cast<double>(threshold); };
  const unsigned span = D == 1 ? 400 : 40;
  std::vector<unsigned> idx(D, 0);
  while (true) {
    std::vector<double> p(D);
    for (int s = 0; s < D; ++s) p[s] = lo(s) + (gen.frozen[s] ? 0 : idx[s]);
    pts.push_back(p);
    int k = 0;
    while (k < D) {
      if (!gen.frozen[k] && idx[k] < span) {
        ++idx[k];
        break;
      }
      idx[k] = 0;
      ++k;
    }
    if (k == D) break;
  }
  for (double far : {128.0, 512.0, 2048.0, 16384.0}) {
    for (int s = 0; s < D; ++s) {
      if (gen.frozen[s]) continue;
      std::vector<double> p(D);
      for (int t = 0; t < D; ++t) p[t] = lo(t);
      p[s] = far;
      pts.push_back(p);
    }
    std::vector<double> p(D);
    for (int t = 0; t < D; ++t) p[t] = gen.frozen[t] ? 0.0 : far;
    pts.push_back(p);
  }
  return pts;
}

std::string index_str(const std::vector<double>& n) {
  std::string s = "(";
  for (size_t k = 0; k < n.size(); ++k) {
    char b[32];
    std::snprintf(b, sizeof b, "%.0f", n[k]);
    s += (k ? "," : "") + std::string(b);
  }
  return s + ")";
}

// log of the sum over (a, b] along axis, exact for short blocks, sampled otherwise
double block_log_sum(const TermGenerator& gen, std::vector<double> n, int axis, double a, double b) {
  double s = kNegInf;
  const double width = b - a;
  if (width <= 4096) {
    for (double k = a + 1; k <= b; k += 1) {
      n[axis] = k;
      s = log_add(s, gen.log_term(n));
    }
    return s;
  }
  const int M = 2048;
  const double h = width / M;
  for (int i = 0; i < M; ++i) {
    n[axis] = std::floor(a + 1 + (i + 0.5) * h);
    s = log_add(s, gen.log_term(n));
  }
  return s + std::log(h);
}

}  // namespace

std::string status_name(Status s) {
  switch (s) {
    case Status::Convergent: return "convergent";
    case Status::Divergent: return "divergent";
    case Status::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double log_ratio(const TermGenerator& gen, const std::vector<double>& n, int axis) {
  if (gen.zero || gen.frozen[axis]) return kNegInf;
  double l = gen.linear.c[axis];
  for (const auto& g : gen.gammas) {
    const double h = g.arg.c[axis];
    if (h != 0.0) l += g.sign * sf::log_gamma_diff(g.arg.eval(n), h);
  }
  return l;
}

double scaled_depth(const TermGenerator& gen, const std::vector<double>& at, int axis, double probe_depth) {
  std::vector<double> dir(gen.dims(), 0.0), base = at;
  dir[axis] = 1.0;
  base[axis] = 0.0;
  return depth_along(gen, base, dir, probe_depth);
}

AxisLimit axis_limit(const TermGenerator& gen, std::vector<double> at, int axis, double probe_depth) {
  std::vector<double> dir(gen.dims(), 0.0);
  dir[axis] = 1.0;
  at[axis] = 0.0;
  return limit_along(gen, at, dir, axis, probe_depth);
}

std::vector<Verdict> row_column_check(const TermGenerator& gen, double probe_depth) {
  std::vector<Verdict> out;
  const int D = gen.dims();
  for (int axis = 0; axis < D; ++axis) {
    std::vector<AxisLimit> lims;
    if (gen.frozen[axis]) {
      Verdict v;
      v.status = Status::Convergent;
      v.witness = "n" + std::to_string(axis + 1) + " only takes the value 0";
      out.push_back(v);
      continue;
    }
    const std::vector<double> others = D == 1 ? std::vector<double>{0.0} : std::vector<double>{0.0, 8.0, 64.0};
    for (double o : others) {
      std::vector<double> at(D, 0.0);
      for (int s = 0; s < D; ++s)
        if (s != axis && !gen.frozen[s]) at[s] = o;
      lims.push_back(axis_limit(gen, at, axis, probe_depth));
    }
    out.push_back(combine(lims, "row/column n" + std::to_string(axis + 1)));
  }
  return out;
}

TermGenerator comparison_reference(const TermGenerator& gen) {
  TermGenerator r;
  r.name = gen.name + ":reference";
  r.linear = gen.linear;
  r.frozen = gen.frozen;
  r.zero = gen.zero;
  const int D = gen.dims();
  for (const auto& g : gen.gammas)
    if (!g.arg.depends_on_n()) r.gammas.push_back(g);
  for (int s = 0; s < D; ++s) {
    LinearForm a{1.0, std::vector<double>(D, 0.0)};
    a.c[s] = 1.0;
    r.gammas.push_back({a, -1});
  }
  return r;
}

Verdict comparison_check(const TermGenerator& gen, const TermGenerator& reference, unsigned threshold) {
  Verdict v;
  v.details["threshold"] = threshold;
  const Verdict ref = ratio_test_double(reference);
  v.details["reference"] = status_name(ref.status);
  for (const auto& p : probe_points(gen, threshold)) {
    const double a = gen.log_term(p), b = reference.log_term(p);
    if (a == kNegInf) continue;
    if (a > b + 1e-12 * (1.0 + std::fabs(b))) {
      v.witness = "comparison: domination fails at n=" + index_str(p);
      v.details["first_violation"] = p;
      return v;
    }
  }
  if (ref.status == Status::Convergent) {
    v.status = Status::Convergent;
    v.witness = "comparison: dominated by a convergent reference beyond the threshold window";
  } else {
    v.witness = "comparison: reference series is not certified convergent";
  }
  return v;
}

Verdict ratio_test_double(const TermGenerator& gen, double probe_depth) {
  const int D = gen.dims();
  std::vector<AxisLimit> lims;
  std::vector<std::vector<double>> dirs;
  if (D == 1) {
    dirs = {{1.0}};
  } else {
    dirs = {std::vector<double>(D, 1.0)};
    for (int s = 0; s < D; ++s) {
      std::vector<double> d(D, 1.0);
      d[s] = 2.0;
      dirs.push_back(d);
    }
  }
  for (auto dir : dirs) {
    for (int s = 0; s < D; ++s)
      if (gen.frozen[s]) dir[s] = 0.0;
    const std::vector<double> base(D, 0.0);
    for (int axis = 0; axis < D; ++axis) {
      if (gen.frozen[axis]) continue;
      AxisLimit a = limit_along(gen, base, dir, axis, probe_depth);
      a.at = dir;
      lims.push_back(a);
    }
  }
  if (lims.empty()) {
    Verdict v;
    v.status = Status::Convergent;
    v.witness = "ratio: finite sum";
    return v;
  }
  return combine(lims, "ratio");
}

Verdict ratio_comparison_check(const TermGenerator& gen, const TermGenerator& reference, double probe_depth,
                               unsigned threshold) {
  Verdict v;
  v.details["threshold"] = threshold;
  const Verdict ref = ratio_test_double(reference, probe_depth);
  v.details["reference"] = status_name(ref.status);
  for (const auto& p : probe_points(gen, threshold))
    for (int axis = 0; axis < gen.dims(); ++axis) {
      if (gen.frozen[axis]) continue;
      const double a = log_ratio(gen, p, axis), b = log_ratio(reference, p, axis);
      if (a > b + 1e-12 * (1.0 + std::fabs(b))) {
        v.witness = "ratio-comparison: cross-ratio inequality fails along n" + std::to_string(axis + 1) +
                    " at n=" + index_str(p);
        v.details["first_violation"] = p;
        return v;
      }
    }
  if (ref.status == Status::Convergent) {
    v.status = Status::Convergent;
    v.witness = "ratio-comparison: cross-ratios bounded by a convergent reference";
  } else {
    v.witness = "ratio-comparison: reference series is not certified convergent";
  }
  return v;
}

bool divergence_flag(const TermGenerator& gen, double probe_depth, double eps_div, int windows) {
  if (gen.zero) return false;
  const int D = gen.dims();
  for (int axis = 0; axis < D; ++axis) {
    if (gen.frozen[axis]) continue;
    std::vector<double> n(D, 0.0);
    double N0 = scaled_depth(gen, n, axis, probe_depth);
    // start past the peak of the terms along this axis, if there is one
    for (double N = N0; N < N0 * 1048576.0; N *= 2.0) {
      n[axis] = N;
      if (log_ratio(gen, n, axis) < 0.0) {
        N0 = N;
        break;
      }
    }
    n[axis] = 0.0;
    double total = log_add(block_log_sum(gen, n, axis, -1.0, std::min(N0, 4095.0)),
                           N0 > 4095.0 ? block_log_sum(gen, n, axis, 4095.0, N0) : kNegInf);
    int run = 0;
    double lo = N0;
    for (int k = 1; k <= windows + 1; ++k) {
      const double hi = lo * 2.0;
      const double b = block_log_sum(gen, n, axis, lo, hi);
      total = log_add(total, b);
      run = (b != kNegInf && b - total > std::log(eps_div)) ? run + 1 : 0;
      if (run >= windows) return true;
      lo = hi;
    }
  }
  return false;
}

Verdict generator_verdict(const TermGenerator& gen, double probe_depth) {
  Verdict out;
  if (gen.zero) {
    out.status = Status::Convergent;
    out.witness = "every term vanishes";
    return out;
  }
  // a divergent row or column already makes the double series diverge
  const auto rows = row_column_check(gen, probe_depth);
  for (size_t k = 0; k < rows.size(); ++k) {
    out.details["row_column"].push_back(rows[k].details);
    if (rows[k].status == Status::Divergent) {
      out.status = Status::Divergent;
      out.witness = rows[k].witness;
      return out;
    }
  }
  const TermGenerator ref = comparison_reference(gen);
  Verdict tests[3];
  tests[0] = comparison_check(gen, ref);
  tests[1] = ratio_test_double(gen, probe_depth);
  tests[2] = ratio_comparison_check(gen, ref, probe_depth);
  const char* names[3] = {"comparison", "ratio", "ratio_comparison"};
  for (int k = 0; k < 3; ++k) {
    out.details[names[k]] = {{"status", status_name(tests[k].status)}, {"witness", tests[k].witness}};
    if (tests[k].status == Status::Inconclusive) continue;
    if (tests[k].status == Status::Convergent && divergence_flag(gen, probe_depth)) {
      out.details["divergence_cross_check"] = "partial sums keep growing";
      out.status = Status::Inconclusive;
      out.witness = std::string(names[k]) + " test contradicted by growing partial sums";
      return out;
    }
    out.status = tests[k].status;
    out.witness = tests[k].witness;
    return out;
  }
  out.witness = "no test was decisive";
  return out;
}

Verdict class_verdict(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<unsigned>& fixed) {
  Verdict out;
  Json dom = Json::array();
  for (const auto& d : spec.domain) dom.push_back(d.str());
  out.details["domain"] = dom;
  const auto bad = spec.violated_domain(cfg);
  out.details["expected"] = bad ? "divergent" : "convergent";
  bool any_div = false, all_conv = true;
  std::string witness;
  for (double f : {0.1, 1.0, 5.0}) {
    std::vector<Complex> z;
    for (const auto& v : spec.vars) z.emplace_back(std::sqrt(f * cfg.omega(v.tower)), 0.0);
    const Verdict v = generator_verdict(term_generator(spec, cfg, z, fixed));
    out.details["probes"].push_back({{"z_scale", f}, {"status", status_name(v.status)}, {"witness", v.witness}});
    if (v.status == Status::Divergent && !any_div) {
      any_div = true;
      witness = v.witness;
    }
    if (v.status != Status::Convergent) {
      all_conv = false;
      if (witness.empty()) witness = v.witness;
    }
    if (v.status == Status::Convergent && witness.empty() && f == 5.0) witness = v.witness;
  }
  out.status = any_div ? Status::Divergent : (all_conv ? Status::Convergent : Status::Inconclusive);
  out.witness = witness;
  return out;
}

std::vector<SurfacePoint> gamma_ratio_surface(double kappa, double gamma13, unsigned m_lo, unsigned m_hi,
                                              unsigned n_lo, unsigned n_hi) {
  if (m_lo > m_hi || n_lo > n_hi) throw std::invalid_argument("gamma_ratio_surface: empty range");
  if (!(kappa >= 0.0) || !(gamma13 > 0.0)) throw std::invalid_argument("gamma_ratio_surface: bad parameters");
  std::vector<SurfacePoint> out;
  for (unsigned m = m_lo; m <= m_hi; ++m)
    for (unsigned n = n_lo; n <= n_hi; ++n) {
      const double x = gamma13 + kappa * n + m;
      const double ratio = std::exp(-sf::log_gamma_diff(x, kappa));
      const double power = std::pow(x + kappa, -kappa);
      out.push_back({m, n, kappa, ratio - power});
    }
  return out;
}

std::string surface_csv(const std::vector<SurfacePoint>& pts, bool header) {
  std::string s = header ? "m,n,kappa,difference\n" : "";
  char buf[96];
  for (const auto& p : pts) {
    std::snprintf(buf, sizeof buf, "%u,%u,%.17g,%.17g\n", p.m, p.n, p.kappa, p.difference);
    s += buf;
  }
  return s;
}

}  // namespace vcs
