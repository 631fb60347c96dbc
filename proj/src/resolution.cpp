#include "vcslab/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <Eigen/Dense>

namespace vcs {

SelectionRule SelectionRule::single(const std::vector<double>& coeffs) {
  SelectionRule r;
  r.dim = static_cast<int>(coeffs.size());
  r.summed.resize(coeffs.size());
  std::iota(r.summed.begin(), r.summed.end(), 0);
  r.rows.push_back(coeffs);
  return r;
}

std::vector<std::string> SelectionRule::equations(bool include_fixed) const {
  std::vector<std::string> out;
  for (const auto& row : rows) {
    std::string s;
    for (int t = 0; t < static_cast<int>(row.size()); ++t) {
      if (row[t] == 0.0) continue;
      if (!include_fixed && std::find(summed.begin(), summed.end(), t) == summed.end()) continue;
      char buf[48];
      if (row[t] == 1.0) std::snprintf(buf, sizeof buf, "D%d", t + 1);
      else std::snprintf(buf, sizeof buf, "%.6g*D%d", row[t], t + 1);
      s += (s.empty() ? "" : " + ") + std::string(buf);
    }
    if (s.empty()) continue;
    s += " = 0";
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

std::optional<std::pair<long long, long long>> rationalize(double x, long long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // continued-fraction convergents h/k
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (std::fabs(a) > 9e15) break;
    const long long ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::fabs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol * std::max(1.0, std::fabs(x))) return std::make_pair(h1, k1);
    const double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

bool SelectionRule::satisfied(const std::vector<long long>& delta) const {
  for (const auto& row : rows) {
    // rational rows are checked in exact integer arithmetic
    bool exact = true;
    long long lcm = 1;
    std::vector<std::pair<long long, long long>> q;
    for (size_t k = 0; k < summed.size(); ++k) {
      const auto rq = rationalize(row[summed[k]]);
      if (!rq) {
        exact = false;
        break;
      }
      q.push_back(*rq);
      lcm = std::lcm(lcm, rq->second);
    }
    if (exact && lcm < (1LL << 40)) {
      __int128 s = 0;
      for (size_t k = 0; k < summed.size(); ++k)
        s += static_cast<__int128>(q[k].first) * (lcm / q[k].second) * delta[k];
      if (s != 0) return false;
      continue;
    }
    double s = 0.0, scale = 0.0;
    for (size_t k = 0; k < summed.size(); ++k) {
      s += row[summed[k]] * static_cast<double>(delta[k]);
      scale += std::fabs(row[summed[k]] * static_cast<double>(delta[k]));
    }
    if (std::fabs(s) > 1e-12 * (1.0 + scale)) return false;
  }
  return true;
}

SelectionRule selection_rule(const ClassSpec& spec, const FrequencyConfig& cfg) {
  SelectionRule r;
  r.class_id = spec.id;
  r.dim = spec.dim;
  r.summed = spec.summed;
  for (const auto& v : spec.vars) {
    std::vector<double> row(spec.dim);
    for (int t = 0; t < spec.dim; ++t) row[t] = v.exponent.dn(cfg, t);
    r.rows.push_back(row);
  }
  return r;
}

std::vector<std::vector<long long>> aliasing_solutions(const SelectionRule& rule, int window) {
  std::vector<std::vector<long long>> out;
  const size_t D = rule.summed.size();
  if (D == 0 || window < 1) return out;
  std::vector<long long> d(D, -window);
  while (true) {
    if (std::any_of(d.begin(), d.end(), [](long long v) { return v != 0; }) && rule.satisfied(d)) out.push_back(d);
    size_t k = 0;
    while (k < D && d[k] == window) d[k++] = -window;
    if (k == D) break;
    ++d[k];
  }
  return out;
}

namespace {

std::string idx_label(const std::vector<unsigned>& s) {
  std::string l = "(";
  for (size_t k = 0; k < s.size(); ++k) l += (k ? "," : "") + std::to_string(s[k]);
  return l + ")";
}

// (1/2pi) int_0^{2pi} e^{i x theta} dtheta by the trapezoid rule on 64 nodes
Complex phase_average(double x) {
  const int N = 64;
  Complex s = 0.0;
  for (int k = 0; k < N; ++k) s += std::polar(1.0, x * 2.0 * M_PI * k / N);
  return s / static_cast<double>(N);
}

}  // namespace

VerificationReport resolution_residual(const ClassSpec& spec, const FrequencyConfig& cfg,
                                       const std::vector<unsigned>& fixed, unsigned nmax,
                                       const MeasureDensity* density, double tol) {
  VerificationReport rep;
  rep.class_id = spec.id;
  rep.check = "resolution";
  rep.metadata["omegas"] = cfg.omegas();
  rep.metadata["fixed"] = fixed;
  rep.metadata["nmax"] = nmax;
  rep.metadata["tolerance"] = tol;
  if (auto bad = spec.violated_domain(cfg)) {
    rep.mark_undefined("non-normalizable: requires " + bad->str());
    return rep;
  }
  const SelectionRule rule = selection_rule(spec, cfg);
  rep.metadata["selection_rule"] = rule.equations(true);
  const auto alias = aliasing_solutions(rule, static_cast<int>(nmax));

  MeasureDensity d;
  try {
    d = density ? *density : density_for(spec, cfg, fixed);
  } catch (const DensityUndefined& e) {
    rep.metadata["error"] = e.what();
    rep.verdict = "fail";
    return rep;
  }
  const auto basis = index_window(spec.summed.size(), nmax);
  const int B = static_cast<int>(basis.size());
  std::vector<double> log_t(B);
  std::vector<std::vector<double>> expo(B);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(B, B);
  for (int i = 0; i < B; ++i) {
    std::vector<double> sv(basis[i].begin(), basis[i].end());
    const NVec n = spec.make_n(sv, fixed);
    log_t[i] = log_target(spec, cfg, n);
    for (const auto& v : spec.vars) expo[i].push_back(v.exponent.eval(cfg, n));
    const MomentEval m = moment_at_exponents(d, expo[i]);
    const double res = m.ok ? std::fabs(std::expm1(m.value.log_abs - log_t[i])) : NAN;
    G(i, i) = 1.0 + (m.ok ? std::expm1(m.value.log_abs - log_t[i]) : NAN);
    rep.add("G" + idx_label(basis[i]) + idx_label(basis[i]), res, tol);
  }

  // aliased pairs: same phase exponents, so the angular integral no longer vanishes
  Json flagged = Json::array();
  size_t certified = 0;
  for (int i = 0; i < B; ++i)
    for (int j = i + 1; j < B; ++j) {
      std::vector<long long> delta(spec.summed.size());
      for (size_t k = 0; k < delta.size(); ++k)
        delta[k] = static_cast<long long>(basis[i][k]) - static_cast<long long>(basis[j][k]);
      if (std::find(alias.begin(), alias.end(), delta) == alias.end()) {
        ++certified;
        continue;
      }
      std::vector<double> half(spec.vars.size());
      Complex phase = 1.0;
      for (size_t v = 0; v < half.size(); ++v) {
        half[v] = 0.5 * (expo[i][v] + expo[j][v]);
        phase *= phase_average(expo[i][v] - expo[j][v]);
      }
      const MomentEval m = moment_at_exponents(d, half);
      const Complex g = phase * std::exp(m.value.log_abs - 0.5 * (log_t[i] + log_t[j]));
      G(i, j) = g;
      G(j, i) = std::conj(g);
      flagged.push_back({{"m", basis[i]}, {"m_prime", basis[j]}, {"value", std::abs(g)}});
    }
  rep.metadata["off_diagonal_certified_by_rule"] = certified;
  rep.metadata["aliasing"] = !flagged.empty();
  rep.metadata["aliased_pairs"] = flagged;
  if (G.allFinite()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
    rep.metadata["min_eigenvalue"] = es.eigenvalues().minCoeff();
  }
  rep.metadata["max_abs_G_minus_I"] = rep.max_residual();
  rep.finalize();
  return rep;
}

}  // namespace vcs
