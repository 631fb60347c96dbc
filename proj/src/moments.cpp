#include "vcslab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

#include "vcslab/quadrature.hpp"
#include "vcslab/special.hpp"

namespace vcs {

namespace {

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

std::vector<int> find_peel_order(const std::vector<std::vector<double>>& A) {
  const int n = static_cast<int>(A.size());
  std::vector<bool> done(n, false);
  std::vector<int> order;
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n && pick < 0; ++v) {
      if (done[v]) continue;
      bool clean = true;
      for (int w = 0; w < n; ++w)
        if (w != v && !done[w] && A[w][v] != 0.0) clean = false;
      if (clean) pick = v;
    }
    if (pick < 0) throw DensityUndefined("density exponent matrix has no triangular order");
    done[pick] = true;
    order.push_back(pick);
  }
  return order;
}

void finish(MeasureDensity& d) {
  Eigen::MatrixXd M(d.size(), d.size());
  for (int i = 0; i < d.size(); ++i)
    for (int j = 0; j < d.size(); ++j) M(i, j) = d.A[i][j];
  if (std::fabs(M.determinant()) < 1e-12) throw DensityUndefined("singular change of variables");
  d.peel_order = find_peel_order(d.A);
}

}  // namespace

double MeasureDensity::log_value(const std::vector<double>& u) const {
  double s = log_K, e = 0.0;
  for (int j = 0; j < size(); ++j)
    if (q[j] != 0.0) s += q[j] * std::log(u[j]);
  for (int v = 0; v < size(); ++v) {
    double l = -log_c[v];
    for (int j = 0; j < size(); ++j)
      if (A[v][j] != 0.0) l += A[v][j] * std::log(u[j]);
    e += std::exp(l);
  }
  return s - e;
}

std::string MeasureDensity::formula() const {
  std::string s = "chi(u) = " + num(std::exp(log_K));
  for (int j = 0; j < size(); ++j)
    if (q[j] != 0.0) s += " * u" + tower_name(spec.vars[j].tower) + "^" + num(q[j]);
  s += " * exp(";
  for (int v = 0; v < size(); ++v) {
    s += " - ";
    for (int j = 0; j < size(); ++j)
      if (A[v][j] != 0.0) s += "u" + tower_name(spec.vars[j].tower) + (A[v][j] == 1.0 ? "" : "^" + num(A[v][j]));
    s += "/" + num(std::exp(log_c[v]));
  }
  return s + " ), u = r^2";
}

Json MeasureDensity::to_json() const {
  Json j;
  j["class"] = spec.id;
  j["source"] = source;
  j["formula"] = formula();
  j["A"] = A;
  j["log_c"] = log_c;
  j["q"] = q;
  j["log_K"] = log_K;
  return j;
}

MeasureDensity solve_density(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<unsigned>& fixed,
                             const std::map<int, double>& log_c_override) {
  const int V = spec.dof;
  const int S = static_cast<int>(spec.summed.size());
  if (cfg.dim() != spec.dim) throw std::invalid_argument("solve_density: dimension mismatch");
  for (const auto& r : spec.tuple.rows)
    if (r[0] == 0.0 || r[2] == 0.0) throw std::invalid_argument("solve_density: zero alpha parameter");

  std::vector<double> zeros(S, 0.0);
  const NVec n0 = spec.make_n(zeros, fixed);
  std::vector<int> rho_of(V);
  for (int v = 0; v < V; ++v) {
    rho_of[v] = spec.rho_index_of_tower(spec.vars[v].tower);
    if (rho_of[v] < 0) throw DensityUndefined("variable without a generalized factorial");
  }

  // g_s[v] = dG_v/dn_s, e_s[j] = dE_j/dn_s, pw_s = sum_t dP_t/dn_s log omega_t
  std::vector<std::vector<double>> g(S, std::vector<double>(V)), e(S, std::vector<double>(V));
  std::vector<double> pw(S, 0.0);
  for (int s = 0; s < S; ++s) {
    const int t = spec.summed[s];
    for (int v = 0; v < V; ++v) {
      g[s][v] = spec.rho[rho_of[v]].gamma_arg.dn(cfg, t);
      e[s][v] = spec.vars[v].exponent.dn(cfg, t);
    }
    for (const auto& r : spec.rho) pw[s] += r.omega_exp.dn(cfg, t) * std::log(cfg.omega(r.tower));
    // a summed index that reaches no Gamma argument gives a degenerate problem
    double any = 0.0;
    for (const auto& r : spec.rho) any += std::fabs(r.gamma_arg.dn(cfg, t));
    if (any == 0.0) throw DensityUndefined("summed index n" + tower_name(t) + " drops out of every Gamma argument");
  }

  // pivots: own-tower variable first, else an unused variable whose Gamma depends on n_s
  std::vector<int> pivots;
  for (int s = 0; s < S; ++s) {
    int p = spec.var_index_of_tower(spec.summed[s]);
    if (p >= 0 && (g[s][p] == 0.0 || std::count(pivots.begin(), pivots.end(), p))) p = -1;
    for (int v = 0; v < V && p < 0; ++v)
      if (g[s][v] != 0.0 && !std::count(pivots.begin(), pivots.end(), v)) p = v;
    if (p >= 0) pivots.push_back(p);
  }
  if (pivots.empty()) throw DensityUndefined("no pivot variable");
  const int P = static_cast<int>(pivots.size());
  auto is_pivot = [&](int v) { return std::count(pivots.begin(), pivots.end(), v) > 0; };

  MeasureDensity d;
  d.spec = spec;
  d.cfg = cfg;
  d.fixed = fixed;
  d.source = "solver";
  d.A.assign(V, std::vector<double>(V, 0.0));
  d.log_c.assign(V, 0.0);
  for (int v = 0; v < V; ++v) {
    if (is_pivot(v)) continue;
    const auto& row = spec.tuple.rows.at(v);
    d.A[v][v] = row[0];
    d.log_c[v] = row[2] * std::log(cfg.omega(spec.vars[v].tower));
    auto it = log_c_override.find(v);
    if (it != log_c_override.end()) d.log_c[v] = it->second;
  }

  Eigen::MatrixXd M(S, P), R(S, V + 1);
  for (int s = 0; s < S; ++s) {
    for (int k = 0; k < P; ++k) M(s, k) = g[s][pivots[k]];
    for (int j = 0; j < V; ++j) {
      double r = e[s][j];
      for (int v = 0; v < V; ++v)
        if (!is_pivot(v)) r -= g[s][v] * d.A[v][j];
      R(s, j) = r;
    }
    double r = pw[s];
    for (int v = 0; v < V; ++v)
      if (!is_pivot(v)) r -= g[s][v] * d.log_c[v];
    R(s, V) = r;
  }
  // Pivot rows start from the default alpha_v e_v and take the minimum-norm correction,
  // so a consistent but rank-deficient system keeps the diagonal solution.
  Eigen::MatrixXd X0 = Eigen::MatrixXd::Zero(P, V + 1);
  for (int k = 0; k < P; ++k) {
    const int v = pivots[k];
    const auto& row = spec.tuple.rows.at(v);
    X0(k, v) = row[0];
    X0(k, V) = row[2] * std::log(cfg.omega(spec.vars[v].tower));
  }
  const Eigen::MatrixXd X = X0 + M.completeOrthogonalDecomposition().solve(R - M * X0);
  const double resid = (M * X - R).cwiseAbs().maxCoeff();
  if (!(resid <= 1e-12 * (1.0 + R.cwiseAbs().maxCoeff())))
    throw DensityUndefined("moment constraints are inconsistent");
  for (int k = 0; k < P; ++k) {
    for (int j = 0; j < V; ++j) d.A[pivots[k]][j] = std::fabs(X(k, j)) < 1e-14 ? 0.0 : X(k, j);
    d.log_c[pivots[k]] = X(k, V);
  }

  // q = A^T G(n0) - E(n0) - 1
  std::vector<double> G0(V), E0(V);
  for (int v = 0; v < V; ++v) {
    G0[v] = spec.rho[rho_of[v]].gamma_arg.eval(cfg, n0);
    E0[v] = spec.vars[v].exponent.eval(cfg, n0);
  }
  d.q.assign(V, 0.0);
  for (int j = 0; j < V; ++j) {
    double s = -E0[j] - 1.0;
    for (int v = 0; v < V; ++v) s += d.A[v][j] * G0[v];
    d.q[j] = s;
  }

  Eigen::MatrixXd Am(V, V);
  for (int i = 0; i < V; ++i)
    for (int j = 0; j < V; ++j) Am(i, j) = d.A[i][j];
  const double det = Am.determinant();
  if (std::fabs(det) < 1e-12) throw DensityUndefined("singular change of variables");

  // log K: constant part of the target minus what the variable integrals produce at n0
  double lk = std::log(std::fabs(det));
  for (const auto& r : spec.rho) {
    lk += r.omega_exp.eval(cfg, n0) * std::log(cfg.omega(r.tower));
    if (r.gamma_den) lk -= sf::log_gamma(r.gamma_den->eval(cfg, n0));
  }
  // Gamma factors not attached to a variable are constant over the summed indices
  for (size_t r = 0; r < spec.rho.size(); ++r)
    if (std::find(rho_of.begin(), rho_of.end(), static_cast<int>(r)) == rho_of.end())
      lk += sf::log_gamma(spec.rho[r].gamma_arg.eval(cfg, n0));
  for (int v = 0; v < V; ++v) lk -= G0[v] * d.log_c[v];
  d.log_K = lk;
  finish(d);
  return d;
}

std::optional<MeasureDensity> catalog_density(const ClassSpec& spec, const FrequencyConfig& cfg,
                                              const std::vector<unsigned>& fixed) {
  if (cfg.has_shifts() || !cfg.kappa_overrides().empty() || cfg.dim() != spec.dim) return std::nullopt;
  MeasureDensity d;
  d.spec = spec;
  d.cfg = cfg;
  d.fixed = fixed;
  d.source = "catalog";
  const int V = spec.dof;
  d.A.assign(V, std::vector<double>(V, 0.0));
  d.log_c.assign(V, 0.0);
  d.q.assign(V, 0.0);
  using K = FactorialForm::Kind;

  if (spec.dim == 2 && spec.dof == 1) {
    const int s = spec.summed[0], j = spec.fixed_towers[0];
    const double m = fixed.at(0), kap = cfg.kappa(s, j), lw = std::log(cfg.omega(s));
    const auto& t = spec.tuple.rows[0];
    const double a = t[0], b = t[1], ap = t[2], bp = t[3];
    d.A[0][0] = a;
    d.log_c[0] = ap * lw;
    if (spec.factorials[0].kind == K::Plain) {
      // alpha/omega^alpha' (omega^beta' r^-2beta)^{kappa n2} r^{2(alpha-1)} e^{-r^{2alpha}/omega^alpha'}
      d.q[0] = a - 1.0 - b * kap * m;
      d.log_K = std::log(a) - ap * lw + bp * kap * m * lw;
    } else {
      // alpha/omega^alpha' (omega^{beta'-alpha'} r^{2(alpha-beta)})^{kappa n2} r^{2(alpha-1)} e^{...}
      d.q[0] = a - 1.0 + (a - b) * kap * m;
      d.log_K = std::log(a) - ap * lw + (bp - ap) * kap * m * lw;
    }
  } else if (spec.dim == 2 && spec.dof == 2) {
    const double m = fixed.at(0);
    const double k1 = cfg.kappa(0, 1), k2 = cfg.kappa(1, 0);
    const double l1 = std::log(cfg.omega(0)), l2 = std::log(cfg.omega(1));
    const auto& r1 = spec.tuple.rows[0];
    const auto& r2 = spec.tuple.rows[1];
    const double a1 = r1[0], b1 = r1[1], a1p = r1[2], b1p = r1[3];
    const double a2 = r2[0], b2 = r2[1], a2p = r2[2], b2p = r2[3];
    const bool g1 = spec.factorials[0].kind != K::Plain, g2 = spec.factorials[1].kind != K::Plain;
    d.A[1][1] = a2;
    d.log_c[1] = a2p * l2;
    d.A[0][0] = a1;
    if (!g2) {
      d.A[0][1] = b2 * k2;
      d.log_c[0] = a1p * l1 + b2p * k2 * l2;
    } else {
      d.A[0][1] = (b2 - a2) * k2;
      d.log_c[0] = a1p * l1 + (b2p - a2p) * k2 * l2;
    }
    const double lj = std::log(a1 * a2);
    if (!g1 && !g2) {
      d.q[0] = a1 - 1.0 - b1 * k1 * m;
      d.q[1] = a2 + b2 * k2 - 1.0;
      d.log_K = lj - a1p * l1 - (a2p + b2p * k2) * l2 + b1p * k1 * m * l1;
    } else if (g1 && !g2) {
      d.q[0] = a1 - 1.0 + (a1 - b1) * k1 * m;
      d.q[1] = a2 - 1.0 + b2 * k2 + b2 * k1 * k2 * m;
      d.log_K = lj - a1p * l1 - b2p * k2 * l2 - a2p * l2 + (b1p - a1p) * k1 * m * l1 - b2p * k1 * k2 * m * l2;
    } else if (!g1 && g2) {
      d.q[0] = a1 - 1.0 - b1 * k1 * m;
      d.q[1] = a2 - 1.0 + (b2 - a2) * k2;
      d.log_K = lj + b1p * k1 * m * l1 - a1p * l1 - (b2p - a2p) * k2 * l2 - a2p * l2;
    } else {
      d.q[0] = a1 - 1.0 + (a1 - b1) * k1 * m;
      d.q[1] = a2 - 1.0 + (b2 - a2) * k2 + (b2 - a2) * k1 * k2 * m;
      d.log_K = lj - a1p * l1 - (b2p - a2p) * k2 * l2 - a2p * l2 + (b1p - a1p) * k1 * m * l1 +
                (a2p - b2p) * k1 * k2 * m * l2;
    }
  } else if (spec.dim == 3) {
    // every 3D class in the registry is integrated by prod_v f(r_v, omega_v)
    for (int v = 0; v < V; ++v) {
      const double lw = std::log(cfg.omega(spec.vars[v].tower));
      d.A[v][v] = 1.0;
      d.log_c[v] = lw;
      d.log_K -= lw;
    }
    // a fixed-tower factorial without a variable only rescales
    for (const auto& r : spec.rho)
      if (spec.var_index_of_tower(r.tower) < 0) return std::nullopt;
  } else {
    return std::nullopt;
  }
  finish(d);
  return d;
}

MeasureDensity density_for(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<unsigned>& fixed) {
  if (auto c = catalog_density(spec, cfg, fixed)) return *c;
  return solve_density(spec, cfg, fixed);
}

MeasureDensity solve_generalized(TargetForm form, const std::array<double, 8>& tuple, const FrequencyConfig& cfg,
                                 unsigned n2) {
  if (tuple[0] == 0.0 || tuple[2] == 0.0 || tuple[4] == 0.0 || tuple[6] == 0.0)
    throw std::invalid_argument("solve_generalized: zero alpha parameter");
  const bool g1 = form == TargetForm::GammaPlain || form == TargetForm::GammaGamma;
  const bool g2 = form == TargetForm::PlainGamma || form == TargetForm::GammaGamma;
  ClassSpec spec = make_2d_two_dof(g1 ? Rho2D::Gamma : Rho2D::Plain, g2 ? Rho2D::Gamma : Rho2D::Plain, tuple);
  spec.id = "2d.2dof.tuple";
  spec.label = "tuple " + spec.tuple.str();
  return solve_density(spec, cfg, {n2});
}

double density_distance(const MeasureDensity& a, const MeasureDensity& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = std::fabs(a.log_K - b.log_K);
  for (int v = 0; v < a.size(); ++v) {
    m = std::max(m, std::fabs(a.log_c[v] - b.log_c[v]));
    m = std::max(m, std::fabs(a.q[v] - b.q[v]));
    for (int j = 0; j < a.size(); ++j) m = std::max(m, std::fabs(a.A[v][j] - b.A[v][j]));
  }
  return m;
}

MomentEval moment_integral(const MeasureDensity& d, const std::vector<unsigned>& summed, const QuadSpec& quad) {
  std::vector<double> sv(summed.begin(), summed.end());
  const NVec n = d.spec.make_n(sv, d.fixed);
  std::vector<double> e;
  for (const auto& v : d.spec.vars) e.push_back(v.exponent.eval(d.cfg, n));
  return moment_at_exponents(d, e, quad);
}

MomentEval moment_at_exponents(const MeasureDensity& d, const std::vector<double>& exponents, const QuadSpec& quad) {
  MomentEval out;
  const int V = d.size();
  std::vector<double> x(V);
  for (int j = 0; j < V; ++j) x[j] = d.q[j] + exponents.at(j) + 1.0;

  double la = d.log_K, lb = d.log_K;
  std::vector<bool> done(V, false);
  for (int v : d.peel_order) {
    double xv = x[v], a = d.A[v][v];
    const double c = std::exp(d.log_c[v]);
    // a < 0: substitute s -> 1/s
    double xe = xv, ae = a;
    if (a < 0.0) {
      xe = -xv;
      ae = -a;
    }
    if (!(xe > 0.0) || !(ae > 0.0)) {
      out.ok = false;
      out.diagnostic = "non-integrable factor for u" + tower_name(d.spec.vars[v].tower) + " (x=" + num(xv) + ")";
      out.value = LogValue::from_log(NAN);
      return out;
    }
    const double ja = quad::log_stretched_laguerre(xe, ae, c, quad.laguerre_nodes);
    const double jb = quad::log_stretched_simpson(xe, ae, c, quad.simpson_tol);
    out.disagreement = std::max(out.disagreement, std::fabs(std::expm1(ja - jb)));
    la += ja;
    lb += jb;
    done[v] = true;
    for (int j = 0; j < V; ++j)
      if (!done[j] && d.A[v][j] != 0.0) x[j] -= d.A[v][j] * xv / a;
  }
  out.log_laguerre = la;
  out.log_simpson = lb;
  out.value = LogValue::from_log(0.5 * (la + lb));
  if (out.disagreement > quad.fail_tol) {
    out.ok = false;
    out.diagnostic = "quadrature routes disagree by " + num(out.disagreement);
  } else if (out.disagreement > quad.agree_tol) {
    out.diagnostic = "quadrature agreement above " + num(quad.agree_tol);
  }
  return out;
}

std::vector<std::vector<unsigned>> index_window(size_t dims, unsigned nmax) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> idx(dims, 0);
  while (true) {
    out.push_back(idx);
    size_t k = dims;
    while (k > 0) {
      --k;
      if (idx[k] < nmax) {
        ++idx[k];
        break;
      }
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (dims == 0) return out;
  }
}

static std::string index_label(const std::vector<unsigned>& s) {
  std::string l = "n=(";
  for (size_t k = 0; k < s.size(); ++k) l += (k ? "," : "") + std::to_string(s[k]);
  return l + ")";
}

VerificationReport verify_moments(const ClassSpec& spec, const FrequencyConfig& cfg,
                                  const std::vector<unsigned>& fixed, unsigned nmax, const QuadSpec& quad,
                                  const MeasureDensity* density) {
  VerificationReport rep;
  rep.class_id = spec.id;
  rep.check = "moment";
  rep.metadata["omegas"] = cfg.omegas();
  rep.metadata["shifts"] = cfg.shifts();
  rep.metadata["fixed"] = fixed;
  rep.metadata["nmax"] = nmax;
  rep.metadata["tolerance"] = quad.tolerance;
  rep.metadata["laguerre_nodes"] = quad.laguerre_nodes;
  rep.metadata["simpson_tol"] = quad.simpson_tol;

  if (auto bad = spec.violated_domain(cfg)) {
    rep.mark_undefined("non-normalizable: requires " + bad->str());
    return rep;
  }
  MeasureDensity d;
  try {
    d = density ? *density : density_for(spec, cfg, fixed);
  } catch (const DensityUndefined& e) {
    rep.metadata["error"] = e.what();
    rep.verdict = "fail";
    return rep;
  }
  rep.metadata["density"] = d.formula();
  rep.metadata["density_source"] = d.source;
  double worst_dis = 0.0;
  for (const auto& idx : index_window(spec.summed.size(), nmax)) {
    std::vector<double> sv(idx.begin(), idx.end());
    const double lt = log_target(spec, cfg, spec.make_n(sv, fixed));
    const MomentEval m = moment_integral(d, idx, quad);
    worst_dis = std::max(worst_dis, m.disagreement);
    double res = std::fabs(std::expm1(m.value.log_abs - lt));
    if (!m.ok) {
      res = NAN;
      if (!rep.metadata.contains("diagnostic")) rep.metadata["diagnostic"] = index_label(idx) + ": " + m.diagnostic;
    }
    rep.add(index_label(idx), res, quad.tolerance);
  }
  rep.metadata["max_quadrature_disagreement"] = worst_dis;
  rep.finalize();
  return rep;
}

}  // namespace vcs
