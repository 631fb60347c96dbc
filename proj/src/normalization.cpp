#include "vcslab/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vcslab/moments.hpp"
#include "vcslab/special.hpp"

namespace vcs {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double LinearForm::eval(const std::vector<double>& n) const {
  double s = c0;
  for (size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0.0) s += c[k] * n[k];
  return s;
}

bool LinearForm::depends_on_n() const {
  return std::any_of(c.begin(), c.end(), [](double v) { return v != 0.0; });
}

double TermGenerator::log_term(const std::vector<double>& n) const {
  if (zero) return kNegInf;
  for (int s = 0; s < dims(); ++s)
    if (frozen[s] && n[s] != 0.0) return kNegInf;
  double l = linear.eval(n);
  for (const auto& g : gammas) l += g.sign * sf::log_gamma(g.arg.eval(n));
  return l;
}

LogValue TermGenerator::eval(const std::vector<unsigned>& n) const {
  std::vector<double> x(n.begin(), n.end());
  const double l = log_term(x);
  return l == kNegInf ? LogValue::zero() : LogValue::from_log(l);
}

std::vector<double> TermGenerator::weights() const {
  std::vector<double> w;
  for (int s = 0; s < dims(); ++s) w.push_back(frozen[s] ? 0.0 : std::exp(linear.c[s]));
  return w;
}

bool TermGenerator::log_concave() const {
  for (const auto& g : gammas)
    if (g.sign > 0 && g.arg.depends_on_n()) return false;
  return true;
}

TermGenerator term_generator(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<Complex>& z,
                             const std::vector<unsigned>& fixed) {
  if (static_cast<int>(z.size()) != spec.dof) throw std::invalid_argument("term_generator: z length != dof");
  if (cfg.dim() != spec.dim) throw std::invalid_argument("term_generator: dimension mismatch");
  const int S = static_cast<int>(spec.summed.size());
  TermGenerator g;
  g.name = spec.id;
  g.linear.c.assign(S, 0.0);
  g.frozen.assign(S, false);
  const NVec n0 = spec.make_n(std::vector<double>(S, 0.0), fixed);

  for (size_t v = 0; v < spec.vars.size(); ++v) {
    const Affine& e = spec.vars[v].exponent;
    const double r = std::abs(z[v]);
    if (r == 0.0) {
      if (e.eval(cfg, n0) != 0.0) g.zero = true;
      for (int s = 0; s < S; ++s)
        if (e.dn(cfg, spec.summed[s]) != 0.0) g.frozen[s] = true;
      continue;
    }
    const double lr = 2.0 * std::log(r);
    g.linear.c0 += e.eval(cfg, n0) * lr;
    for (int s = 0; s < S; ++s) g.linear.c[s] += e.dn(cfg, spec.summed[s]) * lr;
  }
  for (const auto& rho : spec.rho) {
    const double lw = std::log(cfg.omega(rho.tower));
    g.linear.c0 -= rho.omega_exp.eval(cfg, n0) * lw;
    LinearForm a{rho.gamma_arg.eval(cfg, n0), std::vector<double>(S)};
    for (int s = 0; s < S; ++s) {
      g.linear.c[s] -= rho.omega_exp.dn(cfg, spec.summed[s]) * lw;
      a.c[s] = rho.gamma_arg.dn(cfg, spec.summed[s]);
    }
    g.gammas.push_back({a, -1});
    if (rho.gamma_den) g.gammas.push_back({{rho.gamma_den->eval(cfg, n0), std::vector<double>(S, 0.0)}, +1});
  }
  return g;
}

TermGenerator geometric_generator(const std::vector<double>& ratios) {
  TermGenerator g;
  g.name = "geometric";
  for (double r : ratios) g.linear.c.push_back(std::log(r));
  g.frozen.assign(ratios.size(), false);
  return g;
}

TermGenerator double_exponential(const std::vector<double>& weights) {
  TermGenerator g;
  g.name = "exponential";
  const int S = static_cast<int>(weights.size());
  g.frozen.assign(S, false);
  for (int s = 0; s < S; ++s) {
    g.linear.c.push_back(weights[s] > 0.0 ? std::log(weights[s]) : 0.0);
    if (weights[s] == 0.0) g.frozen[s] = true;
    LinearForm a{1.0, std::vector<double>(S, 0.0)};
    a.c[s] = 1.0;
    g.gammas.push_back({a, -1});
  }
  return g;
}

namespace {

struct Partial {
  double log_sum = kNegInf;
  double tail_rel = 0.0;
  size_t terms = 0;
  bool ok = true;
  std::string diagnostic;
};

// Sums dimension k (and everything below it) at the given outer indices. A dimension is
// closed once the ratio of consecutive slices is below 1 and non-increasing, with the
// geometric bound last * r / (1 - r) under rel_tol of the running sum.
Partial sum_dim(const TermGenerator& gen, int k, std::vector<double>& n, double rel_tol, unsigned max_terms,
                std::vector<unsigned>& extent) {
  Partial out;
  double prev = kNegInf, prev_ratio = INFINITY;
  double inner_tail = 0.0;
  const unsigned limit = gen.frozen[k] ? 1 : max_terms;
  for (unsigned i = 0; i < limit; ++i) {
    n[k] = i;
    double l;
    if (k == 0) {
      l = gen.log_term(n);
      ++out.terms;
    } else {
      Partial in = sum_dim(gen, k - 1, n, rel_tol, max_terms, extent);
      out.terms += in.terms;
      if (!in.ok) {
        n[k] = 0;
        return in;
      }
      l = in.log_sum;
      inner_tail = std::max(inner_tail, in.tail_rel);
    }
    extent[k] = std::max(extent[k], i);
    out.log_sum = log_add(out.log_sum, l);
    if (l == kNegInf && prev == kNegInf && i > 0) {
      // a zero slice after a zero slice: only possible past a frozen or vanishing direction
      break;
    }
    if (i >= 2 && l != kNegInf && prev != kNegInf) {
      const double r = std::exp(l - prev);
      if (r < 1.0 && r <= prev_ratio * (1.0 + 1e-12)) {
        const double tail = std::exp(l - out.log_sum) * r / (1.0 - r);
        if (tail <= rel_tol) {
          out.tail_rel = tail + inner_tail;
          n[k] = 0;
          return out;
        }
      }
      prev_ratio = r;
    }
    prev = l;
  }
  n[k] = 0;
  if (limit == 1 || (prev == kNegInf)) {
    out.tail_rel = inner_tail;
    return out;
  }
  out.ok = false;
  out.diagnostic = "tail bound not reached within " + std::to_string(max_terms) + " terms on index " +
                   std::to_string(k + 1);
  return out;
}

}  // namespace

NormResult norm_series(const TermGenerator& gen, double rel_tol, unsigned max_terms) {
  NormResult res;
  res.method = "series";
  const int D = gen.dims();
  res.truncation.assign(D, 0);
  if (gen.zero) {
    res.log_norm = kNegInf;
    return res;
  }
  std::vector<double> n(D, 0.0);
  // split the budget between the nested certificates
  const double per_dim = rel_tol / std::max(1, D);
  Partial p = sum_dim(gen, D - 1, n, per_dim, max_terms, res.truncation);
  res.log_norm = p.log_sum;
  res.tail_bound = p.tail_rel;
  res.terms = p.terms;
  res.ok = p.ok;
  res.diagnostic = p.diagnostic;
  return res;
}

std::optional<NormResult> norm_closed_form(const ClassSpec& spec, const FrequencyConfig& cfg,
                                           const std::vector<Complex>& z, const std::vector<unsigned>& fixed) {
  const TermGenerator g = term_generator(spec, cfg, z, fixed);
  const int S = g.dims();
  NormResult res;
  res.method = "closed_form";
  res.truncation.assign(S, 0);
  if (g.zero) {
    res.log_norm = kNegInf;
    return res;
  }
  std::vector<int> own(S, -1);
  for (size_t k = 0; k < g.gammas.size(); ++k) {
    const auto& gm = g.gammas[k];
    int dep = -1, count = 0;
    for (int s = 0; s < S; ++s)
      if (gm.arg.c[s] != 0.0) {
        dep = s;
        ++count;
      }
    if (count == 0) continue;
    if (count > 1 || gm.sign > 0 || gm.arg.c[dep] != 1.0 || own[dep] >= 0) return std::nullopt;
    own[dep] = static_cast<int>(k);
  }
  for (int s = 0; s < S; ++s)
    if (own[s] < 0) return std::nullopt;

  // T(0) prod_s 1F1(1; b_s; w_s)
  double l = g.log_term(std::vector<double>(S, 0.0));
  for (int s = 0; s < S; ++s) {
    if (g.frozen[s]) continue;
    l += sf::hyp1f1_one(g.gammas[own[s]].arg.c0, std::exp(g.linear.c[s])).log_abs;
  }
  res.log_norm = l;

  if (spec.id == "2d.2dof.1-1.A") {
    // printed with an extra 1/omega1 in front of exp(|z1|^2/omega1)
    res.printed_log_norm = l - std::log(cfg.omega(0));
    res.suspected_typo = true;
  } else if (spec.id == "3d.3dof.min") {
    // printed as (|z3|^2/omega3)^n3 exp((|z1|^2 + |z2|^2)/2)
    const double n3 = fixed.at(0);
    const double a3 = std::norm(z[2]);
    double p = 0.5 * (std::norm(z[0]) + std::norm(z[1]));
    if (n3 > 0) p += n3 * (a3 > 0 ? std::log(a3 / cfg.omega(2)) : kNegInf);
    res.printed_log_norm = p;
    res.suspected_typo = true;
  }
  return res;
}

VerificationReport verify_norm(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<unsigned>& fixed,
                               const std::vector<double>& z_scales, double tol) {
  VerificationReport rep;
  rep.class_id = spec.id;
  rep.check = "norm";
  rep.metadata["omegas"] = cfg.omegas();
  rep.metadata["fixed"] = fixed;
  rep.metadata["z_scales"] = z_scales;
  rep.metadata["tolerance"] = tol;
  if (auto bad = spec.violated_domain(cfg)) {
    rep.mark_undefined("non-normalizable: requires " + bad->str());
    return rep;
  }
  Json printed = Json::array();
  std::string method = "closed_form";
  for (double f : z_scales) {
    std::vector<Complex> z;
    for (const auto& v : spec.vars) z.push_back(std::polar(std::sqrt(f * cfg.omega(v.tower)), 0.25));
    const NormResult s = norm_series(term_generator(spec, cfg, z, fixed));
    const auto c = norm_closed_form(spec, cfg, z, fixed);
    const std::string lab = "|z|^2/omega=" + format_double(f);
    if (!s.ok) {
      rep.add(lab, NAN, tol);
      rep.metadata["diagnostic"] = s.diagnostic;
      continue;
    }
    if (!c) {
      method = "series_tail";
      rep.add(lab, s.tail_bound, tol);
      continue;
    }
    const double d = s.log_norm == c->log_norm ? 0.0 : std::fabs(std::expm1(c->log_norm - s.log_norm));
    rep.add(lab, d, tol);
    if (c->suspected_typo && c->printed_log_norm)
      printed.push_back({{"z_scale", f}, {"printed_vs_series", std::fabs(std::expm1(*c->printed_log_norm - s.log_norm))}});
  }
  rep.metadata["method"] = method;
  if (!printed.empty()) {
    rep.metadata["suspected_typo"] = true;
    rep.metadata["printed_form"] = printed;
  }
  rep.finalize();
  return rep;
}

TruncatedState state(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<Complex>& z,
                     const std::vector<unsigned>& fixed, unsigned nmax) {
  if (auto bad = spec.violated_domain(cfg))
    throw std::domain_error("state: " + spec.id + " is not normalizable, requires " + bad->str());
  const TermGenerator g = term_generator(spec, cfg, z, fixed);
  const NormResult nr = norm_series(g);
  if (!nr.ok) throw std::runtime_error("state: " + nr.diagnostic);
  if (nr.log_norm == kNegInf) throw std::domain_error("state: every coefficient vanishes");
  TruncatedState st;
  st.spec = spec;
  st.z = z;
  st.nmax = nmax;
  st.lognorm = nr.log_norm;
  double mass = 0.0;
  for (const auto& idx : index_window(spec.summed.size(), nmax)) {
    std::vector<double> sv(idx.begin(), idx.end());
    Coefficient c = coefficient(spec, cfg, z, spec.make_n(sv, fixed));
    c.modulus = c.modulus / LogValue::from_log(0.5 * nr.log_norm);
    const Complex v = c.value();
    st.coeffs[idx] = v;
    mass += std::norm(v);
  }
  st.tail_bound = std::max(0.0, 1.0 - mass) + nr.tail_bound;
  return st;
}

}  // namespace vcs
