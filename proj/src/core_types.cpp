#include "vcslab/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "vcslab/special.hpp"

namespace vcs {

// ---------------------------------------------------------------- frequencies

FrequencyConfig::FrequencyConfig(std::vector<double> omegas, std::vector<double> shifts)
    : omegas_(std::move(omegas)), shifts_(std::move(shifts)) {
  if (omegas_.size() < 2 || omegas_.size() > 3)
    throw std::invalid_argument("FrequencyConfig: need 2 or 3 frequencies");
  for (double w : omegas_)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("FrequencyConfig: frequencies must be positive");
  if (shifts_.empty()) shifts_.assign(omegas_.size(), 0.0);
  if (shifts_.size() != omegas_.size())
    throw std::invalid_argument("FrequencyConfig: shifts and frequencies differ in length");
  for (double a : shifts_)
    if (!(a >= 0.0) || !std::isfinite(a))
      throw std::invalid_argument("FrequencyConfig: shifts must be non-negative");
}

double FrequencyConfig::omega(int i) const {
  if (i < 0 || i >= dim()) throw std::out_of_range("omega: tower index out of range");
  return omegas_[i];
}

double FrequencyConfig::alpha(int i) const {
  if (i < 0 || i >= dim()) throw std::out_of_range("alpha: tower index out of range");
  return shifts_[i];
}

double FrequencyConfig::kappa(int i, int j) const {
  if (i < 0 || j < 0 || i >= dim() || j >= dim() || i == j)
    throw std::out_of_range("kappa: invalid tower pair");
  auto it = overrides_.find({i, j});
  if (it != overrides_.end()) return it->second;
  return omegas_[j] / omegas_[i];
}

bool FrequencyConfig::has_shifts() const {
  return std::any_of(shifts_.begin(), shifts_.end(), [](double a) { return a != 0.0; });
}

FrequencyConfig FrequencyConfig::with_kappa(int i, int j, double v) const {
  if (i < 0 || j < 0 || i >= dim() || j >= dim() || i == j)
    throw std::out_of_range("with_kappa: invalid tower pair");
  if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("with_kappa: value must be >= 0");
  FrequencyConfig out = *this;
  out.overrides_[{i, j}] = v;
  return out;
}

FrequencyConfig FrequencyConfig::with_shifts(std::vector<double> shifts) const {
  FrequencyConfig out(omegas_, std::move(shifts));
  out.overrides_ = overrides_;
  return out;
}

double kappa(const FrequencyConfig& cfg, int i, int j) { return cfg.kappa(i, j); }

std::string tower_name(int t) { return std::to_string(t + 1); }
std::string kappa_name(int i, int j) { return "kappa" + tower_name(i) + tower_name(j); }

// ---------------------------------------------------------------- affine forms

Affine Affine::constant(double c) {
  Affine a;
  if (c != 0.0) a.terms_.push_back({c, -1, -1, AffineTerm::Var::One, -1});
  return a;
}
Affine Affine::n(int t, double c) {
  Affine a;
  if (c != 0.0) a.terms_.push_back({c, -1, -1, AffineTerm::Var::N, t});
  return a;
}
Affine Affine::alpha(int t, double c) {
  Affine a;
  if (c != 0.0) a.terms_.push_back({c, -1, -1, AffineTerm::Var::Alpha, t});
  return a;
}
Affine Affine::kappa_n(int i, int j, int t, double c) {
  Affine a;
  if (c != 0.0) a.terms_.push_back({c, i, j, AffineTerm::Var::N, t});
  return a;
}
Affine Affine::kappa_alpha(int i, int j, int t, double c) {
  Affine a;
  if (c != 0.0) a.terms_.push_back({c, i, j, AffineTerm::Var::Alpha, t});
  return a;
}

Affine Affine::from_term(const AffineTerm& t) {
  Affine a;
  if (t.c != 0.0) a.terms_.push_back(t);
  return a;
}

Affine& Affine::operator+=(const Affine& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}
Affine Affine::operator+(const Affine& o) const {
  Affine r = *this;
  r += o;
  return r;
}

static double term_value(const AffineTerm& t, const FrequencyConfig& cfg, const NVec& n) {
  double v = t.c;
  if (t.ki >= 0) v *= cfg.kappa(t.ki, t.kj);
  switch (t.var) {
    case AffineTerm::Var::One: break;
    case AffineTerm::Var::N: v *= n[t.tower]; break;
    case AffineTerm::Var::Alpha: v *= cfg.alpha(t.tower); break;
  }
  return v;
}

double Affine::eval(const FrequencyConfig& cfg, const NVec& n) const {
  double s = 0.0;
  for (const auto& t : terms_) s += term_value(t, cfg, n);
  return s;
}

double Affine::dn(const FrequencyConfig& cfg, int tower) const {
  double s = 0.0;
  for (const auto& t : terms_)
    if (t.var == AffineTerm::Var::N && t.tower == tower) s += t.c * (t.ki >= 0 ? cfg.kappa(t.ki, t.kj) : 1.0);
  return s;
}

bool Affine::depends_on_alpha() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const AffineTerm& t) { return t.var == AffineTerm::Var::Alpha; });
}

std::vector<std::pair<int, int>> Affine::kappas() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& t : terms_)
    if (t.ki >= 0 && std::find(out.begin(), out.end(), std::make_pair(t.ki, t.kj)) == out.end())
      out.emplace_back(t.ki, t.kj);
  return out;
}

Affine Affine::without_kappa(int i, int j) const {
  Affine r;
  for (const auto& t : terms_)
    if (!(t.ki == i && t.kj == j)) r.terms_.push_back(t);
  return r;
}

Affine Affine::bake_alpha(const std::vector<double>& alphas) const {
  Affine r;
  double c0 = 0.0;
  for (const auto& t : terms_) {
    if (t.var != AffineTerm::Var::Alpha) {
      r.terms_.push_back(t);
      continue;
    }
    const double a = alphas.at(t.tower);
    if (a == 0.0) continue;
    if (t.ki < 0) {
      c0 += t.c * a;
    } else {
      AffineTerm k = t;
      k.c *= a;
      k.var = AffineTerm::Var::One;
      k.tower = -1;
      r.terms_.push_back(k);
    }
  }
  if (c0 != 0.0) r.terms_.push_back({c0, -1, -1, AffineTerm::Var::One, -1});
  return r;
}

Affine Affine::strip_alpha() const {
  Affine r;
  for (const auto& t : terms_)
    if (t.var != AffineTerm::Var::Alpha) r.terms_.push_back(t);
  return r;
}

static std::string fmt_num(double c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

std::string Affine::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    std::string piece;
    if (t.ki >= 0) piece = kappa_name(t.ki, t.kj);
    if (t.var == AffineTerm::Var::N) piece += (piece.empty() ? "" : "*") + ("n" + tower_name(t.tower));
    if (t.var == AffineTerm::Var::Alpha) piece += (piece.empty() ? "" : "*") + ("alpha" + tower_name(t.tower));
    if (piece.empty()) piece = fmt_num(t.c);
    else if (t.c != 1.0) piece = fmt_num(t.c) + "*" + piece;
    s += (k == 0 ? "" : " + ") + piece;
  }
  return s;
}

bool Affine::operator==(const Affine& o) const {
  auto key = [](const AffineTerm& t) { return std::make_tuple(t.ki, t.kj, static_cast<int>(t.var), t.tower); };
  std::map<std::tuple<int, int, int, int>, double> a, b;
  for (const auto& t : terms_) a[key(t)] += t.c;
  for (const auto& t : o.terms_) b[key(t)] += t.c;
  std::erase_if(a, [](const auto& p) { return p.second == 0.0; });
  std::erase_if(b, [](const auto& p) { return p.second == 0.0; });
  return a == b;
}

// ---------------------------------------------------------------- spec helpers

std::string FactorialForm::str() const {
  const std::string t = tower_name(tower);
  switch (kind) {
    case Kind::Plain: return "omega" + t + "^n" + t + " n" + t + "!";
    case Kind::GammaSingle: return "Gamma[gamma" + t + tower_name(j) + " + n" + t + "]";
    case Kind::GammaDouble: return "Gamma[gamma" + t + " + n" + t + "]";
  }
  return {};
}

std::string ExponentTuple::str() const {
  std::string s = "(";
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < 4; ++c) s += (r + c == 0 ? "" : ",") + fmt_num(rows[r][c]);
  return s + ")";
}

std::string DomainCondition::str() const {
  std::string s;
  for (size_t k = 0; k < any_positive.size(); ++k)
    s += (k ? " or " : "") + kappa_name(any_positive[k].first, any_positive[k].second) + " > 0";
  return s;
}

void ClassSpec::validate() const {
  auto fail = [&](const std::string& m) { throw std::logic_error("ClassSpec " + id + ": " + m); };
  if (dim != 2 && dim != 3) fail("dimension must be 2 or 3");
  if (static_cast<int>(vars.size()) != dof) fail("dof must equal the number of z variables");
  if (summed.empty() || static_cast<int>(summed.size()) > dof) fail("summed towers must be 1..dof");
  std::set<int> s(summed.begin(), summed.end()), f(fixed_towers.begin(), fixed_towers.end());
  for (int t : summed)
    if (f.count(t)) fail("tower both summed and fixed");
  for (const auto& r : rho)
    if (!s.count(r.tower) && !f.count(r.tower)) fail("rho tower not covered");
  if (factorials.size() != rho.size()) fail("factorial forms and rho factors differ");
  for (const auto& ff : factorials) {
    if (ff.kind != FactorialForm::Kind::Plain && (ff.j == ff.tower || ff.j < 0)) fail("bad gamma coupling");
    if (ff.kind == FactorialForm::Kind::GammaDouble && (ff.k == ff.tower || ff.k == ff.j)) fail("bad gamma coupling");
  }
  for (const auto& r : tuple.rows)
    if (r[0] == 0.0 || r[2] == 0.0) fail("tuple alpha entries must be non-zero");
  // every summed index must reach a Gamma argument, otherwise the moment problem is degenerate
  FrequencyConfig unit(std::vector<double>(dim, 1.0));
  for (int t : summed) {
    bool hit = false;
    for (const auto& r : rho) hit |= r.gamma_arg.dn(unit, t) != 0.0;
    if (!hit) fail("summed index without Gamma dependence");
  }
}

NVec ClassSpec::make_n(const std::vector<double>& summed_vals, const std::vector<unsigned>& fixed_vals) const {
  if (summed_vals.size() != summed.size()) throw std::invalid_argument("make_n: summed index count mismatch");
  if (fixed_vals.size() != fixed_towers.size()) throw std::invalid_argument("make_n: fixed index count mismatch");
  NVec n{0.0, 0.0, 0.0};
  for (size_t k = 0; k < summed.size(); ++k) n[summed[k]] = summed_vals[k];
  for (size_t k = 0; k < fixed_towers.size(); ++k) n[fixed_towers[k]] = fixed_vals[k];
  return n;
}

int ClassSpec::var_index_of_tower(int t) const {
  for (size_t v = 0; v < vars.size(); ++v)
    if (vars[v].tower == t) return static_cast<int>(v);
  return -1;
}

int ClassSpec::rho_index_of_tower(int t) const {
  for (size_t v = 0; v < rho.size(); ++v)
    if (rho[v].tower == t) return static_cast<int>(v);
  return -1;
}

std::vector<std::pair<int, int>> ClassSpec::kappas() const {
  std::vector<std::pair<int, int>> out;
  auto add = [&](const Affine& a) {
    for (auto k : a.kappas())
      if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  };
  for (const auto& v : vars) add(v.exponent);
  for (const auto& r : rho) {
    add(r.omega_exp);
    add(r.gamma_arg);
    if (r.gamma_den) add(*r.gamma_den);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool ClassSpec::uses_kappa(int i, int j) const {
  auto k = kappas();
  return std::find(k.begin(), k.end(), std::make_pair(i, j)) != k.end();
}

std::optional<DomainCondition> ClassSpec::violated_domain(const FrequencyConfig& cfg) const {
  for (const auto& d : domain) {
    bool ok = false;
    for (auto [i, j] : d.any_positive) ok |= cfg.kappa(i, j) > 0.0;
    if (!ok) return d;
  }
  return std::nullopt;
}

bool ClassSpec::same_structure(const ClassSpec& o) const {
  if (dim != o.dim || dof != o.dof || summed != o.summed || fixed_towers != o.fixed_towers) return false;
  if (vars.size() != o.vars.size() || rho.size() != o.rho.size()) return false;
  for (size_t v = 0; v < vars.size(); ++v)
    if (vars[v].tower != o.vars[v].tower || !(vars[v].exponent == o.vars[v].exponent)) return false;
  for (size_t r = 0; r < rho.size(); ++r) {
    const auto &a = rho[r], &b = o.rho[r];
    if (a.tower != b.tower || !(a.omega_exp == b.omega_exp) || !(a.gamma_arg == b.gamma_arg)) return false;
    if (a.gamma_den.has_value() != b.gamma_den.has_value()) return false;
    if (a.gamma_den && !(*a.gamma_den == *b.gamma_den)) return false;
  }
  return true;
}

void ClassSpec::recompute_domain() {
  ClassSpec& s = *this;
  s.domain.clear();
  for (int t : s.summed) {
    bool own = false;
    DomainCondition d{t, {}};
    for (const auto& r : s.rho)
      for (const auto& term : r.gamma_arg.terms()) {
        if (term.var != AffineTerm::Var::N || term.tower != t) continue;
        if (term.ki < 0) own = true;
        else if (std::find(d.any_positive.begin(), d.any_positive.end(), std::make_pair(term.ki, term.kj)) ==
                 d.any_positive.end())
          d.any_positive.emplace_back(term.ki, term.kj);
      }
    if (!own && !d.any_positive.empty()) s.domain.push_back(d);
  }
}

double log_target(const ClassSpec& spec, const FrequencyConfig& cfg, const NVec& n) {
  double s = 0.0;
  for (const auto& r : spec.rho) {
    s += r.omega_exp.eval(cfg, n) * std::log(cfg.omega(r.tower));
    s += sf::log_gamma(r.gamma_arg.eval(cfg, n));
    if (r.gamma_den) s -= sf::log_gamma(r.gamma_den->eval(cfg, n));
  }
  return s;
}

Complex Coefficient::value() const {
  if (modulus.is_zero()) return {0.0, 0.0};
  return std::polar(std::exp(modulus.log_abs), phase);
}

Coefficient coefficient(const ClassSpec& spec, const FrequencyConfig& cfg, const std::vector<Complex>& z,
                        const NVec& n) {
  if (static_cast<int>(z.size()) != spec.dof) throw std::invalid_argument("coefficient: z length != dof");
  Coefficient c;
  double la = 0.0, ph = 0.0;
  for (size_t v = 0; v < spec.vars.size(); ++v) {
    const double e = spec.vars[v].exponent.eval(cfg, n);
    const double r = std::abs(z[v]);
    if (r == 0.0) {
      if (e != 0.0) return c;  // zero coefficient
      continue;
    }
    la += e * std::log(r);
    ph += e * std::arg(z[v]);
  }
  la -= 0.5 * log_target(spec, cfg, n);
  c.modulus = LogValue::from_log(la);
  c.phase = ph;
  return c;
}

// ---------------------------------------------------------------- builders

ClassSpec make_2d_one_dof(int s, bool gamma, double beta, double beta_p) {
  const int j = 1 - s;
  ClassSpec c;
  c.dim = 2;
  c.dof = 1;
  c.summed = {s};
  c.fixed_towers = {j};
  c.vars.push_back({s, Affine::n(s) + Affine::kappa_n(s, j, j, beta)});
  RhoFactor r{s, Affine::n(s) + Affine::kappa_n(s, j, j, beta_p), {}, std::nullopt};
  r.gamma_arg = Affine::constant(1.0) + Affine::alpha(s) + Affine::n(s);
  if (gamma) {
    r.gamma_arg += Affine::kappa_n(s, j, j) + Affine::kappa_alpha(s, j, j);
    c.factorials.push_back({s, FactorialForm::Kind::GammaSingle, j, -1});
  } else {
    r.gamma_den = Affine::constant(1.0) + Affine::alpha(s);
    c.factorials.push_back({s, FactorialForm::Kind::Plain, -1, -1});
  }
  c.rho.push_back(r);
  c.tuple.rows.push_back({1.0, beta, 1.0, beta_p});
  c.recompute_domain();
  return c;
}

ClassSpec make_2d_two_dof(Rho2D r1, Rho2D r2, const std::array<double, 8>& t) {
  ClassSpec c;
  c.dim = 2;
  c.dof = 2;
  c.summed = {0};
  c.fixed_towers = {1};
  c.vars.push_back({0, Affine::n(0, t[0]) + Affine::kappa_n(0, 1, 1, t[1])});
  c.vars.push_back({1, Affine::n(1, t[4]) + Affine::kappa_n(1, 0, 0, t[5])});
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const bool g = (i == 0 ? r1 : r2) == Rho2D::Gamma;
    const double ap = t[4 * i + 2], bp = t[4 * i + 3];
    RhoFactor r{i, Affine::n(i, ap) + Affine::kappa_n(i, j, j, bp), {}, std::nullopt};
    r.gamma_arg = Affine::constant(1.0) + Affine::alpha(i) + Affine::n(i);
    if (g) {
      r.gamma_arg += Affine::kappa_n(i, j, j) + Affine::kappa_alpha(i, j, j);
      c.factorials.push_back({i, FactorialForm::Kind::GammaSingle, j, -1});
    } else {
      r.gamma_den = Affine::constant(1.0) + Affine::alpha(i);
      c.factorials.push_back({i, FactorialForm::Kind::Plain, -1, -1});
    }
    c.rho.push_back(r);
  }
  c.tuple.rows = {{t[0], t[1], t[2], t[3]}, {t[4], t[5], t[6], t[7]}};
  c.recompute_domain();
  return c;
}

ClassSpec make_3d(const std::vector<int>& var_towers, const std::vector<int>& summed, const std::vector<int>& fixed,
                  const std::vector<RhoChoice>& rhos) {
  ClassSpec c;
  c.dim = 3;
  c.dof = static_cast<int>(var_towers.size());
  c.summed = summed;
  c.fixed_towers = fixed;
  auto coupling_of = [&](int t) -> const std::vector<int>* {
    for (const auto& r : rhos)
      if (r.tower == t) return &r.coupled;
    return nullptr;
  };
  for (int v : var_towers) {
    Affine e = Affine::n(v);
    if (const auto* cp = coupling_of(v))
      for (int o : *cp) e += Affine::kappa_n(v, o, o);
    c.vars.push_back({v, e});
    c.tuple.rows.push_back({1.0, 1.0, 1.0, 1.0});
  }
  for (const auto& rc : rhos) {
    const int t = rc.tower;
    RhoFactor r{t, Affine::n(t), Affine::constant(1.0) + Affine::alpha(t) + Affine::n(t), std::nullopt};
    for (int o : rc.coupled) {
      r.omega_exp += Affine::kappa_n(t, o, o);
      r.gamma_arg += Affine::kappa_n(t, o, o) + Affine::kappa_alpha(t, o, o);
    }
    FactorialForm ff{t, FactorialForm::Kind::Plain, -1, -1};
    if (rc.coupled.empty()) {
      r.gamma_den = Affine::constant(1.0) + Affine::alpha(t);
    } else if (rc.coupled.size() == 1) {
      ff = {t, FactorialForm::Kind::GammaSingle, rc.coupled[0], -1};
    } else {
      ff = {t, FactorialForm::Kind::GammaDouble, rc.coupled[0], rc.coupled[1]};
    }
    c.factorials.push_back(ff);
    c.rho.push_back(r);
  }
  c.recompute_domain();
  return c;
}

// ---------------------------------------------------------------- registry

namespace {

struct SubRow {
  char sub;
  std::array<double, 4> q;  // beta1, beta1', beta2, beta2'
};

std::string rho3_name(int t, const std::vector<int>& coupled) {
  if (coupled.empty()) return "1";
  if (coupled.size() == 2) return "gamma" + tower_name(t);
  return "gamma" + tower_name(t) + tower_name(coupled[0]);
}

std::vector<ClassSpec> build_registry() {
  std::vector<ClassSpec> out;
  auto push = [&](ClassSpec c, std::string id, std::string label, std::string family) {
    c.id = std::move(id);
    c.label = std::move(label);
    c.family = std::move(family);
    c.validate();
    out.push_back(std::move(c));
  };

  // 2D, one degree of freedom: (beta, beta') per sub-class
  const std::array<std::pair<char, std::array<double, 2>>, 4> plain_rows = {
      {{'A', {0, 0}}, {'B', {0, 1}}, {'C', {1, 0}}, {'D', {1, 1}}}};
  const std::array<std::pair<char, std::array<double, 2>>, 4> gamma_rows = {
      {{'A', {1, 1}}, {'B', {0, 1}}, {'C', {1, 0}}, {'D', {0, 0}}}};
  for (int s = 0; s < 2; ++s) {
    const std::string t = tower_name(s);
    const std::string dual = s == 1 ? "'" : "";
    for (auto [sub, q] : plain_rows)
      push(make_2d_one_dof(s, false, q[0], q[1]), "2d.1dof.plain" + t + "." + sub,
           "(1)" + std::string(1, sub) + dual, "2d.1dof.plain" + t);
    for (auto [sub, q] : gamma_rows)
      push(make_2d_one_dof(s, true, q[0], q[1]), "2d.1dof.gamma" + t + "." + sub,
           "(gamma" + t + ")" + std::string(1, sub) + dual, "2d.1dof.gamma" + t);
  }

  // 2D, two degrees of freedom
  struct Fam {
    const char* key;
    const char* label;
    Rho2D r1, r2;
    std::array<SubRow, 4> rows;
  };
  const std::array<Fam, 4> fams = {{
      {"1-1", "(1,1)", Rho2D::Plain, Rho2D::Plain,
       {{{'A', {0, 0, 0, 0}}, {'B', {0, 0, 0, 1}}, {'C', {0, 0, 1, 0}}, {'D', {0, 0, 1, 1}}}}},
      {"gamma1-1", "(gamma1,1)", Rho2D::Gamma, Rho2D::Plain,
       {{{'A', {1, 1, 0, 0}}, {'B', {1, 1, 0, 1}}, {'C', {1, 1, 1, 0}}, {'D', {1, 1, 1, 1}}}}},
      {"1-gamma2", "(1,gamma2)", Rho2D::Plain, Rho2D::Gamma,
       {{{'A', {0, 0, 1, 1}}, {'B', {0, 0, 0, 1}}, {'C', {0, 0, 1, 0}}, {'D', {0, 0, 0, 0}}}}},
      {"gamma1-gamma2", "(gamma1,gamma2)", Rho2D::Gamma, Rho2D::Gamma,
       {{{'A', {1, 1, 1, 1}}, {'B', {1, 1, 0, 1}}, {'C', {1, 1, 1, 0}}, {'D', {1, 1, 0, 0}}}}},
  }};
  for (const auto& f : fams)
    for (const auto& r : f.rows) {
      const std::array<double, 8> t = {1, r.q[0], 1, r.q[1], 1, r.q[2], 1, r.q[3]};
      push(make_2d_two_dof(f.r1, f.r2, t), std::string("2d.2dof.") + f.key + "." + r.sub,
           std::string(f.label) + r.sub, std::string("2d.2dof.") + f.key);
    }

  // 3D, two degrees of freedom, case (12): rho1, rho2 over roles
  // P (plain), O (other summed), F (fixed), B (both); canonical under 1<->2 is role1 <= role2.
  auto roles = [](int other, int fixed) {
    return std::vector<std::vector<int>>{{}, {other}, {fixed}, {other, fixed}};
  };
  {
    const auto r1 = roles(1, 2), r2 = roles(0, 2);
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) {
        const std::string n1 = rho3_name(0, r1[a]), n2 = rho3_name(1, r2[b]);
        push(make_3d({0, 1}, {0, 1}, {2}, {{0, r1[a]}, {1, r2[b]}}), "3d.2dof.c12-" + n1 + "-" + n2,
             "(" + n1 + "," + n2 + ")", "3d.2dof.c12");
      }
  }
  // case (13): variables z1, z3; n2 summed through couplings only
  {
    const std::vector<std::vector<int>> r1 = {{}, {1}, {2}, {1, 2}};
    const std::vector<std::vector<int>> r3 = {{}, {0}, {1}, {0, 1}};
    for (const auto& a : r1)
      for (const auto& b : r3) {
        const bool n2_in_1 = std::find(a.begin(), a.end(), 1) != a.end();
        const bool n2_in_3 = std::find(b.begin(), b.end(), 1) != b.end();
        if (!n2_in_1 && !n2_in_3) continue;
        const std::string n1 = rho3_name(0, a), n3 = rho3_name(2, b);
        push(make_3d({0, 2}, {0, 1}, {2}, {{0, a}, {2, b}}), "3d.2dof.c13-" + n1 + "-" + n3,
             "(" + n1 + "," + n3 + ")", "3d.2dof.c13");
      }
  }

  // 3D, three degrees of freedom endpoints
  push(make_3d({0, 1, 2}, {0, 1}, {2}, {{0, {1, 2}}, {1, {0, 2}}, {2, {0, 1}}}), "3d.3dof.max",
       "(gamma1,gamma2,gamma3)", "3d.3dof");
  push(make_3d({0, 1, 2}, {0, 1}, {2}, {{0, {}}, {1, {}}, {2, {}}}), "3d.3dof.min", "(1,1,1)", "3d.3dof");

  std::set<std::string> ids;
  for (const auto& c : out)
    if (!ids.insert(c.id).second) throw std::logic_error("duplicate registry id " + c.id);
  return out;
}

}  // namespace

const std::vector<ClassSpec>& registry() {
  static const std::vector<ClassSpec> reg = build_registry();
  return reg;
}

const ClassSpec* lookup_class(const std::string& id) {
  for (const auto& c : registry())
    if (c.id == id) return &c;
  return nullptr;
}

const ClassSpec& find_class(const std::string& id) {
  if (const auto* c = lookup_class(id)) return *c;
  throw std::out_of_range("unknown class id: " + id);
}

const ClassSpec* match_registered(const ClassSpec& spec) {
  for (const auto& c : registry())
    if (c.same_structure(spec)) return &c;
  return nullptr;
}

}  // namespace vcs
