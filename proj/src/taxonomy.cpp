#include "vcslab/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "vcslab/convergence.hpp"
#include "vcslab/moments.hpp"
#include "vcslab/special.hpp"

namespace vcs {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string quad_str(const std::array<double, 4>& q, int n = 4) {
  std::string s = "(";
  for (int k = 0; k < n; ++k) s += (k ? "," : "") + fmt(q[k]);
  return s + ")";
}

struct TwoDofFamily {
  const char* key;
  Rho2D r1, r2;
  double base;  // beta1 = beta1' of the relevant sub-classes
};

const TwoDofFamily* two_dof_family(const std::string& name) {
  static const std::array<TwoDofFamily, 4> fams = {{{"1-1", Rho2D::Plain, Rho2D::Plain, 0.0},
                                                    {"gamma1-1", Rho2D::Gamma, Rho2D::Plain, 1.0},
                                                    {"1-gamma2", Rho2D::Plain, Rho2D::Gamma, 0.0},
                                                    {"gamma1-gamma2", Rho2D::Gamma, Rho2D::Gamma, 1.0}}};
  static const std::map<std::string, std::string> alias = {
      {"first", "1-1"}, {"second", "gamma1-1"}, {"third", "1-gamma2"}, {"fourth", "gamma1-gamma2"}};
  std::string key = name;
  if (auto it = alias.find(key); it != alias.end()) key = it->second;
  if (key.rfind("2d.2dof.", 0) == 0) key = key.substr(8);
  for (const auto& f : fams)
    if (key == f.key) return &f;
  return nullptr;
}

std::vector<Complex> z_for(const ClassSpec& spec, const std::vector<Complex>& z_tower) {
  std::vector<Complex> z;
  for (const auto& v : spec.vars) z.push_back(z_tower.at(v.tower));
  return z;
}

// canonical text of an affine form, order independent
std::string canon(const Affine& a) {
  std::map<std::tuple<int, int, int, int>, double> m;
  for (const auto& t : a.terms()) m[{t.ki, t.kj, static_cast<int>(t.var), t.tower}] += t.c;
  std::string s;
  for (const auto& [k, c] : m)
    if (c != 0.0)
      s += "[" + std::to_string(std::get<0>(k)) + std::to_string(std::get<1>(k)) + std::to_string(std::get<2>(k)) +
           std::to_string(std::get<3>(k)) + ":" + fmt(c) + "]";
  return s;
}

// structure at zero shift: alpha terms and plain denominators ignored
std::string zero_shift_key(const ClassSpec& s) {
  std::string k = std::to_string(s.dim) + "|" + std::to_string(s.dof) + "|";
  for (int t : s.summed) k += std::to_string(t);
  k += "|";
  for (int t : s.fixed_towers) k += std::to_string(t);
  std::vector<std::string> parts;
  for (const auto& v : s.vars) parts.push_back("v" + std::to_string(v.tower) + canon(v.exponent.strip_alpha()));
  for (const auto& r : s.rho)
    parts.push_back("r" + std::to_string(r.tower) + canon(r.omega_exp.strip_alpha()) + "/" +
                    canon(r.gamma_arg.strip_alpha()));
  std::sort(parts.begin(), parts.end());
  for (const auto& p : parts) k += "|" + p;
  return k;
}

std::string family_node(const ClassSpec& s) { return s.dim == 2 ? s.family : s.id; }

}  // namespace

// ---------------------------------------------------------------- factor relations

Complex FactorRelation::eval(const FrequencyConfig& cfg, const std::vector<Complex>& z_tower, const NVec& n) const {
  Complex out = 1.0;
  for (const auto& f : factor) {
    const double e = f.coef * f.exponent.eval(cfg, n);
    switch (f.kind) {
      case FactorTerm::Kind::ZPower: {
        const Complex z = z_tower.at(f.tower);
        if (std::abs(z) == 0.0) {
          if (e != 0.0) return 0.0;
          break;
        }
        out *= std::polar(std::pow(std::abs(z), e), e * std::arg(z));
        break;
      }
      case FactorTerm::Kind::OmegaPower: out *= std::pow(cfg.omega(f.tower), e); break;
      case FactorTerm::Kind::GammaPower: out *= std::exp(f.coef * sf::log_gamma(f.exponent.eval(cfg, n))); break;
    }
  }
  return out;
}

std::string FactorRelation::str() const {
  std::string s;
  for (const auto& f : factor) {
    const std::string t = tower_name(f.tower);
    std::string piece;
    switch (f.kind) {
      case FactorTerm::Kind::ZPower: piece = "z" + t + "^(" + f.exponent.str() + ")"; break;
      case FactorTerm::Kind::OmegaPower: piece = "omega" + t + "^(" + f.exponent.str() + ")"; break;
      case FactorTerm::Kind::GammaPower: piece = "Gamma(" + f.exponent.str() + ")^(" + fmt(f.coef) + ")"; break;
    }
    s += (s.empty() ? "" : " * ") + piece;
  }
  return s.empty() ? "1" : s;
}

VerificationReport verify_factor(const FactorRelation& rel) {
  VerificationReport rep;
  rep.class_id = rel.sub_b;
  rep.check = "factor";
  rep.metadata["base"] = rel.sub_a;
  rep.metadata["factor"] = rel.str();
  rep.metadata["ratio_tolerance"] = 1e-10;
  rep.metadata["variance_tolerance"] = 1e-20;
  if (rel.spec_a.summed != rel.spec_b.summed || rel.spec_a.fixed_towers != rel.spec_b.fixed_towers) {
    rep.metadata["error"] = "summed/fixed towers differ";
    rep.verdict = "fail";
    return rep;
  }
  const int dim = rel.spec_a.dim;
  const std::vector<std::vector<double>> grid =
      dim == 2 ? std::vector<std::vector<double>>{{1, 2}, {2, 1}} : std::vector<std::vector<double>>{{1, 2, 3}, {2, 1, 3}};
  for (const auto& om : grid) {
    const FrequencyConfig cfg(om);
    for (double zf : {0.5, 2.0}) {
      std::vector<Complex> zt;
      for (int t = 0; t < dim; ++t) zt.push_back(std::polar(std::sqrt(zf * om[t]), 0.3 + 0.4 * t));
      for (unsigned f : {0u, 1u, 3u}) {
        std::vector<unsigned> fixed(rel.spec_a.fixed_towers.size(), f);
        std::vector<Complex> ratios;
        double worst = 0.0;
        for (int k = 0; k <= 10; ++k) {
          std::vector<double> sv(rel.spec_a.summed.size(), static_cast<double>(k));
          const NVec n = rel.spec_a.make_n(sv, fixed);
          const Complex a = coefficient(rel.spec_a, cfg, z_for(rel.spec_a, zt), n).value();
          const Complex b = coefficient(rel.spec_b, cfg, z_for(rel.spec_b, zt), n).value();
          const Complex F = rel.eval(cfg, zt, n);
          const Complex r = b / a;
          ratios.push_back(r);
          worst = std::max(worst, std::abs(r - F) / std::abs(F));
        }
        Complex mean = 0.0;
        for (auto r : ratios) mean += r;
        mean /= static_cast<double>(ratios.size());
        double var = 0.0;
        for (auto r : ratios) var += std::norm(r - mean);
        var /= static_cast<double>(ratios.size()) * std::norm(mean);
        const std::string lab = "omega=" + quad_str({om[0], om[1], dim == 3 ? om[2] : 0.0, 0}, dim) +
                                " |z|^2/omega=" + fmt(zf) + " fixed=" + std::to_string(f);
        rep.add(lab + " ratio", worst, 1e-10);
        rep.add(lab + " variance", var, 1e-20);
      }
    }
  }
  rep.finalize();
  return rep;
}

ClassSpec two_dof_subclass(const std::string& family, const std::array<double, 4>& q) {
  const auto* f = two_dof_family(family);
  if (!f) throw std::invalid_argument("unknown two-dof family: " + family);
  ClassSpec s = make_2d_two_dof(f->r1, f->r2, {1, q[0], 1, q[1], 1, q[2], 1, q[3]});
  s.family = std::string("2d.2dof.") + f->key;
  if (const auto* reg = match_registered(s)) return *reg;
  s.id = s.family + quad_str(q);
  s.label = s.id;
  return s;
}

std::vector<FactorRelation> declared_factor_relations() {
  std::vector<FactorRelation> out;
  // one-dof: B, C, D against A of the same family
  for (const char* fam : {"plain1", "gamma1", "plain2", "gamma2"}) {
    const std::string base = std::string("2d.1dof.") + fam;
    const ClassSpec& A = find_class(base + ".A");
    const int s = A.summed[0], j = 1 - s;
    const auto& qa = A.tuple.rows[0];
    for (const char* sub : {".B", ".C", ".D"}) {
      const ClassSpec& B = find_class(base + sub);
      const auto& qb = B.tuple.rows[0];
      FactorRelation r{A.id, B.id, A, B, {}};
      if (qb[1] != qa[1]) r.factor.push_back({FactorTerm::Kind::ZPower, s, Affine::kappa_n(s, j, j, qb[1] - qa[1])});
      if (qb[3] != qa[3])
        r.factor.push_back({FactorTerm::Kind::OmegaPower, s, Affine::kappa_n(s, j, j, -(qb[3] - qa[3]) / 2.0)});
      out.push_back(std::move(r));
    }
  }
  // two-dof: the twelve factor quadruples of each family
  for (const char* fam : {"1-1", "gamma1-1", "1-gamma2", "gamma1-gamma2"})
    for (const auto& e : enumerate_subclasses(std::string("2d.2dof.") + fam)) {
      if (e.relevant) continue;
      const ClassSpec a = find_class(e.factor_of);
      const ClassSpec b = two_dof_subclass(fam, e.quadruple);
      const double base = a.tuple.rows[0][1];
      FactorRelation r{a.id, b.id, a, b, {}};
      if (e.quadruple[0] != base)
        r.factor.push_back({FactorTerm::Kind::ZPower, 0, Affine::kappa_n(0, 1, 1, e.quadruple[0] - base)});
      if (e.quadruple[1] != base)
        r.factor.push_back({FactorTerm::Kind::OmegaPower, 0, Affine::kappa_n(0, 1, 1, -(e.quadruple[1] - base) / 2.0)});
      out.push_back(std::move(r));
    }
  // two-dof A against one-dof A
  for (auto [two, one] : {std::pair{"2d.2dof.1-1.A", "2d.1dof.plain1.A"}, {"2d.2dof.gamma1-1.A", "2d.1dof.gamma1.A"}}) {
    FactorRelation r{one, two, find_class(one), find_class(two), {}};
    r.factor.push_back({FactorTerm::Kind::ZPower, 1, Affine::n(1)});
    r.factor.push_back({FactorTerm::Kind::OmegaPower, 1, Affine::n(1, -0.5)});
    r.factor.push_back({FactorTerm::Kind::GammaPower, 1, Affine::constant(1.0) + Affine::n(1), -0.5});
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- sub-class enumeration

std::vector<SubclassEntry> enumerate_subclasses(const std::string& family, bool keep_alpha_fixed) {
  if (!keep_alpha_fixed) throw std::invalid_argument("enumerate_subclasses: only alpha entries pinned to 1 are enumerated");
  std::vector<SubclassEntry> out;
  if (family.rfind("2d.1dof.", 0) == 0) {
    const ClassSpec* A = lookup_class(family + ".A");
    if (!A) throw std::invalid_argument("unknown family: " + family);
    for (double b : {0.0, 1.0})
      for (double bp : {0.0, 1.0}) {
        SubclassEntry e;
        e.quadruple = {b, bp, 0, 0};
        ClassSpec s = make_2d_one_dof(A->summed[0], A->factorials[0].kind != FactorialForm::Kind::Plain, b, bp);
        const ClassSpec* reg = match_registered(s);
        e.id = reg ? reg->id : family + quad_str(e.quadruple, 2);
        e.relevant = reg && reg->id == A->id;
        if (!e.relevant) {
          e.factor_of = A->id;
          const auto& qa = A->tuple.rows[0];
          const int s0 = A->summed[0], j = 1 - s0;
          std::string f;
          if (b != qa[1]) f += "z" + tower_name(s0) + "^(" + Affine::kappa_n(s0, j, j, b - qa[1]).str() + ")";
          if (bp != qa[3])
            f += (f.empty() ? "" : " * ") + std::string("omega") + tower_name(s0) + "^(" +
                 Affine::kappa_n(s0, j, j, -(bp - qa[3]) / 2.0).str() + ")";
          e.factor = f;
        }
        out.push_back(e);
      }
    return out;
  }
  const auto* f = two_dof_family(family);
  if (!f) throw std::invalid_argument("unknown family: " + family);
  const std::string fam = std::string("2d.2dof.") + f->key;
  for (double b1 : {0.0, 1.0})
    for (double b1p : {0.0, 1.0})
      for (double b2 : {0.0, 1.0})
        for (double b2p : {0.0, 1.0}) {
          SubclassEntry e;
          e.quadruple = {b1, b1p, b2, b2p};
          e.relevant = b1 == f->base && b1p == f->base;
          e.id = two_dof_subclass(fam, e.quadruple).id;
          if (!e.relevant) {
            e.factor_of = two_dof_subclass(fam, {f->base, f->base, b2, b2p}).id;
            std::string s;
            if (b1 != f->base) s += "z1^(" + Affine::kappa_n(0, 1, 1, b1 - f->base).str() + ")";
            if (b1p != f->base)
              s += (s.empty() ? "" : " * ") + std::string("omega1^(") +
                   Affine::kappa_n(0, 1, 1, -(b1p - f->base) / 2.0).str() + ")";
            e.factor = s;
          }
          out.push_back(e);
        }
  return out;
}

// ---------------------------------------------------------------- deformation graph

ClassSpec remove_kappa(const ClassSpec& spec, int i, int j) {
  ClassSpec s = spec;
  for (auto& v : s.vars) v.exponent = v.exponent.without_kappa(i, j);
  for (auto& r : s.rho) {
    r.omega_exp = r.omega_exp.without_kappa(i, j);
    r.gamma_arg = r.gamma_arg.without_kappa(i, j);
    if (r.gamma_den) r.gamma_den = r.gamma_den->without_kappa(i, j);
  }
  for (auto& ff : s.factorials) {
    if (ff.tower != i) continue;
    if (ff.kind == FactorialForm::Kind::GammaSingle && ff.j == j) ff = {i, FactorialForm::Kind::Plain, -1, -1};
    else if (ff.kind == FactorialForm::Kind::GammaDouble && (ff.j == j || ff.k == j))
      ff = {i, FactorialForm::Kind::GammaSingle, ff.j == j ? ff.k : ff.j, -1};
  }
  if (s.dim == 2)
    for (size_t v = 0; v < s.vars.size() && v < s.tuple.rows.size(); ++v)
      if (s.vars[v].tower == i) s.tuple.rows[v][1] = s.tuple.rows[v][3] = 0.0;
  s.recompute_domain();
  s.id = spec.id + "/" + kappa_name(i, j) + "->0";
  s.label = s.id;
  return s;
}

ClassSpec permute_towers(const ClassSpec& spec, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != spec.dim) throw std::invalid_argument("permute_towers: bad permutation");
  auto P = [&](int t) { return t < 0 ? t : perm.at(t); };
  auto pa = [&](const Affine& a) {
    Affine r;
    for (auto t : a.terms()) {
      t.ki = P(t.ki);
      t.kj = P(t.kj);
      t.tower = P(t.tower);
      r += Affine::from_term(t);
    }
    return r;
  };
  ClassSpec s = spec;
  for (auto& t : s.summed) t = P(t);
  for (auto& t : s.fixed_towers) t = P(t);
  std::sort(s.summed.begin(), s.summed.end());
  std::sort(s.fixed_towers.begin(), s.fixed_towers.end());
  for (auto& v : s.vars) {
    v.tower = P(v.tower);
    v.exponent = pa(v.exponent);
  }
  for (auto& r : s.rho) {
    r.tower = P(r.tower);
    r.omega_exp = pa(r.omega_exp);
    r.gamma_arg = pa(r.gamma_arg);
    if (r.gamma_den) r.gamma_den = pa(*r.gamma_den);
  }
  for (auto& ff : s.factorials) {
    ff.tower = P(ff.tower);
    ff.j = P(ff.j);
    ff.k = P(ff.k);
  }
  // keep variables, tuple rows, rho and factorials ordered by tower
  std::vector<size_t> vo(s.vars.size());
  for (size_t k = 0; k < vo.size(); ++k) vo[k] = k;
  std::sort(vo.begin(), vo.end(), [&](size_t a, size_t b) { return s.vars[a].tower < s.vars[b].tower; });
  std::vector<ZVar> vars;
  std::vector<std::array<double, 4>> rows;
  for (size_t k : vo) {
    vars.push_back(s.vars[k]);
    if (k < s.tuple.rows.size()) rows.push_back(s.tuple.rows[k]);
  }
  s.vars = vars;
  s.tuple.rows = rows;
  std::vector<size_t> ro(s.rho.size());
  for (size_t k = 0; k < ro.size(); ++k) ro[k] = k;
  std::sort(ro.begin(), ro.end(), [&](size_t a, size_t b) { return s.rho[a].tower < s.rho[b].tower; });
  std::vector<RhoFactor> rho;
  std::vector<FactorialForm> ffs;
  for (size_t k : ro) {
    rho.push_back(s.rho[k]);
    ffs.push_back(s.factorials[k]);
  }
  s.rho = rho;
  s.factorials = ffs;
  s.recompute_domain();
  return s;
}

const ClassSpec* match_up_to_symmetry(const ClassSpec& spec) {
  const std::string key = zero_shift_key(spec);
  for (const auto& c : registry())
    if (zero_shift_key(c) == key) return &c;
  if (spec.dim == 3) {
    const std::string swapped = zero_shift_key(permute_towers(spec, {1, 0, 2}));
    for (const auto& c : registry())
      if (zero_shift_key(c) == swapped) return &c;
  }
  return nullptr;
}

namespace {

std::vector<const ClassSpec*> graph_representatives(int dim, int dof) {
  std::vector<const ClassSpec*> reps;
  for (const auto& c : registry()) {
    if (c.dim != dim || c.dof != dof) continue;
    if (dim == 2 && c.id.back() != 'A') continue;
    reps.push_back(&c);
  }
  return reps;
}

// a summed index that no Gamma argument depends on
int orphan_summed(const ClassSpec& s) {
  FrequencyConfig unit(std::vector<double>(s.dim, 1.0));
  for (int t : s.summed) {
    bool hit = false;
    for (const auto& r : s.rho) hit |= r.gamma_arg.dn(unit, t) != 0.0;
    if (!hit) return t;
  }
  return -1;
}

FrequencyConfig probe_config(int dim) {
  return dim == 2 ? FrequencyConfig({1.0, 2.0}) : FrequencyConfig({1.0, 2.0, 3.0});
}

// sink for a forbidden limit; one per edge so components stay separate
std::string undefined_node(const std::string& from, const std::string& kij) {
  return "undefined: " + from + " at " + kij + " = 0";
}

}  // namespace

DeformationGraph deformation_graph(int dim, int dof) {
  if (!((dim == 2 && (dof == 1 || dof == 2)) || (dim == 3 && dof == 2)))
    throw std::invalid_argument("deformation_graph: supported (dim, dof) are (2,1), (2,2), (3,2)");
  DeformationGraph g;
  g.dim = dim;
  g.dof = dof;
  const auto reps = graph_representatives(dim, dof);
  for (const auto* c : reps) g.nodes.push_back(family_node(*c));
  for (const auto* c : reps) {
    for (auto [i, j] : c->kappas()) {
      DeformationEdge e;
      e.from = family_node(*c);
      e.ancestor_id = c->id;
      e.parameter = {i, j};
      const std::string kij = kappa_name(i, j), kji = kappa_name(j, i);
      if (c->uses_kappa(j, i)) {
        e.forbidden = true;
        e.reason = kij + " -> 0 sends " + kji + " -> infinity";
        e.to = undefined_node(e.from, kij);
        g.edges.push_back(e);
        continue;
      }
      const ClassSpec d = remove_kappa(*c, i, j);
      if (int t = orphan_summed(d); t >= 0) {
        e.forbidden = true;
        e.reason = "non-normalizable: the series over n" + tower_name(t) + " loses its summation index";
        e.to = undefined_node(e.from, kij);
        const FrequencyConfig at0 = probe_config(dim).with_kappa(i, j, 0.0);
        std::vector<unsigned> fixed(c->fixed_towers.size(), 1u);
        e.confirmation = status_name(class_verdict(*c, at0, fixed).status);
        g.edges.push_back(e);
        continue;
      }
      if (const auto* m = match_up_to_symmetry(d)) {
        e.to = family_node(*m);
        e.to_registered = true;
      } else {
        e.to = d.id;
      }
      g.edges.push_back(e);
    }
  }
  return g;
}

std::string DeformationGraph::dot() const {
  std::string s = "digraph deformation_" + std::to_string(dim) + "d_" + std::to_string(dof) + "dof {\n";
  for (const auto& n : nodes) s += "  \"" + n + "\";\n";
  for (const auto& e : edges)
    if (e.forbidden) s += "  \"" + e.to + "\" [shape=plaintext, label=\"not defined\"];\n";
  for (const auto& e : edges) {
    const std::string p = kappa_name(e.parameter.first, e.parameter.second);
    s += "  \"" + e.from + "\" -> \"" + e.to + "\" [label=\"" + p + "->0\", status=" +
         (e.forbidden ? "forbidden, color=red, style=dashed" : "defined") + "];\n";
  }
  return s + "}\n";
}

Json DeformationGraph::to_json() const {
  Json j;
  j["dim"] = dim;
  j["dof"] = dof;
  j["nodes"] = nodes;
  j["edges"] = Json::array();
  for (const auto& e : edges) {
    Json je = {{"from", e.from},
               {"to", e.to},
               {"ancestor", e.ancestor_id},
               {"parameter", kappa_name(e.parameter.first, e.parameter.second)},
               {"status", e.forbidden ? "forbidden" : "defined"}};
    if (e.forbidden) je["reason"] = e.reason;
    else je["to_registered"] = e.to_registered;
    if (!e.confirmation.empty()) je["verdict_at_zero"] = e.confirmation;
    j["edges"].push_back(je);
  }
  j["acyclic"] = acyclic();
  return j;
}

bool DeformationGraph::acyclic() const {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : edges) {
    if (e.forbidden) continue;
    if (e.from == e.to) return false;
    adj[e.from].push_back(e.to);
  }
  std::map<std::string, int> state;  // 1 on stack, 2 done
  std::function<bool(const std::string&)> dfs = [&](const std::string& u) {
    state[u] = 1;
    for (const auto& v : adj[u]) {
      if (state[v] == 1) return false;
      if (state[v] == 0 && !dfs(v)) return false;
    }
    state[u] = 2;
    return true;
  };
  for (const auto& [u, _] : adj)
    if (state[u] == 0 && !dfs(u)) return false;
  return true;
}

VerificationReport limit_continuity(const DeformationEdge& edge, double eps, double tol) {
  VerificationReport rep;
  rep.class_id = edge.ancestor_id;
  rep.check = "limit";
  const auto [i, j] = edge.parameter;
  rep.metadata["parameter"] = kappa_name(i, j);
  rep.metadata["epsilon"] = eps;
  rep.metadata["tolerance"] = tol;
  if (edge.forbidden) {
    rep.mark_undefined(edge.reason);
    return rep;
  }
  const ClassSpec& anc = find_class(edge.ancestor_id);
  const ClassSpec desc = remove_kappa(anc, i, j);
  rep.metadata["descendant"] = edge.to;
  const FrequencyConfig base = probe_config(anc.dim);
  const FrequencyConfig near = base.with_kappa(i, j, eps);
  std::vector<Complex> zt;
  for (int t = 0; t < anc.dim; ++t) zt.push_back(std::polar(std::sqrt(base.omega(t)), 0.3 + 0.4 * t));
  const auto window = index_window(anc.summed.size(), 8);
  for (unsigned f : {0u, 1u, 3u}) {
    std::vector<unsigned> fixed(anc.fixed_towers.size(), f);
    double worst = 0.0;
    for (const auto& w : window) {
      const NVec n = anc.make_n(std::vector<double>(w.begin(), w.end()), fixed);
      const Complex a = coefficient(anc, near, z_for(anc, zt), n).value();
      const Complex b = coefficient(desc, base, z_for(desc, zt), n).value();
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    rep.add("fixed=" + std::to_string(f), worst, tol);
  }
  rep.finalize();
  return rep;
}

VerificationReport density_continuity(const DeformationEdge& edge, double eps, double tol) {
  VerificationReport rep;
  rep.class_id = edge.ancestor_id;
  rep.check = "density_limit";
  const auto [i, j] = edge.parameter;
  rep.metadata["parameter"] = kappa_name(i, j);
  rep.metadata["epsilon"] = eps;
  rep.metadata["tolerance"] = tol;
  if (edge.forbidden) {
    rep.mark_undefined(edge.reason);
    return rep;
  }
  const ClassSpec& anc = find_class(edge.ancestor_id);
  const ClassSpec desc = remove_kappa(anc, i, j);
  const FrequencyConfig base = probe_config(anc.dim);
  const std::vector<unsigned> fixed(anc.fixed_towers.size(), 1u);
  MeasureDensity da, dd;
  try {
    da = density_for(anc, base.with_kappa(i, j, eps), fixed);
    dd = density_for(desc, base, fixed);
  } catch (const DensityUndefined& e) {
    rep.metadata["error"] = e.what();
    rep.verdict = "fail";
    return rep;
  }
  rep.metadata["ancestor_density"] = da.formula();
  rep.metadata["descendant_density"] = dd.formula();
  // u_v = s * omega_v, r up to 10 sqrt(omega); r = 0 itself is left out
  const std::array<double, 11> grid = {1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0, 100.0};
  const int V = da.size();
  std::vector<size_t> k(V, 0);
  double worst = 0.0;
  while (true) {
    std::vector<double> u(V);
    for (int v = 0; v < V; ++v) u[v] = grid[k[v]] * base.omega(anc.vars[v].tower);
    worst = std::max(worst, std::fabs(std::exp(da.log_value(u)) - std::exp(dd.log_value(u))));
    int v = 0;
    while (v < V && k[v] == grid.size() - 1) k[v++] = 0;
    if (v == V) break;
    ++k[v];
  }
  rep.add("grid", worst, tol);
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------- counting and maps

ClassCount class_counts(int dim, int dof) {
  ClassCount out;
  if (dim != 3 || (dof != 2 && dof != 3)) throw std::invalid_argument("class_counts: supported (dim, dof) are (3,2), (3,3)");
  const std::vector<int> swap = {1, 0, 2};
  auto orbit_key = [&](const ClassSpec& s) {
    return std::min(zero_shift_key(s), zero_shift_key(permute_towers(s, swap)));
  };
  // couplings of rho_t over the other two towers
  auto forms = [](int t) {
    std::vector<int> o;
    for (int k = 0; k < 3; ++k)
      if (k != t) o.push_back(k);
    return std::vector<std::vector<int>>{{}, {o[0]}, {o[1]}, {o[0], o[1]}};
  };
  std::set<std::string> c12;
  int gen12 = 0;
  for (const auto& a : forms(0))
    for (const auto& b : forms(1)) {
      ++gen12;
      c12.insert(orbit_key(make_3d({0, 1}, {0, 1}, {2}, {{0, a}, {1, b}})));
    }
  std::set<std::string> c13;
  int gen13 = 0;
  for (const auto& a : forms(0))
    for (const auto& b : forms(2)) {
      ++gen13;
      ClassSpec s = make_3d({0, 2}, {0, 1}, {2}, {{0, a}, {2, b}});
      if (orphan_summed(s) >= 0) continue;
      c13.insert(zero_shift_key(s));
    }
  if (dof == 2) {
    out.count = static_cast<int>(c12.size() + c13.size());
    out.generated = gen12 + gen13;
    out.details = {{"case12", {{"generated", gen12}, {"classes", c12.size()}}},
                   {"case13", {{"generated", gen13}, {"classes", c13.size()}}}};
    return out;
  }
  // three dof: the (rho1, rho2) pairing quotiented by 1<->2, times the four rho3 forms
  std::set<std::string> full;
  int gen = 0;
  for (const auto& a : forms(0))
    for (const auto& b : forms(1))
      for (const auto& c : forms(2)) {
        ++gen;
        full.insert(orbit_key(make_3d({0, 1, 2}, {0, 1}, {2}, {{0, a}, {1, b}, {2, c}})));
      }
  out.count = static_cast<int>(c12.size() * forms(2).size());
  out.generated = gen;
  out.details = {{"pairings_12", c12.size()},
                 {"rho3_forms", forms(2).size()},
                 {"full_orbit_count", full.size()}};
  return out;
}

ClassSpec shift_extension(const ClassSpec& spec, const std::vector<double>& alphas) {
  if (static_cast<int>(alphas.size()) != spec.dim) throw std::invalid_argument("shift_extension: one shift per tower");
  for (double a : alphas)
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("shift_extension: shifts must be non-negative");
  ClassSpec s = spec;
  for (auto& v : s.vars) v.exponent = v.exponent.bake_alpha(alphas);
  for (auto& r : s.rho) {
    r.omega_exp = r.omega_exp.bake_alpha(alphas);
    r.gamma_arg = r.gamma_arg.bake_alpha(alphas);
    if (r.gamma_den) r.gamma_den = r.gamma_den->bake_alpha(alphas);
  }
  if (std::any_of(alphas.begin(), alphas.end(), [](double a) { return a != 0.0; })) {
    std::string tag = "+alpha(";
    for (size_t k = 0; k < alphas.size(); ++k) tag += (k ? "," : "") + fmt(alphas[k]);
    s.id += tag + ")";
    s.label += tag + ")";
  }
  return s;
}

LandauFrequencies landau_map(double cyclotron, double potential) {
  if (!(cyclotron >= 0.0) || !(potential >= 0.0) || !std::isfinite(cyclotron) || !std::isfinite(potential))
    throw std::invalid_argument("landau_map: frequencies must be non-negative");
  if (cyclotron == 0.0 && potential == 0.0) throw std::invalid_argument("landau_map: both frequencies vanish");
  LandauFrequencies out;
  const double root = std::hypot(cyclotron, potential);
  out.omega_plus = cyclotron + root;
  // omega^2 / (root + cyclotron) avoids cancellation for a weak potential
  out.omega_minus = potential * potential / (root + cyclotron);
  out.degenerate = out.omega_minus == 0.0;
  if (out.omega_plus > 0.0 && out.omega_minus > 0.0)
    out.config = FrequencyConfig({out.omega_plus, out.omega_minus}, out.shifts);
  return out;
}

}  // namespace vcs
