#include "vcslab/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>

#include "vcslab/convergence.hpp"
#include "vcslab/moments.hpp"
#include "vcslab/normalization.hpp"
#include "vcslab/resolution.hpp"
#include "vcslab/taxonomy.hpp"

namespace vcs {

int thread_count() {
  if (const char* e = std::getenv("VCSLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(e, &end, 10);
    if (end != e && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn, int threads) {
  std::vector<std::exception_ptr> errors(n);
  const size_t workers = std::min<size_t>(std::max(1, threads), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Json class_json(const ClassSpec& s) {
  auto towers = [](const std::vector<int>& v) {
    std::vector<int> o;
    for (int t : v) o.push_back(t + 1);
    return o;
  };
  Json j;
  j["id"] = s.id;
  j["label"] = s.label;
  j["family"] = s.family;
  j["dim"] = s.dim;
  j["dof"] = s.dof;
  j["summed"] = towers(s.summed);
  j["fixed"] = towers(s.fixed_towers);
  Json ff = Json::array();
  for (const auto& f : s.factorials) ff.push_back(f.str());
  j["factorials"] = ff;
  j["tuple"] = s.tuple.rows;
  Json vars = Json::array();
  for (const auto& v : s.vars) vars.push_back({{"z", "z" + tower_name(v.tower)}, {"exponent", v.exponent.str()}});
  j["variables"] = vars;
  Json rho = Json::array();
  for (const auto& r : s.rho) {
    Json e = {{"tower", r.tower + 1}, {"omega_exponent", r.omega_exp.str()}, {"gamma_argument", r.gamma_arg.str()}};
    if (r.gamma_den) e["gamma_denominator"] = r.gamma_den->str();
    rho.push_back(e);
  }
  j["rho"] = rho;
  Json dom = Json::array();
  for (const auto& d : s.domain) dom.push_back({{"summed", "n" + tower_name(d.summed_tower)}, {"requires", d.str()}});
  j["kappa_domain"] = dom;
  return j;
}

std::vector<std::vector<double>> omega_grid(int dim) {
  if (dim == 2) return {{1, 1}, {1, 2}, {2, 1}};
  return {{1, 2, 3}, {2, 1, 3}};
}

FrequencyConfig admissible_point(int dim) {
  if (dim == 2) return FrequencyConfig({1.0, std::sqrt(2.0)});
  return FrequencyConfig({1.0, std::sqrt(2.0), std::sqrt(3.0)});
}

namespace {

const std::vector<unsigned> kFixedSweep = {0, 1, 3};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Json brief(const VerificationReport& r) {
  Json j = {{"class", r.class_id}, {"check", r.check}, {"verdict", r.verdict}, {"max_residual", r.max_residual()}};
  for (const char* k : {"omegas", "shifts", "fixed", "undefined_reason", "error", "diagnostic"})
    if (r.metadata.contains(k)) j[k] = r.metadata[k];
  return j;
}

struct Tally {
  size_t pass = 0, fail = 0, undefined = 0;
  double worst = 0.0;
  void add(const VerificationReport& r) {
    if (r.verdict == "pass") ++pass;
    else if (r.verdict == "undefined") ++undefined;
    else ++fail;
    const double m = r.max_residual();
    if (r.verdict != "undefined" && m > worst) worst = m;
  }
  std::string str(const std::string& what) const {
    return std::to_string(pass) + "/" + std::to_string(pass + fail + undefined) + " " + what + " pass" +
           (undefined ? ", " + std::to_string(undefined) + " undefined" : "") + ", max residual " + fmt("%.3g", worst);
  }
};

std::vector<unsigned> fixed_vec(const ClassSpec& s, unsigned v) { return std::vector<unsigned>(s.fixed_towers.size(), v); }

VerificationReport verdict_report(const ClassSpec& spec, const FrequencyConfig& cfg,
                                  const std::vector<unsigned>& fixed) {
  VerificationReport rep;
  rep.class_id = spec.id;
  rep.check = "convergence";
  rep.metadata["omegas"] = cfg.omegas();
  rep.metadata["fixed"] = fixed;
  const Verdict v = class_verdict(spec, cfg, fixed);
  rep.metadata["status"] = status_name(v.status);
  rep.metadata["witness"] = v.witness;
  rep.metadata["details"] = v.details;
  if (auto bad = spec.violated_domain(cfg)) {
    rep.mark_undefined("non-normalizable: requires " + bad->str());
    return rep;
  }
  rep.add("status", v.status == Status::Convergent ? 0.0 : 1.0, 0.5);
  rep.finalize();
  return rep;
}

struct Graphs {
  std::vector<DeformationGraph> all;
  Graphs() {
    for (auto [d, f] : {std::pair{2, 1}, {2, 2}, {3, 2}}) all.push_back(deformation_graph(d, f));
  }
};

const Graphs& graphs() {
  static const Graphs g;
  return g;
}

}  // namespace

// ---------------------------------------------------------------- verify

const std::vector<std::string> kAllChecks = {"moment", "norm", "resolution", "convergence", "factor", "limits"};

void RunConfig::validate() const {
  auto bad = [](const std::string& m) { throw std::invalid_argument(m); };
  if (classes.empty()) bad("no classes selected");
  for (const auto& c : classes)
    if (c != "all" && !lookup_class(c)) bad("unknown class id: " + c);
  if (!omegas.empty()) {
    if (omegas.size() < 2 || omegas.size() > 3) bad("omega needs 2 or 3 entries");
    for (double w : omegas)
      if (!(w > 0.0) || !std::isfinite(w)) bad("omega entries must be positive");
    for (const auto& c : classes)
      if (c != "all" && find_class(c).dim != static_cast<int>(omegas.size()))
        bad("omega length does not match the dimension of " + c);
  }
  if (!shifts.empty()) {
    if (omegas.empty()) bad("alpha needs an explicit omega");
    if (shifts.size() != omegas.size()) bad("alpha and omega differ in length");
    for (double a : shifts)
      if (!(a >= 0.0) || !std::isfinite(a)) bad("alpha entries must be non-negative");
  }
  for (auto [t, v] : fixed)
    if (t < 0 || t > 2) bad("fixed tower out of range");
  for (auto [k, v] : kappa) {
    if (k.first == k.second || k.first < 0 || k.second < 0 || k.first > 2 || k.second > 2) bad("bad kappa pair");
    if (!(v >= 0.0) || !std::isfinite(v)) bad("kappa values must be non-negative");
  }
  if (z_grid.empty()) bad("z grid must not be empty");
  for (double z : z_grid)
    if (!(z > 0.0) || !std::isfinite(z)) bad("z grid entries must be positive");
  if (tol && !(*tol > 0.0)) bad("tolerance must be positive");
  if (nmax && *nmax > 200) bad("nmax above 200 is not supported");
  for (const auto& c : checks)
    if (std::find(kAllChecks.begin(), kAllChecks.end(), c) == kAllChecks.end()) bad("unknown check: " + c);
}

Json RunConfig::to_json() const {
  Json j;
  j["classes"] = classes;
  j["omega"] = omegas;
  j["alpha"] = shifts;
  Json fx = Json::object();
  for (auto [t, v] : fixed) fx["n" + tower_name(t)] = v;
  j["fixed"] = fx;
  Json kp = Json::object();
  for (auto [k, v] : kappa) kp[tower_name(k.first) + tower_name(k.second)] = v;
  j["kappa"] = kp;
  j["z_grid"] = z_grid;
  if (nmax) j["nmax"] = *nmax;
  if (tol) j["tol"] = *tol;
  j["checks"] = checks;
  if (!out.empty()) j["out"] = out;
  return j;
}

RunConfig RunConfig::from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const std::vector<std::string> keys = {"classes", "omega", "alpha", "fixed", "kappa",
                                                "z_grid",  "nmax",  "tol",   "checks", "out"};
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw std::invalid_argument("unknown config key: " + k);
  RunConfig c;
  try {
    if (j.contains("classes")) {
      if (j["classes"].is_string()) c.classes = {j["classes"].get<std::string>()};
      else c.classes = j["classes"].get<std::vector<std::string>>();
    }
    if (j.contains("omega")) c.omegas = j["omega"].get<std::vector<double>>();
    if (j.contains("alpha")) c.shifts = j["alpha"].get<std::vector<double>>();
    if (j.contains("fixed"))
      for (const auto& [k, v] : j["fixed"].items()) {
        if (k.size() != 2 || k[0] != 'n' || k[1] < '1' || k[1] > '3') throw std::invalid_argument("bad fixed key " + k);
        const long long val = v.get<long long>();
        if (val < 0) throw std::invalid_argument("fixed values must be non-negative");
        c.fixed[k[1] - '1'] = static_cast<unsigned>(val);
      }
    if (j.contains("kappa"))
      for (const auto& [k, v] : j["kappa"].items()) {
        if (k.size() != 2 || k[0] < '1' || k[0] > '3' || k[1] < '1' || k[1] > '3')
          throw std::invalid_argument("bad kappa key " + k);
        c.kappa[{k[0] - '1', k[1] - '1'}] = v.get<double>();
      }
    if (j.contains("z_grid")) c.z_grid = j["z_grid"].get<std::vector<double>>();
    if (j.contains("nmax")) {
      const long long v = j["nmax"].get<long long>();
      if (v < 0) throw std::invalid_argument("nmax must be non-negative");
      c.nmax = static_cast<unsigned>(v);
    }
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("checks")) c.checks = j["checks"].get<std::vector<std::string>>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunOutcome run_verify(const RunConfig& rc, int threads) {
  rc.validate();
  std::vector<const ClassSpec*> classes;
  if (std::find(rc.classes.begin(), rc.classes.end(), "all") != rc.classes.end()) {
    for (const auto& c : registry())
      if (rc.omegas.empty() || c.dim == static_cast<int>(rc.omegas.size())) classes.push_back(&c);
  } else {
    for (const auto& id : rc.classes) classes.push_back(&find_class(id));
  }

  using Job = std::function<VerificationReport()>;
  std::vector<Job> jobs;
  auto has = [&](const char* c) { return std::find(rc.checks.begin(), rc.checks.end(), c) != rc.checks.end(); };
  const auto relations = has("factor") ? declared_factor_relations() : std::vector<FactorRelation>{};

  for (const ClassSpec* spec : classes) {
    std::vector<FrequencyConfig> cfgs;
    auto finish = [&](FrequencyConfig f) {
      if (!rc.shifts.empty()) f = f.with_shifts(rc.shifts);
      for (auto [k, v] : rc.kappa)
        if (k.first < spec->dim && k.second < spec->dim) f = f.with_kappa(k.first, k.second, v);
      return f;
    };
    if (!rc.omegas.empty()) cfgs.push_back(finish(FrequencyConfig(rc.omegas)));
    else
      for (const auto& om : omega_grid(spec->dim)) cfgs.push_back(finish(FrequencyConfig(om)));
    std::vector<std::vector<unsigned>> fixeds;
    {
      std::vector<unsigned> base;
      bool all_given = true;
      for (int t : spec->fixed_towers) {
        auto it = rc.fixed.find(t);
        all_given &= it != rc.fixed.end();
        base.push_back(it != rc.fixed.end() ? it->second : 0u);
      }
      if (all_given) fixeds.push_back(base);
      else
        for (unsigned v : kFixedSweep) {
          std::vector<unsigned> f = base;
          for (size_t k = 0; k < f.size(); ++k)
            if (!rc.fixed.count(spec->fixed_towers[k])) f[k] = v;
          fixeds.push_back(f);
        }
    }
    for (const auto& cfg : cfgs)
      for (const auto& fx : fixeds) {
        if (has("moment"))
          jobs.push_back([=, &rc] {
            QuadSpec q;
            if (rc.tol) q.tolerance = *rc.tol;
            return verify_moments(*spec, cfg, fx, rc.nmax.value_or(20), q);
          });
        if (has("norm")) jobs.push_back([=, &rc] { return verify_norm(*spec, cfg, fx, rc.z_grid, rc.tol.value_or(1e-9)); });
        if (has("resolution"))
          jobs.push_back([=, &rc] {
            const unsigned n = rc.nmax.value_or(spec->summed.size() == 1 ? 15 : 12);
            return resolution_residual(*spec, cfg, fx, n, nullptr, rc.tol.value_or(1e-6));
          });
        if (has("convergence")) jobs.push_back([=] { return verdict_report(*spec, cfg, fx); });
      }
    if (has("factor"))
      for (const auto& r : relations)
        if (r.sub_a == spec->id || r.sub_b == spec->id) jobs.push_back([r] { return verify_factor(r); });
    if (has("limits"))
      for (const auto& g : graphs().all)
        for (const auto& e : g.edges)
          if (e.ancestor_id == spec->id) jobs.push_back([e] { return limit_continuity(e); });
  }

  std::vector<VerificationReport> reports(jobs.size());
  parallel_for(jobs.size(), [&](size_t i) { reports[i] = jobs[i](); }, threads);

  RunOutcome out;
  Json arr = Json::array();
  size_t pass = 0, fail = 0, undef = 0;
  for (const auto& r : reports) {
    arr.push_back(r.to_json(true));
    if (r.verdict == "pass") ++pass;
    else if (r.verdict == "undefined") ++undef;
    else ++fail;
  }
  out.report["config"] = rc.to_json();
  out.report["summary"] = {{"reports", reports.size()}, {"pass", pass}, {"fail", fail}, {"undefined", undef}};
  out.report["reports"] = arr;
  out.exit_code = fail ? 1 : 0;
  return out;
}

// ---------------------------------------------------------------- acceptance criteria

Json CriterionResult::to_json() const {
  return {{"id", id}, {"name", name}, {"verdict", pass ? "pass" : "fail"}, {"summary", summary}, {"details", details}};
}

CriterionResult criterion_moments(int threads) {
  CriterionResult c;
  c.id = 1;
  c.name = "moment certification";
  struct Job {
    const ClassSpec* spec;
    FrequencyConfig cfg;
    std::vector<unsigned> fixed;
  };
  std::vector<Job> jobs;
  for (const auto& s : registry())
    for (const auto& om : omega_grid(s.dim))
      for (unsigned f : kFixedSweep) jobs.push_back({&s, FrequencyConfig(om), fixed_vec(s, f)});
  std::vector<VerificationReport> reps(jobs.size());
  parallel_for(jobs.size(), [&](size_t i) { reps[i] = verify_moments(*jobs[i].spec, jobs[i].cfg, jobs[i].fixed, 20); },
               threads);
  Tally t;
  Json arr = Json::array();
  for (const auto& r : reps) {
    t.add(r);
    Json b = brief(r);
    b["density_source"] = r.metadata.value("density_source", "");
    arr.push_back(b);
  }

  // shifted spectra at one frequency point per dimension
  std::vector<VerificationReport> shifted(registry().size());
  parallel_for(registry().size(), [&](size_t i) {
    const auto& s = registry()[i];
    FrequencyConfig cfg = FrequencyConfig(omega_grid(s.dim)[1]).with_shifts(std::vector<double>(s.dim, 0.5));
    shifted[i] = verify_moments(s, cfg, fixed_vec(s, 1), 20);
  }, threads);
  Tally ts;
  for (const auto& r : shifted) ts.add(r);

  // a second density for the same moments: pin c2 to 2 omega2 on a two-dof class
  const ClassSpec& g1 = find_class("2d.2dof.gamma1-1.A");
  const FrequencyConfig c12({1.0, 2.0});
  const MeasureDensity d0 = density_for(g1, c12, {1});
  const MeasureDensity d1 = solve_density(g1, c12, {1}, {{1, std::log(2.0 * c12.omega(1))}});
  const VerificationReport alt = verify_moments(g1, c12, {1}, 20, {}, &d1);
  const double dist = density_distance(d0, d1);

  // negative control: densities built for omega * 1.01 must not reproduce the moments
  Json tamper = Json::array();
  bool tamper_ok = true;
  for (const char* id : {"2d.1dof.plain1.A", "2d.2dof.gamma1-gamma2.A", "3d.3dof.max"}) {
    const ClassSpec& s = find_class(id);
    const auto om = omega_grid(s.dim)[s.dim == 2 ? 1 : 0];
    std::vector<double> bumped = om;
    for (auto& w : bumped) w *= 1.01;
    const MeasureDensity wrong = density_for(s, FrequencyConfig(bumped), fixed_vec(s, 1));
    const VerificationReport r = verify_moments(s, FrequencyConfig(om), fixed_vec(s, 1), 20, {}, &wrong);
    tamper_ok &= r.verdict == "fail";
    tamper.push_back(brief(r));
  }

  c.pass = t.fail == 0 && t.undefined == 0 && ts.fail == 0 && alt.passed() && dist > 0.1 && tamper_ok;
  c.summary = t.str("moment reports") + "; shifted " + ts.str("reports") + "; alternative density " + alt.verdict +
              "; tampered densities " + (tamper_ok ? "rejected" : "NOT rejected");
  c.details["tolerance"] = 1e-8;
  c.details["reports"] = arr;
  c.details["shifted"] = {{"alpha", 0.5}, {"pass", ts.pass}, {"fail", ts.fail}, {"max_residual", ts.worst}};
  c.details["non_unique_density"] = {{"class", g1.id},
                                     {"default", d0.formula()},
                                     {"alternative", d1.formula()},
                                     {"parameter_distance", dist},
                                     {"verdict", alt.verdict},
                                     {"max_residual", alt.max_residual()}};
  c.details["tampered"] = tamper;
  return c;
}

CriterionResult criterion_norms(int threads) {
  CriterionResult c;
  c.id = 2;
  c.name = "norm closed-form equivalence";
  struct Job {
    const ClassSpec* spec;
    FrequencyConfig cfg;
    std::vector<unsigned> fixed;
  };
  std::vector<Job> jobs;
  for (const auto& s : registry())
    for (const auto& om : omega_grid(s.dim))
      for (unsigned f : kFixedSweep) jobs.push_back({&s, FrequencyConfig(om), fixed_vec(s, f)});
  std::vector<VerificationReport> reps(jobs.size());
  parallel_for(jobs.size(), [&](size_t i) { reps[i] = verify_norm(*jobs[i].spec, jobs[i].cfg, jobs[i].fixed); }, threads);
  Tally closed, tail;
  Json typos = Json::array(), arr = Json::array();
  for (const auto& r : reps) {
    (r.metadata.value("method", "") == "closed_form" ? closed : tail).add(r);
    Json b = brief(r);
    b["method"] = r.metadata.value("method", "");
    arr.push_back(b);
    if (r.metadata.value("suspected_typo", false))
      typos.push_back({{"class", r.class_id}, {"omegas", r.metadata["omegas"]}, {"fixed", r.metadata["fixed"]},
                       {"printed_form", r.metadata["printed_form"]}});
  }
  c.pass = closed.fail == 0 && tail.fail == 0 && closed.undefined == 0 && closed.pass > 0;
  c.summary = "closed form: " + closed.str("reports") + "; series only: " + tail.str("reports") + "; " +
              std::to_string(typos.size()) + " printed-form reports flagged";
  c.details["tolerance"] = 1e-9;
  c.details["z_scales"] = {0.1, 1.0, 5.0};
  c.details["reports"] = arr;
  c.details["suspected_typos"] = typos;
  return c;
}

CriterionResult criterion_resolution(int threads) {
  CriterionResult c;
  c.id = 3;
  c.name = "resolution of identity";
  const auto& reg = registry();
  std::vector<VerificationReport> reps(reg.size());
  parallel_for(reg.size(), [&](size_t i) {
    const auto& s = reg[i];
    reps[i] = resolution_residual(s, admissible_point(s.dim), fixed_vec(s, 1), s.summed.size() == 1 ? 15 : 12);
  }, threads);
  Tally t;
  Json arr = Json::array();
  size_t aliased = 0;
  for (const auto& r : reps) {
    t.add(r);
    Json b = brief(r);
    b["nmax"] = r.metadata["nmax"];
    b["min_eigenvalue"] = r.metadata.value("min_eigenvalue", NAN);
    b["aliasing"] = r.metadata.value("aliasing", false);
    aliased += r.metadata.value("aliasing", false);
    arr.push_back(b);
  }
  // kappa = sqrt 2 scan, plus the full rule of every 3D class at the admissible point
  const auto scan = aliasing_solutions(SelectionRule::single({1.0, std::sqrt(2.0)}), 100);
  std::vector<size_t> per_class(reg.size(), 0);
  parallel_for(reg.size(), [&](size_t i) {
    const auto& s = reg[i];
    if (s.summed.size() < 2) return;
    per_class[i] = aliasing_solutions(selection_rule(s, admissible_point(s.dim)), 100).size();
  }, threads);
  size_t rule_hits = 0;
  for (size_t n : per_class) rule_hits += n;
  c.pass = t.fail == 0 && t.undefined == 0 && aliased == 0 && scan.empty() && rule_hits == 0;
  c.summary = t.str("classes") + "; kappa=sqrt2 scan to window 100: " + std::to_string(scan.size()) +
              " solutions; class selection rules: " + std::to_string(rule_hits) + " solutions";
  c.details["tolerance"] = 1e-6;
  c.details["reports"] = arr;
  c.details["sqrt2_scan"] = {{"window", 100}, {"solutions", scan.size()}};
  c.details["class_rule_scan_solutions"] = rule_hits;
  return c;
}

CriterionResult criterion_convergence(int threads) {
  CriterionResult c;
  c.id = 4;
  c.name = "convergence verdicts";
  struct Probe {
    std::string group;
    const ClassSpec* spec;
    FrequencyConfig cfg;
    Status expected;
    std::string point;
  };
  std::vector<Probe> probes;
  const FrequencyConfig base({1.0, 2.0, 3.0});
  const ClassSpec& g1323 = find_class("3d.2dof.c12-gamma13-gamma23");
  for (double k13 : {0.0, 1e-3, 0.5, 1.0, 10.0})
    for (double k23 : {0.0, 1e-3, 0.5, 1.0, 10.0})
      probes.push_back({"(gamma13,gamma23)", &g1323, base.with_kappa(0, 2, k13).with_kappa(1, 2, k23),
                        Status::Convergent, "kappa13=" + fmt("%g", k13) + " kappa23=" + fmt("%g", k23)});
  const ClassSpec& g1332 = find_class("3d.2dof.c13-gamma13-gamma32");
  for (double k : {0.0, 1e-3, 1e-2, 0.1, 1.0, 10.0})
    probes.push_back({"(gamma13,gamma32)", &g1332, base.with_kappa(2, 1, k),
                      k == 0.0 ? Status::Divergent : Status::Convergent, "kappa32=" + fmt("%g", k)});
  const ClassSpec& noe = find_class("3d.2dof.c13-gamma1-1");
  for (double k : {1.0, 0.5, 0.1, 1e-6})
    probes.push_back({"c13-gamma1-1", &noe, base.with_kappa(0, 1, k), Status::Convergent, "kappa12=" + fmt("%g", k)});
  for (const auto& s : registry())
    probes.push_back({"registry", &s, s.dim == 2 ? FrequencyConfig({1.0, 2.0}) : base, Status::Convergent, "base"});

  std::vector<Verdict> verdicts(probes.size());
  parallel_for(probes.size(), [&](size_t i) {
    verdicts[i] = class_verdict(*probes[i].spec, probes[i].cfg, fixed_vec(*probes[i].spec, 1));
  }, threads);
  size_t ok = 0;
  Json arr = Json::array();
  for (size_t i = 0; i < probes.size(); ++i) {
    const bool match = verdicts[i].status == probes[i].expected;
    ok += match;
    arr.push_back({{"group", probes[i].group},
                   {"class", probes[i].spec->id},
                   {"point", probes[i].point},
                   {"expected", status_name(probes[i].expected)},
                   {"status", status_name(verdicts[i].status)},
                   {"witness", verdicts[i].witness}});
  }
  c.pass = ok == probes.size();
  c.summary = std::to_string(ok) + "/" + std::to_string(probes.size()) + " probes match the expected verdict";
  c.details["fixed"] = 1;
  c.details["z_scales"] = {0.1, 1.0, 5.0};
  c.details["probes"] = arr;
  return c;
}

CriterionResult criterion_surfaces() {
  CriterionResult c;
  c.id = 5;
  c.name = "gamma-ratio surfaces";
  bool ok = true;
  Json arr = Json::array();
  for (double k : {1.0, 0.5, 0.1, 1e-6}) {
    const auto pts = gamma_ratio_surface(k, 1.0, 50, 100, 50, 100);
    const double d50 = std::fabs(pts.front().difference), d100 = std::fabs(pts.back().difference);
    ok &= d100 < d50;
    arr.push_back({{"kappa", k}, {"abs_diff_50_50", d50}, {"abs_diff_100_100", d100}, {"decreasing", d100 < d50}});
  }
  double zero_max = 0.0;
  for (const auto& p : gamma_ratio_surface(0.0, 1.0, 50, 100, 50, 100)) zero_max = std::max(zero_max, std::fabs(p.difference));
  ok &= zero_max == 0.0;
  c.pass = ok;
  c.summary = std::string("|difference| shrinks from (50,50) to (100,100) for every kappa: ") + (ok ? "yes" : "no") +
              "; kappa=0 max |difference| " + fmt("%.3g", zero_max);
  c.details["gamma13"] = 1.0;
  c.details["surfaces"] = arr;
  c.details["kappa0_max_abs"] = zero_max;
  return c;
}

CriterionResult criterion_taxonomy(int threads) {
  CriterionResult c;
  c.id = 6;
  c.name = "taxonomy";
  bool ok = true;

  Json counts = Json::array();
  const std::vector<std::tuple<int, int, std::string, int>> wanted = {{3, 2, "case12", 10}, {3, 2, "total", 22}, {3, 3, "total", 40}};
  for (const auto& [d, f, part, want] : wanted) {
    const ClassCount cc = class_counts(d, f);
    const int got = part == "case12" ? cc.details["case12"]["classes"].get<int>() : cc.count;
    ok &= got == want;
    counts.push_back({{"dim", d}, {"dof", f}, {"part", part}, {"count", got}, {"expected", want}, {"details", cc.details}});
  }

  const auto rels = declared_factor_relations();
  std::vector<VerificationReport> frep(rels.size());
  parallel_for(rels.size(), [&](size_t i) { frep[i] = verify_factor(rels[i]); }, threads);
  Tally ft;
  Json farr = Json::array();
  for (size_t i = 0; i < rels.size(); ++i) {
    ft.add(frep[i]);
    Json b = brief(frep[i]);
    b["base"] = rels[i].sub_a;
    b["factor"] = rels[i].str();
    farr.push_back(b);
  }
  ok &= ft.fail == 0;

  std::vector<DeformationEdge> defined;
  Json gjson = Json::array();
  bool acyclic = true;
  for (const auto& g : graphs().all) {
    acyclic &= g.acyclic();
    gjson.push_back(g.to_json());
    for (const auto& e : g.edges)
      if (!e.forbidden) defined.push_back(e);
  }
  ok &= acyclic;
  std::vector<VerificationReport> lrep(defined.size()), drep(defined.size());
  parallel_for(defined.size(), [&](size_t i) {
    lrep[i] = limit_continuity(defined[i]);
    drep[i] = density_continuity(defined[i]);
  }, threads);
  Tally lt, dt;
  Json larr = Json::array();
  for (size_t i = 0; i < defined.size(); ++i) {
    lt.add(lrep[i]);
    dt.add(drep[i]);
    larr.push_back({{"from", defined[i].from},
                    {"to", defined[i].to},
                    {"parameter", kappa_name(defined[i].parameter.first, defined[i].parameter.second)},
                    {"coefficient_distance", lrep[i].max_residual()},
                    {"coefficient_verdict", lrep[i].verdict},
                    {"density_distance", drep[i].max_residual()},
                    {"density_verdict", drep[i].verdict}});
  }
  ok &= lt.fail == 0 && dt.fail == 0;

  // (1<->2) maps every registered case-(12) class onto a registered class
  size_t closed = 0, c12 = 0;
  for (const auto& s : registry())
    if (s.family == "3d.2dof.c12") {
      ++c12;
      closed += match_up_to_symmetry(permute_towers(s, {1, 0, 2})) != nullptr;
    }
  ok &= closed == c12;

  // shift extension: zero shift changes nothing, alpha = 1/2 gives (3/2)(5/2) at n = 2
  const ClassSpec& p1 = find_class("2d.1dof.plain1.A");
  const ClassSpec z0 = shift_extension(p1, {0.0, 0.0});
  const ClassSpec h = shift_extension(p1, {0.5, 0.5});
  const FrequencyConfig unit({1.0, 1.0});
  const double poch = std::exp(log_target(h, unit, {2, 0, 0}));
  double zero_gap = 0.0;
  for (int n = 0; n <= 10; ++n)
    for (int m : {0, 1, 3}) {
      const NVec nv{static_cast<double>(n), static_cast<double>(m), 0.0};
      zero_gap = std::max(zero_gap, std::fabs(log_target(z0, unit, nv) - log_target(p1, unit, nv)));
    }
  const bool shift_ok = zero_gap == 0.0 && std::fabs(poch - 3.75) <= 1e-13;
  ok &= shift_ok;

  const LandauFrequencies lm = landau_map(3.0, 4.0);
  c.pass = ok;
  c.summary = "counts " + std::to_string(counts[0]["count"].get<int>()) + "/" + std::to_string(counts[1]["count"].get<int>()) +
              "/" + std::to_string(counts[2]["count"].get<int>()) + "; factors " + ft.str("relations") + "; limits " +
              lt.str("edges") + "; density limits " + dt.str("edges") + "; symmetry closure " + std::to_string(closed) +
              "/" + std::to_string(c12) + "; graphs acyclic: " + (acyclic ? "yes" : "no") +
              "; shift extension: " + (shift_ok ? "ok" : "mismatch");
  c.details["counts"] = counts;
  c.details["factor_relations"] = farr;
  c.details["graphs"] = gjson;
  c.details["limits"] = larr;
  c.details["symmetry_closure"] = {{"classes", c12}, {"closed", closed}};
  c.details["shift_extension"] = {{"zero_shift_max_log_gap", zero_gap}, {"pochhammer_n2_alpha_half", poch}};
  c.details["landau_3_4"] = {{"omega_plus", lm.omega_plus}, {"omega_minus", lm.omega_minus}};
  return c;
}

std::vector<CriterionResult> run_acceptance(int threads) {
  return {criterion_moments(threads),     criterion_norms(threads),       criterion_resolution(threads),
          criterion_convergence(threads), criterion_surfaces(),           criterion_taxonomy(threads)};
}

Json acceptance_report(const std::vector<CriterionResult>& results) {
  Json j;
  j["tool"] = "vcslab";
  j["registry_size"] = registry().size();
  bool all = true;
  Json arr = Json::array();
  for (const auto& r : results) {
    all &= r.pass;
    arr.push_back(r.to_json());
  }
  j["verdict"] = all ? "pass" : "fail";
  j["criteria"] = arr;
  return j;
}

}  // namespace vcs
