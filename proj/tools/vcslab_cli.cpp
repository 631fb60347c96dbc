// vcslab: list, describe and verify VCS classes; export taxonomy graphs and figure data.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "vcslab/convergence.hpp"
#include "vcslab/moments.hpp"
#include "vcslab/suite.hpp"
#include "vcslab/taxonomy.hpp"

using namespace vcs;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw UsageError("cannot open " + out + " for writing");
  f << text;
  if (!f) throw UsageError("write failed: " + out);
}

// "lo:hi" with lo <= hi
std::pair<unsigned, unsigned> parse_range(const std::string& s) {
  const auto c = s.find(':');
  if (c == std::string::npos) throw UsageError("range must look like lo:hi, got " + s);
  try {
    size_t p1 = 0, p2 = 0;
    const long lo = std::stol(s.substr(0, c), &p1), hi = std::stol(s.substr(c + 1), &p2);
    if (p1 != c || p2 != s.size() - c - 1 || lo < 0 || hi < lo) throw UsageError("bad range " + s);
    return {static_cast<unsigned>(lo), static_cast<unsigned>(hi)};
  } catch (const std::logic_error&) {
    throw UsageError("bad range " + s);
  }
}

// "nK=V" and "ij=V"
std::pair<std::string, double> parse_assign(const std::string& s) {
  const auto e = s.find('=');
  if (e == std::string::npos || e == 0) throw UsageError("expected key=value, got " + s);
  try {
    size_t p = 0;
    const double v = std::stod(s.substr(e + 1), &p);
    if (p != s.size() - e - 1) throw UsageError("bad value in " + s);
    return {s.substr(0, e), v};
  } catch (const std::logic_error&) {
    throw UsageError("bad value in " + s);
  }
}

Json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vcslab: vector coherent state verification"};
  app.require_subcommand(1);

  // list
  auto* list = app.add_subcommand("list", "List registered classes");
  int list_dim = 0, list_dof = 0;
  std::string list_format = "text";
  list->add_option("--dim", list_dim, "Dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
  list->add_option("--dof", list_dof, "Degrees of freedom (1 to 3)")->check(CLI::Range(1, 3));
  list->add_option("--format", list_format)->check(CLI::IsMember({"text", "json"}));

  // describe
  auto* describe = app.add_subcommand("describe", "Show a class and its measure density");
  std::string describe_id;
  std::vector<double> describe_omega;
  unsigned describe_fixed = 1;
  describe->add_option("id", describe_id)->required();
  describe->add_option("--omega", describe_omega)->delimiter(',');
  describe->add_option("--fixed", describe_fixed, "Value of every fixed index");

  // verify
  auto* verify = app.add_subcommand("verify", "Run checks on classes");
  std::string config_path, out, format = "json";
  std::vector<std::string> classes, fixed, kappas, checks;
  std::vector<double> omega, alpha, zgrid;
  unsigned nmax = 0;
  double tol = 0.0;
  verify->add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
  verify->add_option("--class", classes, "Class ids, or all");
  verify->add_option("--omega", omega, "Frequencies a,b[,c]")->delimiter(',');
  verify->add_option("--alpha", alpha, "Spectrum shifts a,b[,c]")->delimiter(',');
  verify->add_option("--fixed", fixed, "Fixed quantum number nK=V");
  verify->add_option("--kappa", kappas, "Pin a frequency ratio ij=V");
  verify->add_option("--z-grid", zgrid, "|z|^2/omega values")->delimiter(',');
  verify->add_option("--nmax", nmax);
  verify->add_option("--tol", tol);
  verify->add_option("--checks", checks)->delimiter(',')->check(CLI::IsMember(kAllChecks));
  verify->add_option("--out", out);
  verify->add_option("--format", format)->check(CLI::IsMember({"json"}));

  // taxonomy
  auto* taxonomy = app.add_subcommand("taxonomy", "Deformation graphs, class counts, sub-classes");
  int tax_dim = 2, tax_dof = 2;
  std::string tax_format = "dot", tax_out, tax_family;
  bool tax_counts = false;
  taxonomy->add_option("--dim", tax_dim);
  taxonomy->add_option("--dof", tax_dof);
  taxonomy->add_option("--format", tax_format)->check(CLI::IsMember({"dot", "json"}));
  taxonomy->add_option("--out", tax_out);
  taxonomy->add_flag("--counts", tax_counts, "Print the class count instead of the graph");
  taxonomy->add_option("--subclasses", tax_family, "Enumerate the sub-class quadruples of a family");

  // figure gamma-ratio
  auto* figure = app.add_subcommand("figure", "Figure data");
  figure->require_subcommand(1);
  auto* gratio = figure->add_subcommand("gamma-ratio", "Gamma-ratio difference surfaces as CSV");
  std::vector<double> fig_kappa = {1.0, 0.5, 0.1, 1e-6};
  std::string fig_m = "50:100", fig_n = "50:100", fig_out, fig_format = "csv";
  double fig_gamma = 1.0;
  gratio->add_option("--kappa", fig_kappa)->delimiter(',');
  gratio->add_option("--m", fig_m, "Range lo:hi");
  gratio->add_option("--n", fig_n, "Range lo:hi");
  gratio->add_option("--gamma13", fig_gamma);
  gratio->add_option("--out", fig_out);
  gratio->add_option("--format", fig_format)->check(CLI::IsMember({"csv"}));

  // report
  auto* report = app.add_subcommand("report", "Full acceptance run as JSON");
  std::string report_out;
  report->add_option("--out", report_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      Json arr = Json::array();
      std::ostringstream os;
      for (const auto& c : registry()) {
        if (list_dim && c.dim != list_dim) continue;
        if (list_dof && c.dof != list_dof) continue;
        std::string dom;
        for (const auto& d : c.domain) dom += (dom.empty() ? "" : "; ") + d.str();
        arr.push_back({{"id", c.id}, {"label", c.label}, {"kappa_domain", dom}});
        os << c.id << "\t" << c.label << (dom.empty() ? "" : "\t" + dom) << "\n";
      }
      emit(list_format == "json" ? dump_json(arr) : os.str(), "");
      return 0;
    }

    if (*describe) {
      const ClassSpec* spec = lookup_class(describe_id);
      if (!spec) throw UsageError("unknown class id: " + describe_id);
      const std::vector<double> om = describe_omega.empty() ? omega_grid(spec->dim)[0] : describe_omega;
      if (static_cast<int>(om.size()) != spec->dim) throw UsageError("omega length does not match the class");
      const FrequencyConfig cfg(om);
      Json j = class_json(*spec);
      const MeasureDensity d = density_for(*spec, cfg, std::vector<unsigned>(spec->fixed_towers.size(), describe_fixed));
      j["density"] = d.to_json();
      emit(dump_json(j), "");
      return 0;
    }

    if (*verify) {
      RunConfig rc;
      if (!config_path.empty()) {
        try {
          rc = RunConfig::from_json(read_json(config_path));
        } catch (const std::invalid_argument& e) {
          throw UsageError(config_path + ": " + e.what());
        }
      }
      if (!classes.empty()) rc.classes = classes;
      if (!omega.empty()) rc.omegas = omega;
      if (!alpha.empty()) rc.shifts = alpha;
      for (const auto& f : fixed) {
        auto [k, v] = parse_assign(f);
        if (k.size() != 2 || k[0] != 'n' || k[1] < '1' || k[1] > '3' || v < 0 || v != static_cast<unsigned>(v))
          throw UsageError("--fixed expects nK=V with K in 1..3 and V a non-negative integer");
        rc.fixed[k[1] - '1'] = static_cast<unsigned>(v);
      }
      for (const auto& s : kappas) {
        auto [k, v] = parse_assign(s);
        if (k.size() != 2 || k[0] < '1' || k[0] > '3' || k[1] < '1' || k[1] > '3')
          throw UsageError("--kappa expects ij=V with i, j in 1..3");
        rc.kappa[{k[0] - '1', k[1] - '1'}] = v;
      }
      if (!zgrid.empty()) rc.z_grid = zgrid;
      if (verify->count("--nmax")) rc.nmax = nmax;
      if (verify->count("--tol")) rc.tol = tol;
      if (!checks.empty()) rc.checks = checks;
      if (!out.empty()) rc.out = out;
      try {
        rc.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const RunOutcome res = run_verify(rc, thread_count());
      emit(dump_json(res.report), rc.out);
      const auto& s = res.report["summary"];
      std::fprintf(stderr, "%d reports: %d pass, %d fail, %d undefined (expected)\n", s["reports"].get<int>(),
                   s["pass"].get<int>(), s["fail"].get<int>(), s["undefined"].get<int>());
      return res.exit_code;
    }

    if (*taxonomy) {
      std::string text;
      try {
        if (!tax_family.empty()) {
          Json arr = Json::array();
          for (const auto& e : enumerate_subclasses(tax_family))
            arr.push_back({{"quadruple", e.quadruple}, {"id", e.id}, {"relevant", e.relevant},
                           {"factor_of", e.factor_of}, {"factor", e.factor}});
          text = dump_json(arr);
        } else if (tax_counts) {
          const ClassCount c = class_counts(tax_dim, tax_dof);
          text = dump_json(Json{{"dim", tax_dim}, {"dof", tax_dof}, {"count", c.count}, {"generated", c.generated},
                                {"details", c.details}});
        } else {
          const DeformationGraph g = deformation_graph(tax_dim, tax_dof);
          text = tax_format == "dot" ? g.dot() : dump_json(g.to_json());
        }
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      emit(text, tax_out);
      return 0;
    }

    if (*gratio) {
      const auto [m_lo, m_hi] = parse_range(fig_m);
      const auto [n_lo, n_hi] = parse_range(fig_n);
      if (!(fig_gamma > 0.0)) throw UsageError("--gamma13 must be positive");
      std::string csv = "m,n,kappa,difference\n";
      for (double k : fig_kappa) {
        if (!(k >= 0.0)) throw UsageError("kappa values must be non-negative");
        csv += surface_csv(gamma_ratio_surface(k, fig_gamma, m_lo, m_hi, n_lo, n_hi), false);
      }
      emit(csv, fig_out);
      return 0;
    }

    if (*report) {
      const auto results = run_acceptance(thread_count());
      const Json j = acceptance_report(results);
      emit(dump_json(j), report_out);
      for (const auto& r : results)
        std::fprintf(stderr, "criterion %d %s: %s\n", r.id, r.pass ? "pass" : "FAIL", r.name.c_str());
      return j["verdict"] == "pass" ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
