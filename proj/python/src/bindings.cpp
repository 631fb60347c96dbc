#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vcslab/convergence.hpp"
#include "vcslab/moments.hpp"
#include "vcslab/normalization.hpp"
#include "vcslab/resolution.hpp"
#include "vcslab/special.hpp"
#include "vcslab/suite.hpp"
#include "vcslab/taxonomy.hpp"

namespace py = pybind11;
using namespace vcs;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

FrequencyConfig make_cfg(const std::vector<double>& omega, const std::vector<double>& alpha) {
  return FrequencyConfig(omega, alpha);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "vcslab core: class registry, moment, norm, resolution and convergence checks";

  py::register_exception<DensityUndefined>(m, "DensityUndefined", PyExc_RuntimeError);

  m.def("log_gamma", &sf::log_gamma, py::arg("x"));
  m.def("pochhammer", [](double g, unsigned n) { return sf::pochhammer(g, n).value(); }, py::arg("g"), py::arg("n"));
  m.def("log_pochhammer", [](double g, unsigned n) { return sf::pochhammer(g, n).log_abs; }, py::arg("g"),
        py::arg("n"));
  m.def("upper_incomplete_gamma", [](double a, double x) { return sf::upper_incomplete_gamma(a, x).value(); },
        py::arg("a"), py::arg("x"));
  m.def("hyp1f1_one", [](double b, double x) { return sf::hyp1f1_one(b, x).value(); }, py::arg("b"), py::arg("x"));

  m.def("class_ids", [] {
    std::vector<std::string> ids;
    for (const auto& c : registry()) ids.push_back(c.id);
    return ids;
  });
  m.def("describe", [](const std::string& id) { return to_py(class_json(find_class(id))); }, py::arg("id"));
  m.def("kappa", [](const std::vector<double>& omega, int i, int j) { return FrequencyConfig(omega).kappa(i, j); },
        py::arg("omega"), py::arg("i"), py::arg("j"), "omega[j] / omega[i], towers 0-based");

  m.def(
      "verify_moments",
      [](const std::string& id, const std::vector<double>& omega, const std::vector<unsigned>& fixed, unsigned nmax,
         const std::vector<double>& alpha) {
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = verify_moments(find_class(id), make_cfg(omega, alpha), fixed, nmax);
        }
        return to_py(r.to_json());
      },
      py::arg("id"), py::arg("omega"), py::arg("fixed"), py::arg("nmax") = 20, py::arg("alpha") = std::vector<double>{});
  m.def(
      "verify_norm",
      [](const std::string& id, const std::vector<double>& omega, const std::vector<unsigned>& fixed) {
        return to_py(verify_norm(find_class(id), FrequencyConfig(omega), fixed).to_json());
      },
      py::arg("id"), py::arg("omega"), py::arg("fixed"));
  m.def(
      "norm",
      [](const std::string& id, const std::vector<double>& omega, const std::vector<Complex>& z,
         const std::vector<unsigned>& fixed) {
        const NormResult r = norm_series(term_generator(find_class(id), FrequencyConfig(omega), z, fixed));
        py::dict d;
        d["log_norm"] = r.log_norm;
        d["tail_bound"] = r.tail_bound;
        d["terms"] = r.terms;
        d["ok"] = r.ok;
        return d;
      },
      py::arg("id"), py::arg("omega"), py::arg("z"), py::arg("fixed"));
  m.def(
      "state",
      [](const std::string& id, const std::vector<double>& omega, const std::vector<Complex>& z,
         const std::vector<unsigned>& fixed, unsigned nmax) {
        const TruncatedState st = state(find_class(id), FrequencyConfig(omega), z, fixed, nmax);
        py::dict coeffs;
        for (const auto& [k, v] : st.coeffs) coeffs[py::tuple(py::cast(k))] = v;
        return py::make_tuple(coeffs, st.tail_bound);
      },
      py::arg("id"), py::arg("omega"), py::arg("z"), py::arg("fixed"), py::arg("nmax"));
  m.def(
      "resolution_residual",
      [](const std::string& id, const std::vector<double>& omega, const std::vector<unsigned>& fixed, unsigned nmax) {
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = resolution_residual(find_class(id), FrequencyConfig(omega), fixed, nmax);
        }
        return to_py(r.to_json(false));
      },
      py::arg("id"), py::arg("omega"), py::arg("fixed"), py::arg("nmax"));
  m.def(
      "class_verdict",
      [](const std::string& id, const std::vector<double>& omega, const std::vector<unsigned>& fixed,
         const std::map<std::pair<int, int>, double>& kappa) {
        FrequencyConfig cfg(omega);
        for (auto [k, v] : kappa) cfg = cfg.with_kappa(k.first, k.second, v);
        return status_name(class_verdict(find_class(id), cfg, fixed).status);
      },
      py::arg("id"), py::arg("omega"), py::arg("fixed"),
      py::arg("kappa") = std::map<std::pair<int, int>, double>{});
  m.def(
      "gamma_ratio_surface",
      [](double kappa, double gamma13, unsigned m_lo, unsigned m_hi, unsigned n_lo, unsigned n_hi) {
        std::vector<std::tuple<unsigned, unsigned, double, double>> out;
        for (const auto& p : gamma_ratio_surface(kappa, gamma13, m_lo, m_hi, n_lo, n_hi))
          out.emplace_back(p.m, p.n, p.kappa, p.difference);
        return out;
      },
      py::arg("kappa"), py::arg("gamma13") = 1.0, py::arg("m_lo") = 50, py::arg("m_hi") = 100, py::arg("n_lo") = 50,
      py::arg("n_hi") = 100);

  m.def("class_count", [](int dim, int dof) { return class_counts(dim, dof).count; }, py::arg("dim"), py::arg("dof"));
  m.def("deformation_graph", [](int dim, int dof) { return to_py(deformation_graph(dim, dof).to_json()); },
        py::arg("dim"), py::arg("dof"));
  m.def("deformation_dot", [](int dim, int dof) { return deformation_graph(dim, dof).dot(); }, py::arg("dim"),
        py::arg("dof"));
  m.def("landau_map", [](double cyclotron, double potential) {
    const LandauFrequencies l = landau_map(cyclotron, potential);
    return py::make_tuple(l.omega_plus, l.omega_minus, l.degenerate);
  }, py::arg("cyclotron"), py::arg("potential"));

  m.def(
      "run_verify",
      [](const py::object& config, int threads) {
        const RunConfig rc = RunConfig::from_json(from_py(config));
        rc.validate();
        RunOutcome out;
        {
          py::gil_scoped_release release;
          out = run_verify(rc, threads > 0 ? threads : thread_count());
        }
        return py::make_tuple(to_py(out.report), out.exit_code);
      },
      py::arg("config"), py::arg("threads") = 0);
}
