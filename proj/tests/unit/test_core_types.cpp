#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "vcslab/core_types.hpp"

using namespace vcs;

TEST_CASE("kappa ratios") {
  const FrequencyConfig eq({1.0, 1.0});
  CHECK(eq.kappa(0, 1) == 1.0);
  const FrequencyConfig c({2.0, 1.0});
  CHECK(c.kappa(0, 1) == 0.5);
  CHECK(c.kappa(1, 0) == 2.0);

  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> logw(-6.0, 6.0);
  for (int k = 0; k < 1000; ++k) {
    const FrequencyConfig r({std::exp(logw(rng)), std::exp(logw(rng)), std::exp(logw(rng))});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(std::fabs(r.kappa(i, j) * r.kappa(j, i) - 1.0) <= 4 * 2.220446049250313e-16);
  }
}

TEST_CASE("frequency config validation") {
  CHECK_THROWS(FrequencyConfig({1.0, 0.0}));
  CHECK_THROWS(FrequencyConfig({1.0, -2.0}));
  CHECK_THROWS(FrequencyConfig({1.0, 2.0}, {0.5, -0.1}));
  const FrequencyConfig c({1.0, 2.0});
  CHECK_THROWS_AS(c.kappa(0, 0), std::out_of_range);
  CHECK_THROWS_AS(c.kappa(0, 2), std::out_of_range);
  const FrequencyConfig z = c.with_kappa(0, 1, 0.0);
  CHECK(z.kappa(0, 1) == 0.0);
  CHECK(z.kappa(1, 0) == 0.5);
  CHECK_THROWS(c.with_kappa(0, 1, -1.0));
}

TEST_CASE("affine forms") {
  const FrequencyConfig c({2.0, 3.0});
  const Affine a = Affine::constant(1.0) + Affine::n(0) + Affine::kappa_n(0, 1, 1, 2.0) + Affine::kappa_alpha(0, 1, 1);
  const NVec n = {4, 5, 0};
  CHECK(a.eval(c, n) == doctest::Approx(1 + 4 + 2 * 1.5 * 5));
  CHECK(a.dn(c, 1) == doctest::Approx(3.0));
  CHECK(a.depends_on_alpha());
  CHECK_FALSE(a.strip_alpha().depends_on_alpha());
  CHECK(a.without_kappa(0, 1).eval(c, n) == doctest::Approx(5.0));
  CHECK(a.bake_alpha({0.0, 0.5}).eval(c, n) == doctest::Approx(1 + 4 + 15 + 0.75));
}

TEST_CASE("registry shape") {
  const auto& reg = registry();
  std::set<std::string> ids;
  int one_dof = 0, two_dof_2d = 0, c12 = 0, c13 = 0, three = 0;
  for (const auto& c : reg) {
    CHECK(ids.insert(c.id).second);
    CHECK_NOTHROW(c.validate());
    CHECK(&find_class(c.id) == &c);
    CHECK(lookup_class(c.id)->same_structure(c));
    if (c.id.rfind("2d.1dof.", 0) == 0) ++one_dof;
    if (c.id.rfind("2d.2dof.", 0) == 0) ++two_dof_2d;
    if (c.id.rfind("3d.2dof.c12-", 0) == 0) ++c12;
    if (c.id.rfind("3d.2dof.c13-", 0) == 0) ++c13;
    if (c.id.rfind("3d.3dof.", 0) == 0) ++three;
  }
  CHECK(one_dof == 16);
  CHECK(two_dof_2d == 16);
  CHECK(c12 == 10);
  CHECK(c13 == 12);
  CHECK(three == 2);
  CHECK(reg.size() == 56);
  CHECK(lookup_class("2d.7dof.nope") == nullptr);
  CHECK_THROWS_AS(find_class("2d.7dof.nope"), std::out_of_range);

  std::set<std::string> fams;
  for (const auto& c : reg)
    if (c.id.rfind("2d.2dof.", 0) == 0) fams.insert(c.family);
  CHECK(fams.size() == 4);

  const ClassSpec& mn = find_class("3d.3dof.min");
  CHECK(mn.factorials.size() == 3);
  for (const auto& f : mn.factorials) CHECK(f.kind == FactorialForm::Kind::Plain);
  for (const auto& f : find_class("3d.3dof.max").factorials) CHECK(f.kind == FactorialForm::Kind::GammaDouble);
}

TEST_CASE("gamma arguments stay >= 1") {
  const std::vector<std::vector<double>> omegas = {{1, 1}, {1, 2}, {2, 1}, {1, 2, 3}, {2, 1, 3}, {0.1, 7, 0.3}};
  for (const auto& c : registry())
    for (const auto& w : omegas) {
      if (static_cast<int>(w.size()) != c.dim) continue;
      for (double s : {0.0, 0.5}) {
        const FrequencyConfig cfg(w, std::vector<double>(w.size(), s));
        for (int a = 0; a <= 5; ++a)
          for (int b = 0; b <= 5; ++b)
            for (int d = 0; d <= 5; ++d)
              for (const auto& r : c.rho)
                CHECK_MESSAGE(r.gamma_arg.eval(cfg, {double(a), double(b), double(d)}) >= 1.0, c.id);
      }
    }
}

TEST_CASE("coefficient phase and modulus") {
  const ClassSpec& c = find_class("2d.2dof.gamma1-gamma2.A");
  const FrequencyConfig cfg({1.0, 2.0});
  const std::vector<Complex> z = {std::polar(1.3, 0.4), std::polar(0.7, -1.1)};
  const NVec n = {3, 2, 0};
  const Coefficient a = coefficient(c, cfg, z, n);
  double ph = 0.0, la = 0.0;
  for (size_t v = 0; v < c.vars.size(); ++v) {
    const double e = c.vars[v].exponent.eval(cfg, n);
    ph += e * std::arg(z[v]);
    la += e * std::log(std::abs(z[v]));
  }
  CHECK(a.phase == doctest::Approx(ph));
  CHECK(a.modulus.log_abs == doctest::Approx(la - 0.5 * log_target(c, cfg, n)));

  // z = 0 leaves only the index with zero exponents
  const std::vector<Complex> z0 = {0.0, 0.0};
  CHECK(coefficient(c, cfg, z0, {0, 0, 0}).value() == Complex(1.0 / std::exp(0.5 * log_target(c, cfg, {0, 0, 0}))));
  CHECK(coefficient(c, cfg, z0, {1, 0, 0}).modulus.is_zero());
}

TEST_CASE("kappa domains") {
  const ClassSpec& c = find_class("3d.2dof.c13-gamma13-gamma32");
  const FrequencyConfig cfg({1.0, 2.0, 3.0});
  CHECK_FALSE(c.violated_domain(cfg).has_value());
  CHECK(c.violated_domain(cfg.with_kappa(2, 1, 0.0)).has_value());
  for (const auto& s : registry()) {
    const FrequencyConfig f = s.dim == 2 ? FrequencyConfig({1.0, 2.0}) : FrequencyConfig({1.0, 2.0, 3.0});
    CHECK_FALSE(s.violated_domain(f).has_value());
  }
}
