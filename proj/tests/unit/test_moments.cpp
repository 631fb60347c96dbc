#include <doctest.h>

#include <cmath>

#include "vcslab/moments.hpp"
#include "vcslab/quadrature.hpp"

using namespace vcs;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

std::array<double, 8> tuple8(const ClassSpec& s) {
  const auto& r = s.tuple.rows;
  return {r[0][0], r[0][1], r[0][2], r[0][3], r[1][0], r[1][1], r[1][2], r[1][3]};
}

TargetForm form_of(const ClassSpec& s) {
  if (s.family == "2d.2dof.1-1") return TargetForm::PlainPlain;
  if (s.family == "2d.2dof.gamma1-1") return TargetForm::GammaPlain;
  if (s.family == "2d.2dof.1-gamma2") return TargetForm::PlainGamma;
  return TargetForm::GammaGamma;
}
}  // namespace

TEST_CASE("stretched integrals agree between the two routes") {
  for (double x : {0.3, 1.0, 4.5, 21.0})
    for (double a : {0.5, 1.0, 1.7})
      for (double c : {0.5, 1.0, 3.0}) {
        const double l = quad::log_stretched_laguerre(x, a, c);
        const double s = quad::log_stretched_simpson(x, a, c);
        // closed form: c^{x/a} Gamma(x/a) / a
        const double exact = (x / a) * std::log(c) + std::lgamma(x / a) - std::log(a);
        CHECK(std::fabs(l - exact) < 1e-10 * std::max(1.0, std::fabs(exact)));
        CHECK(std::fabs(s - exact) < 1e-10 * std::max(1.0, std::fabs(exact)));
      }
}

TEST_CASE("plain one-dof density") {
  const ClassSpec& s = find_class("2d.1dof.plain1.A");
  for (double w : {0.5, 1.0, 3.0}) {
    const FrequencyConfig cfg({w, 1.0});
    const MeasureDensity d = density_for(s, cfg, {0});
    for (double u : {0.0, 0.1, 1.0, 4.0, 30.0}) CHECK(d.log_value({u}) == doctest::Approx(-std::log(w) - u / w));
  }
  const MeasureDensity d = density_for(s, FrequencyConfig({1.0, 1.0}), {0});
  CHECK(rel(moment_integral(d, {0}).value.value(), 1.0) < 1e-10);
  CHECK(rel(moment_integral(d, {3}).value.value(), 6.0) < 1e-10);
}

TEST_CASE("gamma one-dof moment") {
  // kappa12 = 0.5, n2 = 3: gamma1 = 2.5, target Gamma(4.5) at n1 = 2
  const ClassSpec& s = find_class("2d.1dof.gamma1.A");
  const FrequencyConfig cfg({1.0, 0.5});
  const MeasureDensity d = density_for(s, cfg, {3});
  const MomentEval m = moment_integral(d, {2});
  CHECK(m.ok);
  CHECK(rel(m.value.value(), std::tgamma(4.5)) < 1e-10);
}

TEST_CASE("verify_moments passes on sample classes") {
  CHECK(verify_moments(find_class("2d.1dof.plain1.A"), FrequencyConfig({1.0, 2.0}), {0}, 20).passed());
  const ClassSpec& g = find_class("2d.2dof.gamma1-gamma2.A");
  for (unsigned n2 : {0u, 1u, 3u}) {
    const VerificationReport r = verify_moments(g, FrequencyConfig({1.0, 2.0}), {n2}, 15);
    CHECK(r.passed());
    CHECK(r.max_residual() <= 1e-8);
  }
  CHECK(verify_moments(find_class("3d.2dof.c13-gamma1-1"), FrequencyConfig({1.0, 2.0, 3.0}), {1}, 12).passed());
}

TEST_CASE("tampered density fails and drifts with n") {
  const ClassSpec& s = find_class("2d.1dof.plain1.A");
  const FrequencyConfig cfg({1.0, 2.0});
  const MeasureDensity wrong = density_for(s, FrequencyConfig({1.01, 2.02}), {0});
  const VerificationReport r = verify_moments(s, cfg, {0}, 20, {}, &wrong);
  CHECK(r.verdict == "fail");
  for (size_t k = 2; k < r.cases.size(); ++k) CHECK(r.cases[k].residual > r.cases[k - 1].residual);
  // (1.01)^n - 1
  CHECK(r.cases[10].residual == doctest::Approx(std::pow(1.01, 10) - 1.0).epsilon(1e-6));
}

TEST_CASE("generalized solver matches the catalog") {
  const FrequencyConfig cfg({1.0, 2.0});
  int seen = 0;
  for (const auto& s : registry()) {
    if (s.id.rfind("2d.2dof.", 0) != 0) continue;
    ++seen;
    for (unsigned n2 : {0u, 1u, 3u}) {
      const MeasureDensity a = solve_generalized(form_of(s), tuple8(s), cfg, n2);
      const MeasureDensity b = density_for(s, cfg, {n2});
      CHECK_MESSAGE(density_distance(a, b) <= 1e-12, s.id);
    }
  }
  CHECK(seen == 16);
  CHECK_THROWS_AS(solve_generalized(TargetForm::PlainPlain, {0, 0, 1, 0, 1, 0, 1, 0}, cfg, 0), std::invalid_argument);
}

TEST_CASE("plain two-dof tuple gives a product density") {
  const FrequencyConfig cfg({1.5, 2.0});
  const MeasureDensity d = solve_generalized(TargetForm::PlainPlain, {1, 0, 1, 0, 1, 0, 1, 0}, cfg, 1);
  for (double u1 : {0.1, 1.0, 5.0})
    for (double u2 : {0.2, 2.0, 7.0}) {
      const double f = -std::log(1.5) - u1 / 1.5 - std::log(2.0) - u2 / 2.0;
      CHECK(d.log_value({u1, u2}) == doctest::Approx(f));
    }
}

TEST_CASE("a second density reproduces the same moments") {
  const ClassSpec& g = find_class("2d.2dof.gamma1-1.A");
  const FrequencyConfig cfg({1.0, 2.0});
  const MeasureDensity d0 = density_for(g, cfg, {1});
  const MeasureDensity d1 = solve_density(g, cfg, {1}, {{1, std::log(4.0)}});
  CHECK(density_distance(d0, d1) > 0.1);
  CHECK(verify_moments(g, cfg, {1}, 15, {}, &d0).passed());
  CHECK(verify_moments(g, cfg, {1}, 15, {}, &d1).passed());
}

TEST_CASE("shifted spectra") {
  const ClassSpec& s = find_class("2d.1dof.plain1.A");
  const FrequencyConfig cfg = FrequencyConfig({1.0, 1.0}).with_shifts({0.5, 0.5});
  CHECK(rel(std::exp(log_target(s, cfg, {2, 0, 0})), 1.5 * 2.5) < 1e-13);
  CHECK(verify_moments(s, cfg, {0}, 20).passed());
  const FrequencyConfig zero = FrequencyConfig({1.0, 2.0}).with_shifts({0.0, 0.0});
  for (double n = 0; n <= 10; ++n)
    CHECK(log_target(s, zero, {n, 0, 0}) == log_target(s, FrequencyConfig({1.0, 2.0}), {n, 0, 0}));
}

TEST_CASE("index window") {
  const auto w = index_window(2, 3);
  CHECK(w.size() == 16);
  CHECK(w.front() == std::vector<unsigned>{0, 0});
  CHECK(w.back() == std::vector<unsigned>{3, 3});
}
