#include <doctest.h>

#include <cmath>

#include "vcslab/normalization.hpp"

using namespace vcs;

namespace {
Complex at(double modulus_sq, double phase) { return std::polar(std::sqrt(modulus_sq), phase); }

// log of sum x^n / (b)_n
double log_hyp1f1_sum(double b, double x) {
  long double term = 1.0L, sum = 1.0L;
  for (int n = 0; n < 100000 && term >= 1e-21L * sum; ++n) {
    term *= (long double)x / ((long double)b + n);
    sum += term;
  }
  return (double)std::log(sum);
}
}  // namespace

TEST_CASE("plain one-dof generator and norm") {
  const ClassSpec& s = find_class("2d.1dof.plain1.A");
  const FrequencyConfig cfg({2.0, 1.0});
  const TermGenerator zero = term_generator(s, cfg, {0.0}, {0});
  CHECK(zero.eval({0}).value() == 1.0);
  for (unsigned n = 1; n < 5; ++n) CHECK(zero.eval({n}).is_zero());
  CHECK(norm_series(zero).log_norm == 0.0);

  const TermGenerator g = term_generator(s, cfg, {at(2.0, 0.3)}, {0});
  const NormResult r = norm_series(g);
  CHECK(r.ok);
  CHECK(r.log_norm == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(r.tail_bound < 1e-12);
}

TEST_CASE("gamma one-dof term ratios") {
  const ClassSpec& s = find_class("2d.1dof.gamma1.A");
  const FrequencyConfig cfg({1.0, 2.0});
  const unsigned n2 = 1;
  const double gamma1 = 1.0 + cfg.kappa(0, 1) * n2;
  const double zz = 0.7;
  const TermGenerator g = term_generator(s, cfg, {at(zz, -0.2)}, {n2});
  for (double n = 0; n < 30; ++n)
    CHECK(g.log_term({n + 1}) - g.log_term({n}) == doctest::Approx(std::log(zz / 1.0) - std::log(gamma1 + n)));
}

TEST_CASE("independent sums factorize") {
  const ClassSpec& s = find_class("3d.2dof.c12-gamma13-gamma23");
  const FrequencyConfig cfg({1.0, 2.0, 3.0});
  const unsigned n3 = 3;
  const std::vector<Complex> z = {at(0.8, 0.1), at(5.0, 1.2)};
  const TermGenerator g = term_generator(s, cfg, z, {n3});
  for (double a = 0; a < 12; ++a)
    for (double b = 0; b < 12; ++b)
      CHECK(g.log_term({a, b}) == doctest::Approx(g.log_term({a, 0}) + g.log_term({0, b}) - g.log_term({0, 0})));

  // T(0) 1F1(1; g13; w1) 1F1(1; g23; w2)
  const double g13 = 1 + cfg.kappa(0, 2) * n3, g23 = 1 + cfg.kappa(1, 2) * n3;
  const double w1 = 0.8 / 1.0, w2 = 5.0 / 2.0;
  const double t0 = n3 * (cfg.kappa(0, 2) * std::log(w1) + cfg.kappa(1, 2) * std::log(w2)) - std::lgamma(g13) -
                    std::lgamma(g23);
  const double expect = t0 + log_hyp1f1_sum(g13, w1) + log_hyp1f1_sum(g23, w2);
  const auto cf = norm_closed_form(s, cfg, z, {n3});
  REQUIRE(cf.has_value());
  CHECK(std::fabs(std::expm1(cf->log_norm - expect)) < 1e-9);
  CHECK(std::fabs(std::expm1(norm_series(g).log_norm - expect)) < 1e-9);
}

TEST_CASE("gamma one-dof D at z = 0") {
  const ClassSpec& s = find_class("2d.1dof.gamma1.D");
  const TermGenerator g = term_generator(s, FrequencyConfig({1.0, 2.0}), {0.0}, {0});
  CHECK(norm_series(g).log_norm == doctest::Approx(0.0));
}

TEST_CASE("gamma one-dof A reduces to the exponential at gamma1 = 1") {
  const ClassSpec& s = find_class("2d.1dof.gamma1.A");
  const auto cf = norm_closed_form(s, FrequencyConfig({1.0, 2.0}), {at(3.0, 0.0)}, {0});
  REQUIRE(cf.has_value());
  CHECK(cf->log_norm == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("suspected typos are flagged") {
  const std::vector<Complex> z = {at(1.0, 0.0), at(2.0, 0.5)};
  const auto p = norm_closed_form(find_class("2d.2dof.1-1.A"), FrequencyConfig({2.0, 1.0}), z, {1});
  REQUIRE(p.has_value());
  CHECK(p->suspected_typo);
  REQUIRE(p->printed_log_norm.has_value());
  CHECK(std::fabs(*p->printed_log_norm - p->log_norm) > 0.1);

  const VerificationReport r = verify_norm(find_class("3d.3dof.min"), FrequencyConfig({1.0, 2.0, 3.0}), {1});
  CHECK(r.passed());
  CHECK(r.metadata.contains("suspected_typo"));
}

TEST_CASE("verify_norm across the registry sample") {
  for (const char* id : {"2d.1dof.gamma2.B", "2d.2dof.gamma1-gamma2.C", "3d.2dof.c13-gamma1-1", "3d.3dof.max"}) {
    const ClassSpec& s = find_class(id);
    const FrequencyConfig cfg = s.dim == 2 ? FrequencyConfig({1.0, 2.0}) : FrequencyConfig({2.0, 1.0, 3.0});
    for (unsigned f : {0u, 1u, 3u})
      CHECK_MESSAGE(verify_norm(s, cfg, std::vector<unsigned>(s.fixed_towers.size(), f)).passed(), id);
  }
  const ClassSpec& bad = find_class("3d.2dof.c13-gamma13-gamma32");
  CHECK(verify_norm(bad, FrequencyConfig({1.0, 2.0, 3.0}).with_kappa(2, 1, 0.0), {1}).verdict == "undefined");
}

TEST_CASE("gamma terms are dominated by plain factorial terms") {
  const FrequencyConfig cfg({1.0, 2.0});
  const std::vector<Complex> z = {at(4.0, 0.0)};
  const TermGenerator plain = term_generator(find_class("2d.1dof.plain1.A"), cfg, z, {0});
  for (unsigned n2 : {0u, 1u, 3u}) {
    const TermGenerator gam = term_generator(find_class("2d.1dof.gamma1.D"), cfg, z, {n2});
    for (double n = 1; n <= 60; ++n) CHECK(gam.log_term({n}) <= plain.log_term({n}) + 1e-12);
  }
}

TEST_CASE("truncated states") {
  const ClassSpec& s = find_class("2d.1dof.plain1.A");
  const FrequencyConfig cfg({2.0, 1.0});
  const TruncatedState st = state(s, cfg, {at(3.0, 0.7)}, {0}, 40);
  const double lambda = 3.0 / 2.0;
  double mass = 0.0;
  for (unsigned n = 0; n <= 40; ++n) {
    const double p = std::norm(st.coeffs.at({n}));
    CHECK(p == doctest::Approx(std::exp(-lambda + n * std::log(lambda) - std::lgamma(n + 1.0))).epsilon(1e-12));
    mass += p;
  }
  CHECK(std::fabs(1.0 - mass) <= 2 * st.tail_bound + 1e-14);

  const TruncatedState z0 = state(find_class("2d.2dof.gamma1-gamma2.B"), cfg, {0.0, 0.0}, {0}, 5);
  CHECK(std::abs(z0.coeffs.at({0}) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(z0.coeffs.at({1})) == 0.0);

  const TruncatedState two = state(find_class("2d.2dof.gamma1-1.A"), cfg, {at(1.0, 0.2), at(0.5, -0.4)}, {1}, 30);
  double m2 = 0.0;
  for (const auto& [k, v] : two.coeffs) m2 += std::norm(v);
  CHECK(std::fabs(1.0 - m2) <= 2 * two.tail_bound + 1e-14);

  CHECK_THROWS_AS(state(find_class("3d.2dof.c13-gamma13-gamma32"), FrequencyConfig({1.0, 2.0, 3.0}).with_kappa(2, 1, 0.0),
                        {at(1.0, 0.0), at(1.0, 0.0)}, {1}, 5),
                  std::domain_error);
}

TEST_CASE("factor pair: two-dof gamma1-1 A against the one-dof gamma1 A") {
  const FrequencyConfig cfg({1.0, 2.0});
  const ClassSpec& two = find_class("2d.2dof.gamma1-1.A");
  const ClassSpec& one = find_class("2d.1dof.gamma1.A");
  const Complex z1 = std::polar(0.9, 0.3), z2 = std::polar(1.4, -0.8);
  for (double n1 = 0; n1 <= 6; ++n1)
    for (double n2 = 0; n2 <= 6; ++n2) {
      const Complex a2 = coefficient(two, cfg, {z1, z2}, {n1, n2, 0}).value();
      const Complex a1 = coefficient(one, cfg, {z1}, {n1, n2, 0}).value();
      const Complex f = std::pow(z2, n2) / std::sqrt(std::pow(2.0, n2) * std::tgamma(n2 + 1));
      CHECK(std::abs(a2 - f * a1) <= 1e-12 * std::abs(a2));
    }
}
