#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vcslab/convergence.hpp"

using namespace vcs;

namespace {
const std::vector<Complex> kZ = {std::polar(1.2, 0.3), std::polar(0.8, -0.5)};

TermGenerator gen_for(const char* id, const FrequencyConfig& cfg, unsigned fixed = 1) {
  return term_generator(find_class(id), cfg, kZ, {fixed});
}
}  // namespace

TEST_CASE("double exponential series") {
  const TermGenerator g = double_exponential({2.0, 3.0});
  for (const auto& v : row_column_check(g)) CHECK(v.status == Status::Convergent);
  CHECK(ratio_test_double(g).status == Status::Convergent);
  CHECK(generator_verdict(g).status == Status::Convergent);
  const AxisLimit a = axis_limit(g, {0, 0}, 0, 64);
  CHECK(a.limit == 0.0);
  CHECK(a.slope > 0.9);
}

TEST_CASE("geometric series") {
  CHECK(ratio_test_double(geometric_generator({2.0, 2.0})).status == Status::Divergent);
  CHECK(ratio_test_double(geometric_generator({0.5, 0.5})).status == Status::Convergent);
  CHECK(generator_verdict(geometric_generator({0.5, 0.5})).status == Status::Convergent);
  for (double r : {1.0, 1.01, 2.0}) {
    const TermGenerator g = geometric_generator({r, r});
    CHECK(divergence_flag(g));
    CHECK(generator_verdict(g).status != Status::Convergent);
  }
  CHECK_FALSE(divergence_flag(geometric_generator({0.5, 0.5})));
}

TEST_CASE("comparison against itself") {
  const TermGenerator good = double_exponential({1.5, 0.5});
  CHECK(comparison_check(good, good).status == Status::Convergent);
  CHECK(ratio_comparison_check(good, good).status == Status::Convergent);
  const TermGenerator bad = geometric_generator({2.0, 1.5});
  CHECK(comparison_check(bad, bad).status != Status::Convergent);
}

TEST_CASE("3D independent sums converge everywhere probed") {
  for (const auto& w : std::vector<std::vector<double>>{{1, 1, 1}, {1, 2, 3}, {3, 0.5, 0.01}, {0.2, 9, 4}}) {
    const FrequencyConfig cfg(w);
    const TermGenerator g = gen_for("3d.2dof.c12-gamma13-gamma23", cfg);
    CHECK(comparison_check(g, comparison_reference(g)).status == Status::Convergent);
    CHECK(class_verdict(find_class("3d.2dof.c12-gamma13-gamma23"), cfg, {1}).status == Status::Convergent);
  }
}

TEST_CASE("one-sided kappa32 domain") {
  const ClassSpec& s = find_class("3d.2dof.c13-gamma13-gamma32");
  const FrequencyConfig base({1.0, 2.0, 3.0});
  CHECK(class_verdict(s, base.with_kappa(2, 1, 0.0), {1}).status == Status::Divergent);
  for (double k : {1e-3, 1e-2, 0.1, 1.0, 10.0})
    CHECK_MESSAGE(class_verdict(s, base.with_kappa(2, 1, k), {1}).status == Status::Convergent, "kappa32 = ", k);

  // n2 axis: ratio -> 1 with constant terms at kappa32 = 0, -> 0 at kappa32 = 0.5
  const TermGenerator g0 = term_generator(s, base.with_kappa(2, 1, 0.0), kZ, {1});
  const AxisLimit flat = axis_limit(g0, {0, 0}, 1, 64);
  CHECK(flat.limit == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(divergence_flag(g0));
  const TermGenerator g5 = term_generator(s, base.with_kappa(2, 1, 0.5), kZ, {1});
  const AxisLimit col = axis_limit(g5, {0, 0}, 1, 64);
  CHECK(col.status == Status::Convergent);
  CHECK(col.limit == 0.0);
}

TEST_CASE("kappa12 deformed class converges on the figure set") {
  const ClassSpec& s = find_class("3d.2dof.c13-gamma1-1");
  for (double k : {1.0, 0.5, 0.1, 1e-6})
    CHECK(class_verdict(s, FrequencyConfig({1.0, 2.0, 3.0}).with_kappa(0, 1, k), {1}).status == Status::Convergent);
}

TEST_CASE("gamma ratio surfaces") {
  for (const auto& p : gamma_ratio_surface(0.0, 1.0, 50, 100, 50, 100)) CHECK(p.difference == 0.0);

  auto at = [](const std::vector<SurfacePoint>& pts, unsigned m, unsigned n) {
    for (const auto& p : pts)
      if (p.m == m && p.n == n) return p.difference;
    FAIL("missing point");
    return 0.0;
  };
  for (double k : {1.0, 0.5, 0.1, 1e-6}) {
    const auto pts = gamma_ratio_surface(k, 1.0, 50, 100, 50, 100);
    CHECK(pts.size() == 51u * 51u);
    CHECK(std::fabs(at(pts, 100, 100)) < std::fabs(at(pts, 50, 50)));
    for (const auto& p : pts) {
      const double lo = 1.0 + k * p.n + p.m, hi = 1.0 + k * (p.n + 1) + p.m;
      const double ref = std::exp(std::lgamma(lo) - std::lgamma(hi)) - std::pow(hi, -k);
      CHECK(std::fabs(p.difference - ref) <= 1e-11 * std::pow(hi, -k));
    }
  }
  CHECK_THROWS_AS(gamma_ratio_surface(1.0, 1.0, 10, 5, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gamma_ratio_surface(-1.0, 1.0, 0, 1, 0, 1), std::invalid_argument);
}

TEST_CASE("surface maximum shrinks as kappa decreases") {
  double prev_max = INFINITY;
  for (double k : {1.0, 0.5, 0.1, 1e-6}) {
    double mx = 0.0;
    for (const auto& p : gamma_ratio_surface(k, 1.0, 50, 100, 50, 100)) mx = std::max(mx, std::fabs(p.difference));
    CHECK_MESSAGE(mx < prev_max, "kappa = ", k);
    prev_max = mx;
  }
}

TEST_CASE("surface CSV layout") {
  const std::string csv = surface_csv(gamma_ratio_surface(0.5, 1.0, 1, 2, 3, 3));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "m,n,kappa,difference");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find('\r') == std::string::npos);
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == 2);
  CHECK(csv.back() == '\n');
}
