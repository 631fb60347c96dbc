#include <doctest.h>

#include <cmath>
#include <regex>
#include <set>
#include <sstream>

#include "vcslab/moments.hpp"
#include "vcslab/taxonomy.hpp"

using namespace vcs;

namespace {
const FactorRelation* find_relation(const std::vector<FactorRelation>& rels, const std::string& a,
                                    const std::string& b) {
  for (const auto& r : rels)
    if (r.sub_a == a && r.sub_b == b) return &r;
  return nullptr;
}

// statement-level check of the subset of the DOT grammar the exporter uses
bool dot_parses(const std::string& dot) {
  std::istringstream in(dot);
  std::string line;
  if (!std::getline(in, line) || !std::regex_match(line, std::regex(R"(\s*(strict\s+)?digraph\s+[A-Za-z_][A-Za-z0-9_]*\s*\{\s*)")))
    return false;
  const std::string id = R"(("([^"\\]|\\.)*"|[A-Za-z_][A-Za-z0-9_.]*))";
  const std::string attr = id + R"(\s*=\s*)" + id;
  const std::string attrs = R"((\s*\[\s*)" + attr + R"((\s*,\s*)" + attr + R"()*\s*\])?)";
  const std::regex node(R"(\s*)" + id + attrs + R"(\s*;\s*)");
  const std::regex edge(R"(\s*)" + id + R"(\s*->\s*)" + id + attrs + R"(\s*;\s*)");
  const std::regex graph_attr(R"(\s*(graph|node|edge)\s*\[\s*)" + attr + R"((\s*,\s*)" + attr + R"()*\s*\]\s*;\s*)");
  const std::regex assign(R"(\s*)" + attr + R"(\s*;\s*)");
  bool closed = false;
  while (std::getline(in, line)) {
    if (closed) {
      if (!std::regex_match(line, std::regex(R"(\s*)"))) return false;
      continue;
    }
    if (std::regex_match(line, std::regex(R"(\s*\}\s*)"))) {
      closed = true;
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!std::regex_match(line, edge) && !std::regex_match(line, node) && !std::regex_match(line, graph_attr) &&
        !std::regex_match(line, assign))
      return false;
  }
  return closed;
}
}  // namespace

TEST_CASE("class counts") {
  const ClassCount c2 = class_counts(3, 2);
  CHECK(c2.count == 22);
  CHECK(c2.details["case12"]["classes"].get<int>() == 10);
  CHECK(c2.details["case13"]["classes"].get<int>() == 12);
  CHECK(class_counts(3, 3).count == 40);
  CHECK_THROWS_AS(class_counts(2, 2), std::invalid_argument);
}

TEST_CASE("two-dof sub-class enumeration") {
  for (const char* fam : {"2d.2dof.1-1", "2d.2dof.gamma1-1", "2d.2dof.1-gamma2", "2d.2dof.gamma1-gamma2"}) {
    const auto subs = enumerate_subclasses(fam);
    CHECK(subs.size() == 16);
    int relevant = 0;
    std::set<std::array<double, 4>> seen;
    for (const auto& e : subs) {
      CHECK(seen.insert(e.quadruple).second);
      if (e.relevant) {
        ++relevant;
        CHECK(lookup_class(e.id) != nullptr);
      } else {
        CHECK(lookup_class(e.factor_of) != nullptr);
        CHECK_FALSE(e.factor.empty());
      }
    }
    CHECK_MESSAGE(relevant == 4, fam);
  }

  auto by_quad = [](const std::vector<SubclassEntry>& v, std::array<double, 4> q) {
    for (const auto& e : v)
      if (e.quadruple == q) return e;
    FAIL("quadruple missing");
    return SubclassEntry{};
  };
  const auto first = enumerate_subclasses("2d.2dof.1-1");
  for (auto q : {std::array<double, 4>{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 0, 1, 1}}) CHECK(by_quad(first, q).relevant);
  for (auto q : {std::array<double, 4>{1, 0, 0, 0}, {0, 1, 0, 0}}) CHECK_FALSE(by_quad(first, q).relevant);
  CHECK(enumerate_subclasses("first").size() == 16);
  CHECK_THROWS_AS(enumerate_subclasses("2d.2dof.1-1", false), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_subclasses("no-such-family"), std::invalid_argument);

  const auto one = enumerate_subclasses("2d.1dof.gamma1");
  CHECK(one.size() == 4);
  CHECK(std::count_if(one.begin(), one.end(), [](const SubclassEntry& e) { return e.relevant; }) == 1);
}

TEST_CASE("factor relations") {
  const auto rels = declared_factor_relations();
  CHECK(rels.size() == 62);
  for (const auto& r : rels) CHECK_MESSAGE(verify_factor(r).passed(), r.str());

  const FrequencyConfig cfg({1.5, 2.0});
  const double k = cfg.kappa(0, 1);
  const std::vector<Complex> z = {std::polar(1.1, 0.4), std::polar(0.6, 1.0)};
  const FactorRelation* b = find_relation(rels, "2d.1dof.plain1.A", "2d.1dof.plain1.B");
  const FactorRelation* c = find_relation(rels, "2d.1dof.plain1.A", "2d.1dof.plain1.C");
  const FactorRelation* two = find_relation(rels, "2d.1dof.gamma1.A", "2d.2dof.gamma1-1.A");
  REQUIRE(b);
  REQUIRE(c);
  REQUIRE(two);
  for (double n1 = 0; n1 < 4; ++n1)
    for (double n2 = 0; n2 < 4; ++n2) {
      const NVec n = {n1, n2, 0};
      CHECK(std::abs(b->eval(cfg, z, n) - std::pow(1.5, -k * n2 / 2)) < 1e-13);
      CHECK(std::abs(c->eval(cfg, z, n) - std::pow(z[0], k * n2)) < 1e-13);
      CHECK(std::abs(two->eval(cfg, z, n) - std::pow(z[1], n2) / std::sqrt(std::pow(2.0, n2) * std::tgamma(n2 + 1))) <
            1e-13);
    }
}

TEST_CASE("2D one-dof deformation graph") {
  const DeformationGraph g = deformation_graph(2, 1);
  bool found = false;
  for (const auto& e : g.edges)
    if (e.from == "2d.1dof.gamma1" && e.to == "2d.1dof.plain1" && !e.forbidden && e.parameter == std::make_pair(0, 1))
      found = true;
  CHECK(found);
  CHECK(g.acyclic());
  CHECK(dot_parses(g.dot()));
}

TEST_CASE("3D two-dof deformation graph") {
  const DeformationGraph g = deformation_graph(3, 2);
  CHECK(g.nodes.size() == 22);
  CHECK(g.acyclic());
  const std::string dot = g.dot();
  CHECK(dot_parses(dot));
  CHECK(dot.find("status=forbidden") != std::string::npos);
  CHECK(dot.find("status=defined") != std::string::npos);

  bool forbidden32 = false;
  int c12_edges = 0, c13_edges = 0;
  for (const auto& e : g.edges) {
    const bool a12 = e.from.find(".c12-") != std::string::npos, b12 = e.to.find(".c12-") != std::string::npos;
    CHECK_MESSAGE(a12 == b12, e.from, " -> ", e.to);  // cases 12 and 13 stay apart
    (a12 ? c12_edges : c13_edges)++;
    if (e.from == "3d.2dof.c13-gamma13-gamma32" && e.parameter == std::make_pair(2, 1)) {
      forbidden32 = e.forbidden;
      CHECK(e.reason.rfind("non-normalizable", 0) == 0);
      CHECK(e.confirmation == "divergent");
    }
    if (!e.forbidden) {
      const ClassSpec d = remove_kappa(find_class(e.ancestor_id), e.parameter.first, e.parameter.second);
      CHECK_FALSE(d.uses_kappa(e.parameter.first, e.parameter.second));
      if (e.to_registered) {
        const ClassSpec* m = match_up_to_symmetry(d);
        REQUIRE(m);
        CHECK(m->id == e.to);
      }
    }
  }
  CHECK(forbidden32);
  CHECK(c12_edges > 0);
  CHECK(c13_edges > 0);

  const Json j = g.to_json();
  CHECK(j["edges"].size() == g.edges.size());
}

TEST_CASE("limit continuity on defined edges") {
  for (auto [dim, dof] : {std::pair{2, 1}, {2, 2}}) {
    for (const auto& e : deformation_graph(dim, dof).edges) {
      const VerificationReport l = limit_continuity(e);
      const VerificationReport d = density_continuity(e);
      if (e.forbidden) {
        CHECK(l.verdict == "undefined");
        continue;
      }
      CHECK_MESSAGE(l.passed(), e.from, " -> ", e.to);
      CHECK_MESSAGE(d.passed(), e.from, " -> ", e.to);
    }
  }
}

TEST_CASE("symmetry closure of case 12") {
  for (const auto& s : registry()) {
    if (s.family != "3d.2dof.c12") continue;
    const ClassSpec p = permute_towers(s, {1, 0, 2});
    const ClassSpec* m = match_up_to_symmetry(p);
    REQUIRE(m);
    CHECK(m->family == "3d.2dof.c12");
    CHECK(permute_towers(p, {1, 0, 2}).same_structure(s));
  }
}

TEST_CASE("shift extension") {
  const ClassSpec& s = find_class("2d.1dof.gamma1.A");
  const FrequencyConfig cfg({1.0, 2.0});
  const ClassSpec z = shift_extension(s, {0.0, 0.0});
  for (double n1 = 0; n1 <= 10; ++n1)
    for (double n2 : {0.0, 1.0, 3.0}) CHECK(log_target(z, cfg, {n1, n2, 0}) == log_target(s, cfg, {n1, n2, 0}));

  const ClassSpec h = shift_extension(s, {0.5, 0.5});
  const double k = cfg.kappa(0, 1);
  for (double n2 : {0.0, 1.0, 3.0}) CHECK(h.rho[0].gamma_arg.eval(cfg, {0, n2, 0}) == doctest::Approx(1.5 + k * (n2 + 0.5)));

  const ClassSpec p = shift_extension(find_class("2d.1dof.plain1.A"), {0.5, 0.5});
  CHECK(std::exp(log_target(p, FrequencyConfig({1.0, 1.0}), {2, 0, 0})) == doctest::Approx(3.75).epsilon(1e-13));
  CHECK_THROWS_AS(shift_extension(s, {-0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("Landau map") {
  const LandauFrequencies a = landau_map(3.0, 4.0);
  CHECK(a.omega_plus == doctest::Approx(8.0));
  CHECK(a.omega_minus == doctest::Approx(2.0));
  CHECK(a.config.has_value());
  const LandauFrequencies iso = landau_map(0.0, 2.5);
  CHECK(iso.omega_plus == doctest::Approx(2.5));
  CHECK(iso.omega_minus == doctest::Approx(2.5));
  const LandauFrequencies free = landau_map(1.5, 0.0);
  CHECK(free.omega_plus == doctest::Approx(3.0));
  CHECK(free.omega_minus == 0.0);
  CHECK(free.degenerate);
  CHECK_FALSE(free.config.has_value());
  CHECK_THROWS_AS(landau_map(0.0, 0.0), std::invalid_argument);
}
