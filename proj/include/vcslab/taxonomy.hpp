#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcslab/core_types.hpp"
#include "vcslab/report.hpp"

namespace vcs {

// ---------------------------------------------------------------- factor relations

// z_t^{e}, omega_t^{e} or Gamma(e)^{coef}
struct FactorTerm {
  enum class Kind { ZPower, OmegaPower, GammaPower };
  Kind kind = Kind::ZPower;
  int tower = 0;
  Affine exponent;
  double coef = 1.0;
};

// a_b(n) = factor(n) * a_a(n) for unnormalized coefficients
struct FactorRelation {
  std::string sub_a, sub_b;
  ClassSpec spec_a, spec_b;
  std::vector<FactorTerm> factor;
  std::string str() const;
  // z indexed by tower
  Complex eval(const FrequencyConfig& cfg, const std::vector<Complex>& z_tower, const NVec& n) const;
};

VerificationReport verify_factor(const FactorRelation& rel);

// spec for the two-dof family with quadruple (beta1, beta1', beta2, beta2') and alphas pinned to 1
ClassSpec two_dof_subclass(const std::string& family, const std::array<double, 4>& quadruple);

// every relation the taxonomy declares (one-dof B/C/D against A, the twelve
// factor quadruples of each two-dof family, two-dof A against one-dof A)
std::vector<FactorRelation> declared_factor_relations();

// ---------------------------------------------------------------- sub-class enumeration

struct SubclassEntry {
  std::array<double, 4> quadruple{};  // (beta1, beta1', beta2, beta2'); one-dof uses the first two
  std::string id;
  bool relevant = false;
  std::string factor_of;  // registered id of the base when not relevant
  std::string factor;     // description of the factor
};

// family: "2d.2dof.1-1", "2d.2dof.gamma1-1", "2d.2dof.1-gamma2", "2d.2dof.gamma1-gamma2"
// (aliases first, second, third, fourth) or a one-dof family such as "2d.1dof.gamma1".
std::vector<SubclassEntry> enumerate_subclasses(const std::string& family, bool keep_alpha_fixed = true);

// ---------------------------------------------------------------- deformation graph

struct DeformationEdge {
  std::string from, to;
  std::string ancestor_id;  // registered spec the limit is taken on
  std::pair<int, int> parameter;  // kappa_{ij} -> 0
  bool forbidden = false;
  std::string reason;
  bool to_registered = false;
  // convergence verdict of the ancestor at kappa_{ij} = 0, when that point is evaluable
  std::string confirmation;
};

struct DeformationGraph {
  int dim = 2, dof = 1;
  std::vector<std::string> nodes;
  std::vector<DeformationEdge> edges;
  std::string dot() const;
  Json to_json() const;
  bool acyclic() const;
};

DeformationGraph deformation_graph(int dim, int dof);

// ancestor with every kappa_{ij} term removed (alpha and plain denominators untouched)
ClassSpec remove_kappa(const ClassSpec& spec, int i, int j);
// tower relabelling, e.g. {1,0,2} for (1<->2)
ClassSpec permute_towers(const ClassSpec& spec, const std::vector<int>& perm);
// registered class with the same structure at zero shift, allowing (1<->2) in 3D
const ClassSpec* match_up_to_symmetry(const ClassSpec& spec);

// max relative coefficient distance between the ancestor at kappa_{ij} = eps and the descendant
VerificationReport limit_continuity(const DeformationEdge& edge, double eps = 1e-6, double tol = 1e-4);

// max |chi_ancestor - chi_descendant| on u_v = r_v^2 in [1e-3, 100] omega_v, ancestor at kappa_{ij} = eps
VerificationReport density_continuity(const DeformationEdge& edge, double eps = 1e-8, double tol = 1e-6);

// ---------------------------------------------------------------- counting and maps

struct ClassCount {
  int count = 0;
  int generated = 0;
  Json details = Json::object();
};
ClassCount class_counts(int dim, int dof);

// shifts baked into the spec: rho_i = omega^n (1+alpha_i)_n and shifted gamma arguments
ClassSpec shift_extension(const ClassSpec& spec, const std::vector<double>& alphas);

struct LandauFrequencies {
  double omega_plus = 0.0, omega_minus = 0.0;
  std::vector<double> shifts{0.5, 0.5};
  bool degenerate = false;  // omega_minus == 0: infinitely degenerate spectrum
  std::optional<FrequencyConfig> config;
};
LandauFrequencies landau_map(double cyclotron, double potential);

}  // namespace vcs
