#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcslab/log_value.hpp"

namespace vcs {

// Towers are 0-based internally; ids and labels print them 1-based.
using NVec = std::array<double, 3>;
using Complex = std::complex<double>;

class FrequencyConfig {
 public:
  FrequencyConfig() = default;
  explicit FrequencyConfig(std::vector<double> omegas, std::vector<double> shifts = {});

  int dim() const { return static_cast<int>(omegas_.size()); }
  double omega(int i) const;
  double alpha(int i) const;
  double kappa(int i, int j) const;
  const std::vector<double>& omegas() const { return omegas_; }
  const std::vector<double>& shifts() const { return shifts_; }
  bool has_shifts() const;

  // Returns a copy where kappa_{ij} is pinned to v instead of omega_j/omega_i.
  // Used to probe deformation limits (v may be 0).
  FrequencyConfig with_kappa(int i, int j, double v) const;
  FrequencyConfig with_shifts(std::vector<double> shifts) const;
  const std::map<std::pair<int, int>, double>& kappa_overrides() const { return overrides_; }

 private:
  std::vector<double> omegas_;
  std::vector<double> shifts_;
  std::map<std::pair<int, int>, double> overrides_;
};

double kappa(const FrequencyConfig& cfg, int i, int j);

// One term c * [kappa_{ki kj}] * x where x is 1, n_t or alpha_t.
struct AffineTerm {
  enum class Var { One, N, Alpha };
  double c = 1.0;
  int ki = -1, kj = -1;  // no kappa factor when ki < 0
  Var var = Var::One;
  int tower = -1;
};

class Affine {
 public:
  Affine() = default;
  static Affine constant(double c);
  static Affine n(int t, double c = 1.0);
  static Affine alpha(int t, double c = 1.0);
  static Affine kappa_n(int i, int j, int t, double c = 1.0);
  static Affine kappa_alpha(int i, int j, int t, double c = 1.0);
  static Affine from_term(const AffineTerm& t);

  Affine& operator+=(const Affine& o);
  Affine operator+(const Affine& o) const;

  double eval(const FrequencyConfig& cfg, const NVec& n) const;
  // d/dn_t
  double dn(const FrequencyConfig& cfg, int t) const;
  bool depends_on_alpha() const;
  std::vector<std::pair<int, int>> kappas() const;
  Affine without_kappa(int i, int j) const;
  // replace alpha_t by numeric constants
  Affine bake_alpha(const std::vector<double>& alphas) const;
  // all alpha terms dropped
  Affine strip_alpha() const;
  const std::vector<AffineTerm>& terms() const { return terms_; }
  std::string str() const;

  bool operator==(const Affine& o) const;

 private:
  std::vector<AffineTerm> terms_;
};

struct FactorialForm {
  enum class Kind { Plain, GammaSingle, GammaDouble };
  int tower = 0;
  Kind kind = Kind::Plain;
  int j = -1, k = -1;
  std::string str() const;
  bool operator==(const FactorialForm& o) const = default;
};

// Per z-variable (alpha, beta, alpha', beta'): z exponent alpha n_i + beta kappa n_other,
// omega exponent alpha' n_i + beta' kappa n_other.
struct ExponentTuple {
  std::vector<std::array<double, 4>> rows;
  std::string str() const;
  bool operator==(const ExponentTuple& o) const = default;
};

struct ZVar {
  int tower;
  Affine exponent;
};

// One factor omega_t^{P} Gamma(G) [/ Gamma(den)] of the generalized factorial.
struct RhoFactor {
  int tower;
  Affine omega_exp;
  Affine gamma_arg;
  std::optional<Affine> gamma_den;
};

// kappa-domain: summed index s must keep some dependence, i.e. one of the listed
// kappas is positive. Violations are predicted non-normalizable points.
struct DomainCondition {
  int summed_tower;
  std::vector<std::pair<int, int>> any_positive;
  std::string str() const;
};

struct ClassSpec {
  std::string id;
  std::string label;
  std::string family;
  int dim = 2;
  int dof = 1;
  std::vector<int> summed;
  std::vector<int> fixed_towers;
  std::vector<FactorialForm> factorials;
  ExponentTuple tuple;
  std::vector<ZVar> vars;
  std::vector<RhoFactor> rho;
  std::vector<DomainCondition> domain;

  void validate() const;
  NVec make_n(const std::vector<double>& summed_vals, const std::vector<unsigned>& fixed_vals) const;
  int var_index_of_tower(int t) const;
  int rho_index_of_tower(int t) const;
  std::vector<std::pair<int, int>> kappas() const;
  bool uses_kappa(int i, int j) const;
  // first violated domain condition, if any
  std::optional<DomainCondition> violated_domain(const FrequencyConfig& cfg) const;
  // same structure, ignoring id/label metadata
  bool same_structure(const ClassSpec& o) const;
  // rebuild the kappa-domain conditions from the Gamma arguments
  void recompute_domain();
};

// log of prod omega^P Gamma(G) / prod Gamma(den); the moment target.
double log_target(const ClassSpec& spec, const FrequencyConfig& cfg, const NVec& n);

// Unnormalized coefficient a_n(z): modulus (log) and phase.
struct Coefficient {
  LogValue modulus;
  double phase = 0.0;
  Complex value() const;
};
Coefficient coefficient(const ClassSpec& spec, const FrequencyConfig& cfg,
                        const std::vector<Complex>& z, const NVec& n);

// Canonical registry. Entries are immutable and id-unique.
const std::vector<ClassSpec>& registry();
const ClassSpec& find_class(const std::string& id);
const ClassSpec* lookup_class(const std::string& id);
// registered class with the same structure, if any
const ClassSpec* match_registered(const ClassSpec& spec);

// Builders shared by the registry and the taxonomy.
ClassSpec make_2d_one_dof(int summed_tower, bool gamma, double beta, double beta_p);
enum class Rho2D { Plain, Gamma };
ClassSpec make_2d_two_dof(Rho2D r1, Rho2D r2, const std::array<double, 8>& tuple);
// 3D, towers coupled via each rho factor as sets of other towers.
struct RhoChoice {
  int tower;
  std::vector<int> coupled;  // empty = plain factorial
};
ClassSpec make_3d(const std::vector<int>& var_towers, const std::vector<int>& summed,
                  const std::vector<int>& fixed, const std::vector<RhoChoice>& rho);

std::string tower_name(int t);  // 0 -> "1"
std::string kappa_name(int i, int j);  // (0,1) -> "kappa12"

}  // namespace vcs
