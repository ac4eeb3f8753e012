#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "steinlab/alphabet.hpp"
#include "steinlab/divergences.hpp"
#include "steinlab/types.hpp"

namespace steinlab {

enum class FamilyKind {
  simple_iid,
  composite_iid,
  arbitrarily_varying,
  almost_iid,
  werner_gamma,
  explicit_levels,
};

// Defect-budget rule for almost-iid families. phi(1) is 0 for every rule so the
// level-1 set is the bare {P}; values are clamped to n.
struct PhiSpec {
  enum class Kind { constant, sqrt_ceil, log2_ceil };
  Kind kind = Kind::constant;
  int value = 0;  // used by constant

  int operator()(int n) const;
};

// A rule producing a finite generator list at every level n. The represented
// hypothesis set is the convex hull of the generators (except werner_gamma,
// which also carries an exact membership predicate).
struct FamilySpec {
  FamilyKind kind = FamilyKind::simple_iid;
  Alphabet alphabet;
  std::vector<Distribution> base;  // simple (singleton), composite, av
  Distribution aiid_p;             // almost_iid reference
  PhiSpec phi;                     // almost_iid defect budget
  double gamma = 2.0;              // werner_gamma
  std::map<int, std::vector<JointDistribution>> levels;  // explicit_levels

  static FamilySpec make_simple_iid(Distribution p);
  static FamilySpec make_composite_iid(std::vector<Distribution> base);
  static FamilySpec make_arbitrarily_varying(std::vector<Distribution> base);
  static FamilySpec make_almost_iid(Distribution p, PhiSpec phi);
  static FamilySpec make_werner(double gamma);
  static FamilySpec make_explicit(Alphabet a,
                                  std::map<int, std::vector<JointDistribution>> levels);

  void validate() const;
};

struct GeneratedSet {
  int n = 0;
  std::vector<JointDistribution> generators;
  // Construction guarantees only: symmetric = the generator SET is closed under
  // position permutations; convex = the generator list's hull IS the set.
  bool symmetric_flag = false;
  bool convex_flag = false;

  Polytope hull() const { return Polytope(generators); }
};

// Materializes the level-n generator list. Caps: |X|^n entries <= 2^24,
// arbitrarily-varying generator count <= 1e5, almost-iid defect width <= 3,
// werner levels n <= 3 (exact vertex enumeration); beyond -> CapacityError.
GeneratedSet realize(const FamilySpec& spec, int n);

// Entrywise test of H_gamma^{tensor n} Q >= -1e-10 with H_gamma rows
// (gamma, 1) and (-1, 1), applied axis by axis. Binary alphabet only.
bool werner_membership(const JointDistribution& Q, double gamma);
// Signed slack: min entry of H_gamma^{tensor n} Q (nonnegative iff member).
double werner_membership_margin(const JointDistribution& Q, double gamma);

// Exact vertex list of {Q >= 0, sum Q = 1, H_gamma^{tensor n} Q >= 0} by
// rational enumeration of tight constraint subsets; n <= 3; cached per
// (gamma, n); vertices sorted lexicographically.
std::vector<JointDistribution> werner_generators(double gamma, int n);

// Applies the symbol-wise depolarizing map with noise delta and reference R to
// every generator. Flags are preserved: the map is affine and permutation
// covariant.
GeneratedSet blur_set(const GeneratedSet& S, double delta, const Distribution& R);

// KL distance from Q to the hull (werner uses the exact predicate instead).
bool member_of_family(const JointDistribution& Q, const FamilySpec& spec,
                      const GeneratedSet& realized, double tol = kTolMembership);

struct AxiomProbeReport {
  std::string axiom;
  bool pass = false;
  // For membership probes: the smallest slack seen (tolerance minus hull
  // distance, or the werner predicate's min entry). For the decay probe: the
  // smallest log-space margin over types, in configured units.
  double worst_margin = 0.0;
  int trials = 0;
  std::vector<std::string> notes;  // counterexamples when a probe fails
};

// axiom is one of "I" (blur closure), "II" (base tensor powers present),
// "III" (permutation closure), "IV-sanov-surrogate" (exact type-class decay,
// composite_iid and arbitrarily_varying only).
AxiomProbeReport axiom_probe(const FamilySpec& spec, const std::string& axiom, int n,
                             int samples, std::uint64_t seed);

// sup over the family's level-n generators of the exact type-class weight
// Q_n(T_{n,V}), returned as a natural log (-inf as a large negative sentinel
// when the weight is 0). composite_iid and arbitrarily_varying only.
double family_sup_type_class_weight_ln(const FamilySpec& spec, int n,
                                       const TypeVector& V);

// Decay exponent matching the Sanov surrogate: min over the base (composite)
// or its convex hull (arbitrarily varying) of kl(V || .), in nats.
double family_type_decay_exponent_nats(const FamilySpec& spec, const TypeVector& V);

}  // namespace steinlab
