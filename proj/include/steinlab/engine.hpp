#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steinlab/alphabet.hpp"
#include "steinlab/divergences.hpp"
#include "steinlab/families.hpp"
#include "steinlab/types.hpp"

namespace steinlab {

// Minimal type-II error for testing hull(R) against hull(S) at type-I level
// eps, as the LP: minimize t s.t. <A,Q_j> <= t for all S generators,
// <A,P_i> >= 1-eps for all R generators, 0 <= A <= 1. value = t*, certificate
// = A (lexicographically smallest optimum when the program is small enough),
// residual = worst constraint violation of the returned test.
DivergenceReport beta_eps(const GeneratedSet& R, const GeneratedSet& S, double eps);

// -log beta_eps in configured units; kInfValue when beta underflows to zero.
double d_hyp_sets(const GeneratedSet& R, const GeneratedSet& S, double eps);

struct RatePoint {
  int n = 0;
  double rate = 0.0;          // (1/n) * d_hyp_sets at this level
  double converse_cap = 0.0;  // (converse_regularized + 1/n) / (1 - eps)
};

struct SteinSequence {
  double eps = 0.0;
  std::vector<RatePoint> rates;
  bool has_target = false;
  double single_letter_target = 0.0;
  double converse_bound = 0.0;  // converse_cap at the largest computed level
  bool truncated = false;       // a capacity limit stopped the sweep early
};

// Per-level operational rates for the family pair plus, where a single-letter
// formula exists (iid-like or varying null vs iid-like or varying alternative),
// the corresponding level-1 value. Levels past a capacity limit are dropped
// and the sequence is marked truncated.
SteinSequence stein_sequence(const FamilySpec& Rspec, const FamilySpec& Sspec,
                             double eps, int n_max);

// Computable upper proxy for (1/n) D(hull R_n || hull S_n): (1/n) * min over R
// generators of the KL distance to hull(S_n). Throws DomainError if the value
// undercuts the rearranged type-II bound (-1 + (1-eps) d_hyp_sets)/n, which no
// exact evaluation can do.
double converse_regularized(const GeneratedSet& R, const GeneratedSet& S, double eps);

struct MetaLemmaInputs {
  double lambda = 0.0;  // >= 0
  double xi = 0.1;      // in (0, 1/3)
  double delta = 0.1;   // > 0
  double c = 0.5;       // in (0, 1]
  int alphabet_size = 2;
  int n = 1;
  double o_l = 0.0;  // sublinear offset evaluated at n, configured units
  double o_r = 0.0;  // sublinear offset evaluated at n, configured units
};

// phi(xi) = 2 F_{min(c,1/|X|)}( sqrt(4 xi ln|X| + 2 ln(base) (3 xi lg(|X|/xi)
// + h2(3 xi))) + 2 xi ), in configured units; -> 0 as xi -> 0+.
double blur_phi(double xi, double c, int alphabet_size);

// Finite-n width: the phi square root gains 2|X| ln(n+1)/n inside, plus the
// additive term sqrt((2/n) ln(1/eta)); same 2 xi tail.
double blur_theta(int alphabet_size, double eta, double xi, int n);

// (1/n) (|X| lg(n+1) + lg(1/(1-eta))), configured units.
double blur_o_tilde(int alphabet_size, double eta, int n);

// Asymptotic bound lambda + phi(xi) + delta. Validates input ranges.
double meta_lemma_rhs(const MetaLemmaInputs& inp);

// Finite-n evaluator: lambda + o_l/n + 2 F_{min(c,1/|X|)}( sqrt(2 o_r ln(base)
// / n) + theta(xi, n) ) + o_tilde(1/n).
double meta_lemma_rhs_at_n(const MetaLemmaInputs& inp, double eta = 0.5);

struct SanovCheck {
  double ln_weight = 0.0;  // ln of the family's largest type-class weight
  double exponent = 0.0;   // per-copy decay exponent, configured units
  double margin = 0.0;     // -n * exponent - ln_weight, in configured units
  bool pass = false;
};

// Exact type-class weight against the decay floor exp(-n * exponent). The
// exponent is closed-form for iid-style bases (tolerance 1e-12) and solved
// over the hull for varying sources (tolerance 1e-6).
SanovCheck sanov_type_bound_check(const FamilySpec& Sspec, int n, const TypeVector& V);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
};

// Exact log-probability that the symbol-wise depolarizing map with noise delta
// and reference R sends x to y, against the floor (1-delta)^n
// (c delta/(1-delta))^d with d the Hamming distance. Values in configured
// log units; margin = lhs - rhs >= 0 up to rounding.
// Preconditions: delta in (0, 1/(c+1)], every y_i in supp(R), c <= min R over
// supp(R).
BoundCheck transition_bound_check(const std::vector<int>& x, const std::vector<int>& y,
                                  const Distribution& R, double c, double delta);

// Per-string mass against the type-class envelope at Hamming distance d(x,y):
// log P^n(x) <= |X| log(n+1) + n F_{1/|X|}(d/n) - log |T_{V_y}|. Values in
// configured units; margin = rhs - lhs.
BoundCheck string_mass_nearby_type_check(const std::vector<int>& x,
                                         const std::vector<int>& y,
                                         const Distribution& P);

// Accept a string iff its type is within total-variation delta of the hull of
// the given level-1 generators (exact LP projection; single generators short-
// circuit to a direct distance).
struct TypeDistanceTest {
  std::vector<Distribution> generators;
  double delta = 0.0;

  double tv_to_hull(const Distribution& V) const;
  bool accepts(const TypeVector& V) const;
};

// Worst-case error probabilities of the test by exact summation over type
// classes: alpha = max over R generators of the rejection mass, beta = max
// over S generators of the acceptance mass.
double type_test_alpha(const TypeDistanceTest& test, const GeneratedSet& R);
double type_test_beta(const TypeDistanceTest& test, const GeneratedSet& S);

// True iff every adjacent-position transposition fixes Q within tol (those
// transpositions generate the full permutation group).
bool permutation_symmetric(const JointDistribution& Q, double tol = 1e-10);

struct DeFinettiCertificate {
  double max_ratio = 0.0;  // max over strings of Q_n(x) / sum_V V^{xn}(x)
  double allowance = 0.0;  // (n+1)^|X|
  bool pass = false;       // max_ratio <= allowance
};

// Entrywise envelope bound for symmetric distributions: Q_n <= (n+1)^|X| times
// the sum over all types V at level n of the product measure V^{xn}.
// Asymmetric input (tolerance 1e-10) -> DomainError.
DeFinettiCertificate definetti_type_bound(const JointDistribution& Qn);

struct DeFinettiMonteCarlo {
  double coverage = 0.0;     // fraction of entries where the sampled bound holds
  double worst_ratio = 0.0;  // max over entries of Q_n(x) / estimate(x)
  int samples = 0;
  std::string note;
};

// Monte-Carlo diagnostic for the constrained envelope: estimates the mixture
// integral of exp(-D(P^{xn}||hull F_n) + n Delta) P^{xn} by pushing the
// uniform sphere measure through squaring, then compares entrywise with Q_n.
// Diagnostic only: the multiplicative constant in the true statement is not
// explicit. Q_n must be symmetric and a member of the family at its level.
DeFinettiMonteCarlo definetti_constrained_check(const JointDistribution& Qn,
                                                const FamilySpec& Fspec, double Delta,
                                                int samples, std::uint64_t seed);

// Binary channel keeping symbol 0 and collapsing a 1/gamma fraction of symbol
// 1 onto it; the filter witnessing the gamma-set level-1 value.
StochasticChannel werner_channel(double gamma);

// D(P_1 x...x P_n || hull F_n) >= D(P_1 x...x P_{n-1} || hull F_{n-1})
// + D(W(P_n) || W(hull F_1)), all via KL projection; margin = lhs - rhs.
BoundCheck filtered_superadditivity_check(const FamilySpec& Fspec,
                                          const std::vector<Distribution>& P_list,
                                          const StochasticChannel& W);

struct SingleLetterSequence {
  std::vector<double> values;  // values[i] = (1/(i+1)) D(P^{x(i+1)} || hull F_{i+1})
  double target = 0.0;         // level-1 value (base minimum or hull projection)
  double final_gap = 0.0;      // target - values.back()
  bool pass = false;
  bool truncated = false;
};

// Per-copy KL projection of P^{xn} onto the family hull for n = 1..n_max.
// Values never exceed the level-1 target (within 1e-6); the last value must
// come within gap_allowance of it. iid-style and varying families only.
SingleLetterSequence single_letterization_check(const FamilySpec& Fspec,
                                                const Distribution& P, int n_max,
                                                double gap_allowance = 0.5);

}  // namespace steinlab
