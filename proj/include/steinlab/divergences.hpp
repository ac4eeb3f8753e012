#pragma once

#include <optional>
#include <vector>

#include "steinlab/alphabet.hpp"
#include "steinlab/config.hpp"

namespace steinlab {

enum class SolverStatus { optimal, capped_infinite, infeasible };

// Scalar divergence result in configured log units plus solver evidence.
// value is finite unless status is capped_infinite; certificates, when present,
// reproduce the value within kTolCertificate.
struct DivergenceReport {
  double value = 0.0;
  SolverStatus status = SolverStatus::optimal;
  double residual = 0.0;
  std::vector<double> certificate;  // test A, smoothed P', or optimizer Q*
  std::vector<double> mixture;      // hull weights for polytope optimizers
};

// Convex hull of finitely many level-n joints.
struct Polytope {
  int n = 0;
  std::vector<JointDistribution> generators;

  Polytope() = default;
  explicit Polytope(std::vector<JointDistribution> gens);
  std::size_t dim() const { return generators.front().dim(); }
};

// Relative entropy in configured units; returns kInfValue when supp(P) is not
// contained in supp(Q).
double kl(const std::vector<double>& p, const std::vector<double>& q);
double kl(const Distribution& p, const Distribution& q);
double kl(const JointDistribution& p, const JointDistribution& q);

double d_max(const std::vector<double>& p, const std::vector<double>& q);
double d_max(const Distribution& p, const Distribution& q);
double d_max(const JointDistribution& p, const JointDistribution& q);

// Smallest d_max(P'||Q) over distributions P' with tv(P,P') <= eps, as one LP
// in (P', t). Certificate is P'.
DivergenceReport d_max_smooth(const std::vector<double>& p, const std::vector<double>& q,
                              double eps);
DivergenceReport d_max_smooth(const Distribution& p, const Distribution& q, double eps);
DivergenceReport d_max_smooth(const JointDistribution& p, const JointDistribution& q,
                              double eps);

// Hypothesis-testing divergence: -log of the minimal type-II error of a test
// A in [0,1]^X with type-I error at most eps. Certificate is A.
DivergenceReport d_hyp(const std::vector<double>& p, const std::vector<double>& q,
                       double eps);
DivergenceReport d_hyp(const Distribution& p, const Distribution& q, double eps);
DivergenceReport d_hyp(const JointDistribution& p, const JointDistribution& q, double eps);

struct SandwichResult {
  bool pass = false;
  double lower_margin = 0.0;  // d_hyp - (smooth-max(1-eps) + lg(1/eps))
  double upper_margin = 0.0;  // smooth-max(1-eps-mu) + lg(1/mu) - d_hyp
};
// Two-sided pinch of d_hyp by the smooth max divergence. The smooth-max terms
// use sub-distribution smoothing under the generalized total variation
// (1/2)|P-P'|_1 + (1/2)(1 - sum P'), whose value is lg of the hockey-stick
// inverse min{gamma >= 0 : sum_x (P(x)-gamma Q(x))_+ <= radius} and may be
// negative; normalized-ball smoothing clamps that at 0 and breaks the lower
// inequality whenever the inverse dips below 1 (e.g. P = Q).
// Requires 0 < mu <= 1-eps < 1.
SandwichResult duality_sandwich_check(const std::vector<double>& p,
                                      const std::vector<double>& q, double eps, double mu,
                                      double slack = kTolMembership);

double binary_rel_ent(double p, double q);
double binary_entropy(double x);
double g_func(double x);  // (x+1)log(x+1) - x log x

// Piecewise auxiliary function: x log(1/c) + h2(x) up to x = 1/(c+1), then
// the constant log(1 + 1/c).
double f_aux(double c, double x);

struct FAuxVariationalResult {
  bool pass_sup = false;       // matches sup_{y in [0,x]} { y log(1/c1) + h2(y) }
  bool pass_doubling = false;  // F_c1(x) + F_c2(x) <= 2 F_min(x)
  bool pass_inf = false;       // matches inf over delta of the two-term objective
  double sup_form_err = 0.0;
  double doubling_margin = 0.0;
  double infimum_err = 0.0;
};
FAuxVariationalResult f_aux_variational_check(double c1, double c2, double x,
                                              double tol = kTolCertificate);

double filtered_kl(const Distribution& p, const Distribution& q,
                   const StochasticChannel& W);
double filtered_kl(const JointDistribution& p, const JointDistribution& q,
                   const StochasticChannel& W);

double renyi_half(const std::vector<double>& p, const std::vector<double>& q);
double renyi_half(const Distribution& p, const Distribution& q);
double renyi_half(const JointDistribution& p, const JointDistribution& q);

// min over Q in the hull of D(P||Q) by away-step Frank-Wolfe: uniform-mixture
// start, generator scan for the linear subproblem, exact line search, stop at
// duality gap < 1e-8 or 1e4 iterations. Infinite iff supp(P) escapes the union
// support of the generators.
DivergenceReport min_kl_to_polytope(const JointDistribution& P, const Polytope& F);

// min over P in the hull of D(P||Q); same scheme in the first argument.
DivergenceReport min_kl_from_polytope(const Polytope& R, const JointDistribution& Q);

// min over both hulls of D(P||Q) by alternating the two solvers.
DivergenceReport min_kl_between_polytopes(const Polytope& R, const Polytope& S);

struct ContinuityCheck {
  bool pass = false;
  double margin = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};
// Verifies D(P_n||F) <= D(P'_n||F) + n*eps*log(1/c) + n*g(eps) + h2(eps) with
// eps = tv(P_n, P'_n). Requires supp(P_n) inside supp(R)^n; the caller asserts
// that F is closed under the depolarizing map with reference R.
ContinuityCheck relent_continuity_bound_check(const JointDistribution& Pn,
                                              const JointDistribution& Ppn,
                                              const Polytope& F, const Distribution& R,
                                              double c);

// F_{1/|X|}(tv(P,Q)) - |H(P) - H(Q)|; nonnegative when the entropy continuity
// bound holds.
double entropy_continuity_margin(const Distribution& p, const Distribution& q);

}  // namespace steinlab
