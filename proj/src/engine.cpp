#include "steinlab/engine.hpp"

#include <algorithm>
#include <cmath>

#include "steinlab/lp.hpp"
#include "steinlab/rng.hpp"

namespace steinlab {

namespace {

double report_value(const DivergenceReport& rep) {
  return rep.status == SolverStatus::optimal ? rep.value : kInfValue;
}

bool iid_like(FamilyKind k) {
  return k == FamilyKind::simple_iid || k == FamilyKind::composite_iid ||
         k == FamilyKind::almost_iid;
}

void require_joint_space(const GeneratedSet& set, const JointDistribution& ref) {
  for (const JointDistribution& g : set.generators)
    if (!(g.alphabet == ref.alphabet) || g.n != ref.n)
      throw DomainError("generators live on different spaces");
}

// KL distance from the given joint to the hull of a realized level set.
double joint_kl_to_set(const JointDistribution& P, const GeneratedSet& F) {
  return report_value(min_kl_to_polytope(P, F.hull()));
}

// Golden-section minimum of a unimodal h over [lo, hi]; endpoints included.
template <typename H>
double golden_scan(H h, double lo, double hi, int iters) {
  const double r = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = h(x1), f2 = h(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = h(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = h(x2);
    }
  }
  double mid = h(0.5 * (a + b));
  return std::min({mid, h(lo), h(hi)});
}

// D(P^{xn} || hull) with fast paths for one- and two-generator hulls.
double product_kl_to_hull(const Distribution& P, int n, const Polytope& hull) {
  JointDistribution Pn = iid_power(P, n);
  if (hull.generators.size() == 1) return kl(Pn, hull.generators.front());
  if (hull.generators.size() == 2) {
    const std::vector<double>& A = hull.generators[0].w;
    const std::vector<double>& B = hull.generators[1].w;
    auto f = [&](double t) {
      double s = 0.0;
      for (std::size_t x = 0; x < Pn.dim(); ++x) {
        if (Pn.w[x] <= 0.0) continue;
        double q = (1.0 - t) * A[x] + t * B[x];
        if (q <= 0.0) return kInfValue;
        s += Pn.w[x] * std::log(Pn.w[x] / q);
      }
      return units_from_nats(s);
    };
    return std::min(kInfValue, golden_scan(f, 0.0, 1.0, 80));
  }
  return report_value(min_kl_to_polytope(Pn, hull));
}

}  // namespace

DivergenceReport beta_eps(const GeneratedSet& R, const GeneratedSet& S, double eps) {
  if (R.generators.empty() || S.generators.empty())
    throw DomainError("both hypothesis sets need generators");
  if (R.n != S.n) throw DomainError("hypothesis sets live at different levels");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
  const JointDistribution& ref = R.generators.front();
  require_joint_space(R, ref);
  require_joint_space(S, ref);

  const std::size_t m = ref.dim();
  const std::size_t n_rows = S.generators.size() + R.generators.size() + m;
  if (static_cast<double>(n_rows) * static_cast<double>(m + 1 + n_rows) >
      static_cast<double>(1 << 24))
    throw CapacityError("test program above tableau capacity");

  LinearProgram lp;
  lp.num_vars = static_cast<int>(m) + 1;
  lp.c.assign(m + 1, 0.0);
  lp.c[m] = 1.0;
  for (const JointDistribution& Q : S.generators) {
    std::vector<double> row(m + 1, 0.0);
    for (std::size_t x = 0; x < m; ++x) row[x] = Q.w[x];
    row[m] = -1.0;
    lp.add_row(std::move(row), '<', 0.0);
  }
  for (const JointDistribution& P : R.generators) {
    std::vector<double> row(m + 1, 0.0);
    for (std::size_t x = 0; x < m; ++x) row[x] = P.w[x];
    lp.add_row(std::move(row), '>', 1.0 - eps);
  }
  for (std::size_t x = 0; x < m; ++x) {
    std::vector<double> row(m + 1, 0.0);
    row[x] = 1.0;
    lp.add_row(std::move(row), '<', 1.0);
  }

  LpResult res = (lp.num_vars <= 48) ? solve_lp_lex_min(lp, static_cast<int>(m))
                                     : solve_lp(lp);
  DivergenceReport rep;
  if (res.status != LpResult::Status::optimal) {
    rep.status = SolverStatus::infeasible;  // unreachable: A = 1 is feasible
    return rep;
  }
  rep.status = SolverStatus::optimal;
  rep.value = std::max(0.0, res.x[m]);
  rep.certificate.assign(res.x.begin(), res.x.begin() + static_cast<long>(m));
  for (double& a : rep.certificate) a = std::min(1.0, std::max(0.0, a));
  double drift = 0.0;
  for (const JointDistribution& Q : S.generators) {
    double dot = 0.0;
    for (std::size_t x = 0; x < m; ++x) dot += rep.certificate[x] * Q.w[x];
    drift = std::max(drift, dot - rep.value);
  }
  for (const JointDistribution& P : R.generators) {
    double dot = 0.0;
    for (std::size_t x = 0; x < m; ++x) dot += rep.certificate[x] * P.w[x];
    drift = std::max(drift, (1.0 - eps) - dot);
  }
  rep.residual = drift;
  return rep;
}

double d_hyp_sets(const GeneratedSet& R, const GeneratedSet& S, double eps) {
  DivergenceReport rep = beta_eps(R, S, eps);
  if (rep.status != SolverStatus::optimal || rep.value <= 1e-30) return kInfValue;
  return std::min(kInfValue, -lg(rep.value));
}

double converse_regularized(const GeneratedSet& R, const GeneratedSet& S, double eps) {
  if (R.n != S.n) throw DomainError("hypothesis sets live at different levels");
  Polytope hull = S.hull();
  double best = kInfValue;
  for (const JointDistribution& g : R.generators)
    best = std::min(best, report_value(min_kl_to_polytope(g, hull)));
  const double n = static_cast<double>(R.n);
  double lhs = is_inf_value(best) ? kInfValue : best / n;
  double dh = d_hyp_sets(R, S, eps);
  double rhs = is_inf_value(dh) ? kInfValue : (-1.0 + (1.0 - eps) * dh) / n;
  if (is_inf_value(rhs) && !is_inf_value(lhs))
    throw DomainError("divergence proxy finite while the type-II error vanishes");
  if (!is_inf_value(rhs) && lhs < rhs - 1e-7)
    throw DomainError("divergence proxy undercuts the type-II bound");
  return lhs;
}

SteinSequence stein_sequence(const FamilySpec& Rspec, const FamilySpec& Sspec,
                             double eps, int n_max) {
  if (n_max < 1) throw DomainError("n_max must be positive");
  SteinSequence out;
  out.eps = eps;

  const bool r_iid = iid_like(Rspec.kind);
  const bool r_av = Rspec.kind == FamilyKind::arbitrarily_varying;
  const bool s_iid = iid_like(Sspec.kind);
  const bool s_av = Sspec.kind == FamilyKind::arbitrarily_varying;
  if ((r_iid || r_av) && (s_iid || s_av)) {
    GeneratedSet R1 = realize(Rspec, 1);
    GeneratedSet S1 = realize(Sspec, 1);
    double target = kInfValue;
    if (r_iid && s_av) {
      Polytope S1p(S1.generators);
      for (const JointDistribution& g : R1.generators)
        target = std::min(target, report_value(min_kl_to_polytope(g, S1p)));
    } else if (r_av && s_av) {
      target = report_value(
          min_kl_between_polytopes(Polytope(R1.generators), Polytope(S1.generators)));
    } else if (r_iid && s_iid) {
      for (const JointDistribution& g : R1.generators)
        for (const JointDistribution& h : S1.generators)
          target = std::min(target, kl(g, h));
    } else {
      Polytope R1p(R1.generators);
      for (const JointDistribution& h : S1.generators)
        target = std::min(target, report_value(min_kl_from_polytope(R1p, h)));
    }
    out.has_target = true;
    out.single_letter_target = target;
  }

  for (int n = 1; n <= n_max; ++n) {
    try {
      GeneratedSet Rn = realize(Rspec, n);
      GeneratedSet Sn = realize(Sspec, n);
      double dh = d_hyp_sets(Rn, Sn, eps);
      double rate = is_inf_value(dh) ? kInfValue : dh / n;
      double conv = converse_regularized(Rn, Sn, eps);
      double cap =
          is_inf_value(conv) ? kInfValue : (conv + 1.0 / n) / (1.0 - eps);
      out.rates.push_back(RatePoint{n, rate, cap});
    } catch (const CapacityError&) {
      out.truncated = true;
      break;
    }
  }
  if (!out.rates.empty()) out.converse_bound = out.rates.back().converse_cap;
  return out;
}

double blur_phi(double xi, double c, int alphabet_size) {
  if (!(xi > 0.0 && xi < 1.0 / 3.0)) throw DomainError("xi must lie in (0, 1/3)");
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("c must lie in (0, 1]");
  if (alphabet_size < 2) throw DomainError("alphabet needs at least two symbols");
  const double X = static_cast<double>(alphabet_size);
  double inside = 4.0 * xi * std::log(X) +
                  2.0 * ln_of_base() * (3.0 * xi * lg(X / xi) + binary_entropy(3.0 * xi));
  double arg = std::sqrt(inside) + 2.0 * xi;
  return 2.0 * f_aux(std::min(c, 1.0 / X), arg);
}

double blur_theta(int alphabet_size, double eta, double xi, int n) {
  if (!(xi > 0.0 && xi < 1.0 / 3.0)) throw DomainError("xi must lie in (0, 1/3)");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0,1)");
  if (n < 1) throw DomainError("n must be positive");
  if (alphabet_size < 2) throw DomainError("alphabet needs at least two symbols");
  const double X = static_cast<double>(alphabet_size);
  double inside = 4.0 * xi * std::log(X) +
                  2.0 * ln_of_base() * (3.0 * xi * lg(X / xi) + binary_entropy(3.0 * xi)) +
                  2.0 * X * std::log(n + 1.0) / n;
  return std::sqrt(inside) + std::sqrt(2.0 / n * std::log(1.0 / eta)) + 2.0 * xi;
}

double blur_o_tilde(int alphabet_size, double eta, int n) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0,1)");
  if (n < 1) throw DomainError("n must be positive");
  return (alphabet_size * lg(n + 1.0) + lg(1.0 / (1.0 - eta))) / n;
}

double meta_lemma_rhs(const MetaLemmaInputs& inp) {
  if (!(inp.lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  if (!(inp.delta > 0.0)) throw DomainError("delta must be positive");
  return inp.lambda + blur_phi(inp.xi, inp.c, inp.alphabet_size) + inp.delta;
}

double meta_lemma_rhs_at_n(const MetaLemmaInputs& inp, double eta) {
  if (!(inp.lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
  if (inp.n < 1) throw DomainError("n must be positive");
  if (!(inp.o_r >= 0.0)) throw DomainError("the square-root offset must be nonnegative");
  double mu_term = std::sqrt(2.0 * inp.o_r * ln_of_base() / inp.n);
  double arg = mu_term + blur_theta(inp.alphabet_size, eta, inp.xi, inp.n);
  return inp.lambda + inp.o_l / inp.n +
         2.0 * f_aux(std::min(inp.c, 1.0 / inp.alphabet_size), arg) +
         blur_o_tilde(inp.alphabet_size, eta, inp.n);
}

SanovCheck sanov_type_bound_check(const FamilySpec& Sspec, int n, const TypeVector& V) {
  SanovCheck out;
  out.ln_weight = family_sup_type_class_weight_ln(Sspec, n, V);
  double expo_nats = family_type_decay_exponent_nats(Sspec, V);
  out.exponent = is_inf_value(expo_nats) ? kInfValue : units_from_nats(expo_nats);
  if (out.ln_weight <= -kInfValue * 0.5) {
    out.margin = kInfValue;
    out.pass = true;
    return out;
  }
  double margin_nats =
      is_inf_value(expo_nats) ? -kInfValue : (-n * expo_nats - out.ln_weight);
  out.margin = units_from_nats(margin_nats);
  double tol = (Sspec.kind == FamilyKind::arbitrarily_varying) ? 1e-6 : 1e-12;
  out.pass = out.margin >= -tol;
  return out;
}

BoundCheck transition_bound_check(const std::vector<int>& x, const std::vector<int>& y,
                                  const Distribution& R, double c, double delta) {
  if (x.size() != y.size() || x.empty()) throw DomainError("strings must share a positive length");
  if (!(c > 0.0)) throw DomainError("c must be positive");
  if (!(delta > 0.0 && delta <= 1.0 / (c + 1.0) + kTolConstruct))
    throw DomainError("delta must lie in (0, 1/(c+1)]");
  double cmin = 1.0;
  for (int s = 0; s < R.alphabet.size(); ++s)
    if (R(s) > 0.0) cmin = std::min(cmin, R(s));
  if (c > cmin + kTolConstruct)
    throw DomainError("c exceeds the smallest support probability");

  const int n = static_cast<int>(x.size());
  double exact_ln = 0.0;
  int dist = 0;
  for (int i = 0; i < n; ++i) {
    if (x[i] < 0 || x[i] >= R.alphabet.size() || y[i] < 0 || y[i] >= R.alphabet.size())
      throw DomainError("symbol outside the alphabet");
    if (R(y[i]) <= 0.0) throw DomainError("target symbol outside the reference support");
    double per = (x[i] == y[i] ? 1.0 - delta : 0.0) + delta * R(y[i]);
    exact_ln += std::log(per);
    dist += (x[i] != y[i]);
  }
  double bound_ln = n * std::log1p(-delta) + dist * std::log(c * delta / (1.0 - delta));
  BoundCheck out;
  out.lhs = units_from_nats(exact_ln);
  out.rhs = units_from_nats(bound_ln);
  out.margin = out.lhs - out.rhs;
  out.pass = out.margin >= -1e-9;
  return out;
}

BoundCheck string_mass_nearby_type_check(const std::vector<int>& x,
                                         const std::vector<int>& y,
                                         const Distribution& P) {
  if (x.size() != y.size() || x.empty()) throw DomainError("strings must share a positive length");
  const int n = static_cast<int>(x.size());
  bool zero = false;
  double lhs_ln = 0.0;
  for (int i = 0; i < n; ++i) {
    if (x[i] < 0 || x[i] >= P.alphabet.size() || y[i] < 0 || y[i] >= P.alphabet.size())
      throw DomainError("symbol outside the alphabet");
    if (P(x[i]) <= 0.0)
      zero = true;
    else
      lhs_ln += std::log(P(x[i]));
  }
  TypeVector Vy = type_of_string(P.alphabet, y);
  double s = static_cast<double>(hamming_distance(x, y)) / n;
  double envelope = f_aux(1.0 / P.alphabet.size(), s);
  double rhs_ln = P.alphabet.size() * std::log(n + 1.0) + n * nats_from_units(envelope) -
                  big_log(type_class_size(Vy));
  BoundCheck out;
  out.rhs = units_from_nats(rhs_ln);
  if (zero) {
    out.lhs = -kInfValue;
    out.margin = kInfValue;
    out.pass = true;
    return out;
  }
  out.lhs = units_from_nats(lhs_ln);
  out.margin = out.rhs - out.lhs;
  out.pass = out.margin >= -1e-9;
  return out;
}

double TypeDistanceTest::tv_to_hull(const Distribution& V) const {
  if (generators.empty()) throw DomainError("test needs level-1 generators");
  double best = kInfValue;
  for (const Distribution& g : generators) best = std::min(best, tv_distance(V, g));
  if (generators.size() == 1) return best;

  const std::size_t k = generators.size();
  const std::size_t m = V.dim();
  LinearProgram lp;
  lp.num_vars = static_cast<int>(k + 2 * m);
  lp.c.assign(k + 2 * m, 0.0);
  for (std::size_t i = 0; i < 2 * m; ++i) lp.c[k + i] = 0.5;
  for (std::size_t x = 0; x < m; ++x) {
    std::vector<double> row(k + 2 * m, 0.0);
    for (std::size_t j = 0; j < k; ++j) row[j] = generators[j](static_cast<int>(x));
    row[k + x] = -1.0;      // surplus above V(x)
    row[k + m + x] = 1.0;   // deficit below V(x)
    lp.add_row(std::move(row), '=', V(static_cast<int>(x)));
  }
  std::vector<double> ones(k + 2 * m, 0.0);
  for (std::size_t j = 0; j < k; ++j) ones[j] = 1.0;
  lp.add_row(std::move(ones), '=', 1.0);
  LpResult res = solve_lp(lp);
  if (res.status != LpResult::Status::optimal) return best;  // unreachable
  return std::min(best, std::max(0.0, res.objective));
}

bool TypeDistanceTest::accepts(const TypeVector& V) const {
  return tv_to_hull(V.as_distribution()) <= delta + kTolConstruct;
}

namespace {

// Acceptance mass of every generator under the type test, by exact summation
// over type classes.
std::vector<double> accepted_mass(const TypeDistanceTest& test, const GeneratedSet& F) {
  if (F.generators.empty()) throw DomainError("hypothesis set needs generators");
  const Alphabet& a = F.generators.front().alphabet;
  std::vector<double> mass(F.generators.size(), 0.0);
  for (const TypeVector& V : enumerate_types(a, F.n)) {
    if (!test.accepts(V)) continue;
    StringSet cls = enumerate_type_class(V);
    for (std::size_t j = 0; j < F.generators.size(); ++j) {
      double s = 0.0;
      for (std::size_t idx : cls.indices) s += F.generators[j].w[idx];
      mass[j] += s;
    }
  }
  return mass;
}

}  // namespace

double type_test_alpha(const TypeDistanceTest& test, const GeneratedSet& R) {
  double worst = 0.0;
  for (double m : accepted_mass(test, R)) worst = std::max(worst, 1.0 - m);
  return worst;
}

double type_test_beta(const TypeDistanceTest& test, const GeneratedSet& S) {
  double worst = 0.0;
  for (double m : accepted_mass(test, S)) worst = std::max(worst, m);
  return worst;
}

bool permutation_symmetric(const JointDistribution& Q, double tol) {
  for (int i = 1; i < Q.n; ++i) {
    std::vector<int> pi(static_cast<std::size_t>(Q.n));
    for (int j = 0; j < Q.n; ++j) pi[static_cast<std::size_t>(j)] = j + 1;
    std::swap(pi[static_cast<std::size_t>(i - 1)], pi[static_cast<std::size_t>(i)]);
    JointDistribution perm = permute(Q, pi);
    for (std::size_t x = 0; x < Q.dim(); ++x)
      if (std::fabs(perm.w[x] - Q.w[x]) > tol) return false;
  }
  return true;
}

DeFinettiCertificate definetti_type_bound(const JointDistribution& Qn) {
  if (!permutation_symmetric(Qn, 1e-10))
    throw DomainError("distribution is not permutation symmetric");
  std::vector<double> env(Qn.dim(), 0.0);
  for (const TypeVector& V : enumerate_types(Qn.alphabet, Qn.n)) {
    JointDistribution Vn = iid_power(V.as_distribution(), Qn.n);
    for (std::size_t x = 0; x < env.size(); ++x) env[x] += Vn.w[x];
  }
  DeFinettiCertificate cert;
  for (std::size_t x = 0; x < env.size(); ++x)
    if (Qn.w[x] > 0.0) cert.max_ratio = std::max(cert.max_ratio, Qn.w[x] / env[x]);
  cert.allowance = std::pow(Qn.n + 1.0, Qn.alphabet.size());
  cert.pass = cert.max_ratio <= cert.allowance * (1.0 + 1e-9);
  return cert;
}

DeFinettiMonteCarlo definetti_constrained_check(const JointDistribution& Qn,
                                                const FamilySpec& Fspec, double Delta,
                                                int samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("need at least one sample");
  if (!(Delta > 0.0)) throw DomainError("Delta must be positive");
  if (!permutation_symmetric(Qn, 1e-10))
    throw DomainError("distribution is not permutation symmetric");
  GeneratedSet Fn = realize(Fspec, Qn.n);
  if (!member_of_family(Qn, Fspec, Fn))
    throw DomainError("distribution is outside the family at its level");
  Polytope hull = Fn.hull();
  const int k = Qn.alphabet.size();
  Rng rng = Rng::for_task(seed, "definetti-mc-n" + std::to_string(Qn.n));

  std::vector<double> est(Qn.dim(), 0.0);
  std::vector<double> p(static_cast<std::size_t>(k), 0.0);
  for (int t = 0; t < samples; ++t) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (int i = 0; i < k; ++i) {
        double g = rng.gaussian();
        p[static_cast<std::size_t>(i)] = g * g;
        norm += p[static_cast<std::size_t>(i)];
      }
    } while (norm <= 0.0);
    for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] /= norm;
    Distribution P(Qn.alphabet, p);
    double D = product_kl_to_hull(P, Qn.n, hull);
    if (is_inf_value(D)) continue;
    double weight = std::exp(-nats_from_units(D) + Qn.n * nats_from_units(Delta));
    JointDistribution Pn = iid_power(P, Qn.n);
    for (std::size_t x = 0; x < est.size(); ++x) est[x] += weight * Pn.w[x];
  }
  for (double& e : est) e /= samples;

  DeFinettiMonteCarlo out;
  out.samples = samples;
  int hold = 0;
  for (std::size_t x = 0; x < est.size(); ++x) {
    if (Qn.w[x] <= est[x] * (1.0 + 1e-9)) ++hold;
    if (est[x] > 0.0)
      out.worst_ratio = std::max(out.worst_ratio, Qn.w[x] / est[x]);
    else if (Qn.w[x] > 0.0)
      out.worst_ratio = kInfValue;
  }
  out.coverage = static_cast<double>(hold) / static_cast<double>(est.size());
  out.note = "diagnostic only: the envelope constant is existential, not explicit";
  return out;
}

StochasticChannel werner_channel(double gamma) {
  if (!(gamma >= 1.0)) throw DomainError("gamma must be at least 1");
  return StochasticChannel(Alphabet::binary(), Alphabet::binary(),
                           {1.0, 1.0 / gamma, 0.0, 1.0 - 1.0 / gamma});
}

BoundCheck filtered_superadditivity_check(const FamilySpec& Fspec,
                                          const std::vector<Distribution>& P_list,
                                          const StochasticChannel& W) {
  if (P_list.empty()) throw DomainError("need at least one factor");
  const int n = static_cast<int>(P_list.size());
  double lhs = joint_kl_to_set(tensor_product(P_list), realize(Fspec, n));
  double prefix = 0.0;
  if (n >= 2) {
    std::vector<Distribution> head(P_list.begin(), P_list.end() - 1);
    prefix = joint_kl_to_set(tensor_product(head), realize(Fspec, n - 1));
  }
  GeneratedSet F1 = realize(Fspec, 1);
  std::vector<JointDistribution> filtered;
  filtered.reserve(F1.generators.size());
  for (const JointDistribution& g : F1.generators)
    filtered.push_back(as_joint(apply_channel(W, as_single(g))));
  JointDistribution WP = as_joint(apply_channel(W, P_list.back()));
  double tail = report_value(min_kl_to_polytope(WP, Polytope(filtered)));

  BoundCheck out;
  out.lhs = lhs;
  bool rhs_inf = is_inf_value(prefix) || is_inf_value(tail);
  out.rhs = rhs_inf ? kInfValue : prefix + tail;
  if (is_inf_value(lhs)) {
    out.margin = rhs_inf ? 0.0 : kInfValue;
    out.pass = true;
  } else if (rhs_inf) {
    out.margin = -kInfValue;  // impossible: filtering cannot create divergence
    out.pass = false;
  } else {
    out.margin = lhs - out.rhs;
    out.pass = out.margin >= -1e-5;
  }
  return out;
}

SingleLetterSequence single_letterization_check(const FamilySpec& Fspec,
                                                const Distribution& P, int n_max,
                                                double gap_allowance) {
  if (!iid_like(Fspec.kind) && Fspec.kind != FamilyKind::arbitrarily_varying)
    throw DomainError("per-copy targets cover iid-style and varying families");
  if (Fspec.kind == FamilyKind::almost_iid)
    throw DomainError("per-copy targets cover iid-style and varying families");
  if (n_max < 1) throw DomainError("n_max must be positive");

  SingleLetterSequence out;
  if (Fspec.kind == FamilyKind::arbitrarily_varying) {
    std::vector<JointDistribution> base1;
    base1.reserve(Fspec.base.size());
    for (const Distribution& b : Fspec.base) base1.push_back(as_joint(b));
    out.target = report_value(min_kl_to_polytope(as_joint(P), Polytope(base1)));
  } else {
    out.target = kInfValue;
    for (const Distribution& b : Fspec.base) out.target = std::min(out.target, kl(P, b));
  }

  for (int n = 1; n <= n_max; ++n) {
    try {
      double v = joint_kl_to_set(iid_power(P, n), realize(Fspec, n));
      out.values.push_back(is_inf_value(v) ? kInfValue : v / n);
    } catch (const CapacityError&) {
      out.truncated = true;
      break;
    }
  }

  out.pass = !out.values.empty();
  if (!is_inf_value(out.target))
    for (double v : out.values)
      if (v > out.target + 1e-6) out.pass = false;
  if (!out.values.empty() && !is_inf_value(out.target) &&
      !is_inf_value(out.values.back())) {
    out.final_gap = out.target - out.values.back();
    if (out.final_gap > gap_allowance) out.pass = false;
  }
  return out;
}

}  // namespace steinlab
