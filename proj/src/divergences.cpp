#include "steinlab/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "steinlab/lp.hpp"

namespace steinlab {

namespace {

constexpr double kFwGapTol = 1e-8;  // duality gap stop, configured units
constexpr int kFwMaxIters = 10000;
constexpr double kTinyMass = 1e-300;

void require_same_size(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw DomainError("weight vectors differ in length");
}

void require_same_space(const Distribution& p, const Distribution& q) {
  if (!(p.alphabet == q.alphabet)) throw DomainError("distributions over different alphabets");
}

void require_same_space(const JointDistribution& p, const JointDistribution& q) {
  if (!(p.alphabet == q.alphabet) || p.n != q.n)
    throw DomainError("joints over different alphabets or levels");
}

double capped(double v) { return std::min(v, kInfValue); }

// Minimizes a unimodal function on [lo, hi] by golden section; returns the value.
template <typename F>
double golden_min(F h, double lo, double hi) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = h(x1), f2 = h(x2);
  for (int i = 0; i < 120; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = h(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = h(x2);
    }
  }
  return h(0.5 * (a + b));
}

// Away-step Frank-Wolfe over the hull of gens. second_arg: minimize
// D(fixed || z); first_arg: minimize D(z || fixed), where every generator's
// support lies inside supp(fixed).
enum class FwKind { second_arg, first_arg };

struct FwOutcome {
  std::vector<double> z;
  std::vector<double> weights;
  double value_nats = 0.0;
  double gap_nats = 0.0;
};

double fw_value_nats(FwKind kind, const std::vector<double>& fixed,
                     const std::vector<double>& z) {
  double v = 0.0;
  if (kind == FwKind::second_arg) {
    for (std::size_t i = 0; i < fixed.size(); ++i)
      if (fixed[i] > 0.0) v += fixed[i] * std::log(fixed[i] / std::max(z[i], kTinyMass));
  } else {
    for (std::size_t i = 0; i < fixed.size(); ++i)
      if (z[i] > 0.0) v += z[i] * std::log(z[i] / std::max(fixed[i], kTinyMass));
  }
  return v;
}

// d/dt of the objective along z + t*d, in nats.
double fw_dir_deriv(FwKind kind, const std::vector<double>& fixed,
                    const std::vector<double>& z, const std::vector<double>& d, double t) {
  double g = 0.0;
  if (kind == FwKind::second_arg) {
    for (std::size_t i = 0; i < fixed.size(); ++i) {
      if (fixed[i] > 0.0 && d[i] != 0.0)
        g -= fixed[i] * d[i] / std::max(z[i] + t * d[i], kTinyMass);
    }
  } else {
    for (std::size_t i = 0; i < fixed.size(); ++i) {
      if (d[i] != 0.0)
        g += d[i] * (std::log(std::max(z[i] + t * d[i], kTinyMass) /
                              std::max(fixed[i], kTinyMass)) +
                     1.0);
    }
  }
  return g;
}

double fw_line_search(FwKind kind, const std::vector<double>& fixed,
                      const std::vector<double>& z, const std::vector<double>& d,
                      double tmax) {
  if (fw_dir_deriv(kind, fixed, z, d, tmax) <= 0.0) return tmax;
  double lo = 0.0, hi = tmax;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (fw_dir_deriv(kind, fixed, z, d, mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

FwOutcome fw_minimize(FwKind kind, const std::vector<double>& fixed,
                      const std::vector<const std::vector<double>*>& gens) {
  const std::size_t dim = fixed.size();
  const std::size_t k = gens.size();
  std::vector<double> w(k, 1.0 / static_cast<double>(k));
  std::vector<double> z(dim, 0.0), grad(dim, 0.0), dir(dim, 0.0), reward(k, 0.0);

  auto rebuild_z = [&]() {
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      if (w[j] <= 0.0) continue;
      const std::vector<double>& v = *gens[j];
      for (std::size_t i = 0; i < dim; ++i) z[i] += w[j] * v[i];
    }
  };
  rebuild_z();

  struct Scores {
    int toward = -1;
    int away = -1;
    double gap_fw = 0.0;
    double gap_away = 0.0;
  };
  // reward is the inner product with the descent direction's sign convention:
  // larger reward means a better toward-vertex for both objective kinds.
  auto compute_scores = [&]() {
    if (kind == FwKind::second_arg) {
      for (std::size_t i = 0; i < dim; ++i)
        grad[i] = (fixed[i] > 0.0) ? fixed[i] / std::max(z[i], kTinyMass) : 0.0;
    } else {
      for (std::size_t i = 0; i < dim; ++i)
        grad[i] = (fixed[i] > 0.0)
                      ? -(std::log(std::max(z[i], kTinyMass) / fixed[i]) + 1.0)
                      : 0.0;
    }
    double base = 0.0;
    for (std::size_t i = 0; i < dim; ++i) base += grad[i] * z[i];
    Scores s;
    double best = -std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      const std::vector<double>& v = *gens[j];
      double r = 0.0;
      for (std::size_t i = 0; i < dim; ++i)
        if (grad[i] != 0.0) r += grad[i] * v[i];
      reward[j] = r;
      if (r > best) {
        best = r;
        s.toward = static_cast<int>(j);
      }
      if (w[j] > 1e-15 && r < worst) {
        worst = r;
        s.away = static_cast<int>(j);
      }
    }
    s.gap_fw = best - base;
    s.gap_away = (s.away >= 0) ? base - worst : -1.0;
    return s;
  };

  double gap = 0.0;
  for (int iter = 0; iter < kFwMaxIters; ++iter) {
    Scores s = compute_scores();
    gap = s.gap_fw;
    if (units_from_nats(gap) < kFwGapTol) break;

    bool away_ok = s.away >= 0 && w[static_cast<std::size_t>(s.away)] < 1.0 - 1e-12;
    bool use_away = away_ok && s.gap_away > s.gap_fw;
    double tmax;
    if (use_away) {
      const std::vector<double>& va = *gens[static_cast<std::size_t>(s.away)];
      for (std::size_t i = 0; i < dim; ++i) dir[i] = z[i] - va[i];
      double wa = w[static_cast<std::size_t>(s.away)];
      tmax = wa / (1.0 - wa);
    } else {
      const std::vector<double>& vs = *gens[static_cast<std::size_t>(s.toward)];
      for (std::size_t i = 0; i < dim; ++i) dir[i] = vs[i] - z[i];
      tmax = 1.0;
    }
    if (fw_dir_deriv(kind, fixed, z, dir, 0.0) >= 0.0) break;
    double t = fw_line_search(kind, fixed, z, dir, tmax);
    if (t <= 0.0) break;

    if (use_away) {
      for (std::size_t j = 0; j < k; ++j) w[j] *= (1.0 + t);
      w[static_cast<std::size_t>(s.away)] -= t;
    } else {
      for (std::size_t j = 0; j < k; ++j) w[j] *= (1.0 - t);
      w[static_cast<std::size_t>(s.toward)] += t;
    }
    double sw = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (w[j] < 1e-14) w[j] = 0.0;
      sw += w[j];
    }
    for (std::size_t j = 0; j < k; ++j) w[j] /= sw;
    rebuild_z();
  }

  Scores fin = compute_scores();
  FwOutcome out;
  out.z = z;
  out.weights = w;
  out.value_nats = fw_value_nats(kind, fixed, z);
  out.gap_nats = std::max(0.0, fin.gap_fw);
  return out;
}

DivergenceReport capped_report() {
  DivergenceReport rep;
  rep.value = kInfValue;
  rep.status = SolverStatus::capped_infinite;
  rep.residual = 0.0;
  return rep;
}

}  // namespace

Polytope::Polytope(std::vector<JointDistribution> gens) : generators(std::move(gens)) {
  if (generators.empty()) throw DomainError("polytope needs at least one generator");
  n = generators.front().n;
  for (const JointDistribution& g : generators) {
    if (g.n != n || !(g.alphabet == generators.front().alphabet) ||
        g.dim() != generators.front().dim())
      throw DomainError("polytope generators must share level and alphabet");
  }
}

double kl(const std::vector<double>& p, const std::vector<double>& q) {
  require_same_size(p, q);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return kInfValue;
      s += p[i] * std::log(p[i] / q[i]);
    }
  }
  return units_from_nats(s);
}

double kl(const Distribution& p, const Distribution& q) {
  require_same_space(p, q);
  return kl(p.w, q.w);
}

double kl(const JointDistribution& p, const JointDistribution& q) {
  require_same_space(p, q);
  return kl(p.w, q.w);
}

double d_max(const std::vector<double>& p, const std::vector<double>& q) {
  require_same_size(p, q);
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return kInfValue;
      worst = std::max(worst, p[i] / q[i]);
    }
  }
  return lg(worst);
}

double d_max(const Distribution& p, const Distribution& q) {
  require_same_space(p, q);
  return d_max(p.w, q.w);
}

double d_max(const JointDistribution& p, const JointDistribution& q) {
  require_same_space(p, q);
  return d_max(p.w, q.w);
}

DivergenceReport d_max_smooth(const std::vector<double>& p, const std::vector<double>& q,
                              double eps) {
  require_same_size(p, q);
  if (eps < 0.0 || eps >= 1.0) throw DomainError("smoothing radius must lie in [0,1)");
  const int m = static_cast<int>(p.size());

  double mass_outside = 0.0;
  for (int x = 0; x < m; ++x)
    if (q[static_cast<std::size_t>(x)] <= 0.0) mass_outside += p[static_cast<std::size_t>(x)];
  if (mass_outside > eps + kTolConstruct) return capped_report();

  // Variables: P' (m), u (m), t. tv(P,P') <= eps is sum of the one-sided
  // overshoots u_x >= P_x - P'_x.
  LinearProgram lp;
  lp.num_vars = 2 * m + 1;
  lp.c.assign(static_cast<std::size_t>(lp.num_vars), 0.0);
  lp.c[static_cast<std::size_t>(2 * m)] = 1.0;
  for (int x = 0; x < m; ++x) {
    std::vector<double> row(static_cast<std::size_t>(lp.num_vars), 0.0);
    row[static_cast<std::size_t>(x)] = 1.0;
    row[static_cast<std::size_t>(2 * m)] = -q[static_cast<std::size_t>(x)];
    lp.add_row(row, '<', 0.0);
  }
  for (int x = 0; x < m; ++x) {
    std::vector<double> row(static_cast<std::size_t>(lp.num_vars), 0.0);
    row[static_cast<std::size_t>(x)] = 1.0;
    row[static_cast<std::size_t>(m + x)] = 1.0;
    lp.add_row(row, '>', p[static_cast<std::size_t>(x)]);
  }
  {
    std::vector<double> row(static_cast<std::size_t>(lp.num_vars), 0.0);
    for (int x = 0; x < m; ++x) row[static_cast<std::size_t>(x)] = 1.0;
    lp.add_row(row, '=', 1.0);
  }
  {
    std::vector<double> row(static_cast<std::size_t>(lp.num_vars), 0.0);
    for (int x = 0; x < m; ++x) row[static_cast<std::size_t>(m + x)] = 1.0;
    lp.add_row(row, '<', eps);
  }

  LpResult res = (lp.num_vars <= 48) ? solve_lp_lex_min(lp, m) : solve_lp(lp);
  if (res.status != LpResult::Status::optimal) return capped_report();

  double t_star = res.x[static_cast<std::size_t>(2 * m)];
  DivergenceReport rep;
  rep.value = std::max(0.0, lg(std::max(t_star, kTinyMass)));
  rep.certificate.assign(res.x.begin(), res.x.begin() + m);
  for (double& v : rep.certificate) v = std::max(0.0, v);

  double dm = d_max(rep.certificate, q);
  double tvd = 0.0;
  for (int x = 0; x < m; ++x)
    tvd += std::max(0.0, p[static_cast<std::size_t>(x)] -
                             rep.certificate[static_cast<std::size_t>(x)]);
  double value_err = is_inf_value(dm) ? kInfValue : std::fabs(dm - rep.value);
  rep.residual = std::max(value_err, std::max(0.0, tvd - eps - kTolProperty));
  return rep;
}

DivergenceReport d_max_smooth(const Distribution& p, const Distribution& q, double eps) {
  require_same_space(p, q);
  return d_max_smooth(p.w, q.w, eps);
}

DivergenceReport d_max_smooth(const JointDistribution& p, const JointDistribution& q,
                              double eps) {
  require_same_space(p, q);
  return d_max_smooth(p.w, q.w, eps);
}

DivergenceReport d_hyp(const std::vector<double>& p, const std::vector<double>& q,
                       double eps) {
  require_same_size(p, q);
  if (eps < 0.0 || eps >= 1.0) throw DomainError("type-I budget must lie in [0,1)");
  const int m = static_cast<int>(p.size());

  // Variables: the test A in [0,1]^X. Minimize the type-II error A.Q subject
  // to type-I success A.P >= 1 - eps.
  LinearProgram lp;
  lp.num_vars = m;
  lp.c = q;
  lp.add_row(p, '>', 1.0 - eps);
  for (int x = 0; x < m; ++x) {
    std::vector<double> row(static_cast<std::size_t>(m), 0.0);
    row[static_cast<std::size_t>(x)] = 1.0;
    lp.add_row(row, '<', 1.0);
  }

  LpResult res = (m <= 48) ? solve_lp_lex_min(lp, m) : solve_lp(lp);
  if (res.status != LpResult::Status::optimal)
    throw DomainError("hypothesis-testing program unexpectedly infeasible");

  double beta = std::max(0.0, res.objective);
  DivergenceReport rep;
  rep.certificate = res.x;
  for (double& a : rep.certificate) a = std::min(1.0, std::max(0.0, a));
  double beta_cert = 0.0, type1 = 0.0;
  for (int x = 0; x < m; ++x) {
    beta_cert += rep.certificate[static_cast<std::size_t>(x)] * q[static_cast<std::size_t>(x)];
    type1 += rep.certificate[static_cast<std::size_t>(x)] * p[static_cast<std::size_t>(x)];
  }
  double feas_drift = std::max(0.0, (1.0 - eps) - type1 - kTolProperty);

  if (beta <= 1e-30) {
    rep.status = SolverStatus::capped_infinite;
    rep.value = kInfValue;
    rep.residual = std::max(feas_drift, (beta_cert <= 1e-30) ? 0.0 : beta_cert);
    return rep;
  }
  rep.value = -lg(beta);
  double value_err = std::fabs(-lg(std::max(beta_cert, kTinyMass)) - rep.value);
  rep.residual = std::max(value_err, feas_drift);
  return rep;
}

DivergenceReport d_hyp(const Distribution& p, const Distribution& q, double eps) {
  require_same_space(p, q);
  return d_hyp(p.w, q.w, eps);
}

DivergenceReport d_hyp(const JointDistribution& p, const JointDistribution& q, double eps) {
  require_same_space(p, q);
  return d_hyp(p.w, q.w, eps);
}

// lg of min{gamma >= 0 : sum_x (p_x - gamma q_x)_+ <= radius}: the smooth max
// divergence under sub-distribution smoothing with generalized total
// variation. Water-filling over likelihood-ratio prefixes; may be negative.
// Returns capped_infinite when the mass of p outside supp(q) exceeds radius.
static DivergenceReport hockey_stick_inverse_lg(const std::vector<double>& p,
                                                const std::vector<double>& q,
                                                double radius) {
  DivergenceReport rep;
  double mass_outside = 0.0;
  std::vector<std::pair<double, int>> order;  // ratio descending over supp(q)
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (q[x] <= 0.0) {
      mass_outside += p[x];
    } else {
      order.emplace_back(p[x] / q[x], static_cast<int>(x));
    }
  }
  if (mass_outside > radius + kTolConstruct || order.empty()) {
    rep.status = SolverStatus::capped_infinite;
    rep.value = kInfValue;
    return rep;
  }
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<double> pref_p(order.size()), pref_q(order.size());
  double sp = mass_outside, sq = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    sp += p[static_cast<std::size_t>(order[k].second)];
    sq += q[static_cast<std::size_t>(order[k].second)];
    pref_p[k] = sp;
    pref_q[k] = sq;
  }
  // E_gamma = pref_p[k] - gamma*pref_q[k] on gamma in [r_{k+1}, r_k]; scan the
  // candidate crossing from the widest active set upward in gamma.
  double gamma = 0.0;
  for (std::size_t k1 = order.size(); k1 >= 1; --k1) {
    std::size_t k = k1 - 1;
    double cand = (pref_p[k] - radius) / pref_q[k];
    if (cand <= order[k].first + kTolConstruct) {
      gamma = std::max(0.0, cand);
      break;
    }
  }
  if (gamma <= 0.0) {
    // radius >= total mass of p: smoothing can delete everything
    rep.value = -kInfValue;
    return rep;
  }
  rep.value = lg(gamma);
  return rep;
}

SandwichResult duality_sandwich_check(const std::vector<double>& p,
                                      const std::vector<double>& q, double eps, double mu,
                                      double slack) {
  if (!(eps > 0.0 && eps < 1.0 && mu > 0.0 && mu <= 1.0 - eps + kTolConstruct))
    throw DomainError("need 0 < mu <= 1 - eps < 1");
  DivergenceReport dh = d_hyp(p, q, eps);
  DivergenceReport lo = hockey_stick_inverse_lg(p, q, 1.0 - eps);
  DivergenceReport up = hockey_stick_inverse_lg(p, q, std::max(0.0, 1.0 - eps - mu));

  bool dh_inf = dh.status == SolverStatus::capped_infinite;
  bool lo_inf = lo.status == SolverStatus::capped_infinite;
  bool up_inf = up.status == SolverStatus::capped_infinite;

  SandwichResult out;
  out.lower_margin = (dh_inf && lo_inf)
                         ? 0.0
                         : capped(dh.value) - capped(lo.value) - lg(1.0 / eps);
  out.upper_margin = (dh_inf && up_inf)
                         ? 0.0
                         : capped(up.value) + lg(1.0 / mu) - capped(dh.value);
  out.pass = out.lower_margin >= -slack && out.upper_margin >= -slack;
  return out;
}

double binary_rel_ent(double p, double q) {
  if (p < -kTolConstruct || p > 1.0 + kTolConstruct || q < -kTolConstruct ||
      q > 1.0 + kTolConstruct)
    throw DomainError("binary arguments must lie in [0,1]");
  p = std::min(1.0, std::max(0.0, p));
  q = std::min(1.0, std::max(0.0, q));
  if (q <= 0.0) return (p > 0.0) ? kInfValue : 0.0;
  if (q >= 1.0) return (p < 1.0) ? kInfValue : 0.0;
  return units_from_nats(xlog_ratio_nats(p, q) + xlog_ratio_nats(1.0 - p, 1.0 - q));
}

double binary_entropy(double x) {
  if (x < -kTolConstruct || x > 1.0 + kTolConstruct)
    throw DomainError("binary entropy argument must lie in [0,1]");
  x = std::min(1.0, std::max(0.0, x));
  return units_from_nats(neg_xlogx_nats(x) + neg_xlogx_nats(1.0 - x));
}

double g_func(double x) {
  if (x < -kTolConstruct) throw DomainError("g is defined on x >= 0");
  x = std::max(0.0, x);
  return units_from_nats((x + 1.0) * std::log1p(x) + neg_xlogx_nats(x));
}

double f_aux(double c, double x) {
  if (!(c > 0.0) || c > 1.0) throw DomainError("scale c must lie in (0,1]");
  if (x < -kTolConstruct) throw DomainError("argument must be nonnegative");
  x = std::max(0.0, x);
  double knee = 1.0 / (c + 1.0);
  if (x <= knee) return x * lg(1.0 / c) + binary_entropy(x);
  return lg(1.0 + 1.0 / c);
}

FAuxVariationalResult f_aux_variational_check(double c1, double c2, double x, double tol) {
  FAuxVariationalResult r;

  double cap = std::min(x, 1.0);
  auto neg_line = [&](double y) { return -(y * lg(1.0 / c1) + binary_entropy(y)); };
  double sup = (cap <= 0.0) ? 0.0 : -golden_min(neg_line, 0.0, cap);
  r.sup_form_err = std::fabs(f_aux(c1, x) - sup);

  double cm = std::min(c1, c2);
  r.doubling_margin = 2.0 * f_aux(cm, x) - f_aux(c1, x) - f_aux(c2, x);

  double knee = 1.0 / (c1 + 1.0);
  auto two_term = [&](double d) {
    return x * lg((1.0 - d) / (c1 * d)) + lg(1.0 / (1.0 - d));
  };
  double dlo = std::min(1e-13, 0.5 * knee);
  double inf_val = golden_min(two_term, dlo, knee);
  r.infimum_err = std::fabs(f_aux(c1, x) - inf_val);

  r.pass_sup = r.sup_form_err <= tol;
  r.pass_doubling = r.doubling_margin >= -tol;
  r.pass_inf = r.infimum_err <= tol;
  return r;
}

double filtered_kl(const Distribution& p, const Distribution& q,
                   const StochasticChannel& W) {
  require_same_space(p, q);
  return kl(apply_channel(W, p), apply_channel(W, q));
}

double filtered_kl(const JointDistribution& p, const JointDistribution& q,
                   const StochasticChannel& W) {
  require_same_space(p, q);
  return kl(apply_channel_per_symbol(p, W), apply_channel_per_symbol(q, W));
}

double renyi_half(const std::vector<double>& p, const std::vector<double>& q) {
  require_same_size(p, q);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    s += std::sqrt(std::max(0.0, p[i]) * std::max(0.0, q[i]));
  if (s <= 1e-150) return kInfValue;
  return -2.0 * lg(std::min(s, 1.0 + kTolProperty));
}

double renyi_half(const Distribution& p, const Distribution& q) {
  require_same_space(p, q);
  return renyi_half(p.w, q.w);
}

double renyi_half(const JointDistribution& p, const JointDistribution& q) {
  require_same_space(p, q);
  return renyi_half(p.w, q.w);
}

DivergenceReport min_kl_to_polytope(const JointDistribution& P, const Polytope& F) {
  if (F.n != P.n || !(F.generators.front().alphabet == P.alphabet))
    throw DomainError("polytope level or alphabet does not match the point");

  const std::size_t dim = P.dim();
  for (std::size_t i = 0; i < dim; ++i) {
    if (P.w[i] <= 0.0) continue;
    bool covered = false;
    for (const JointDistribution& g : F.generators)
      if (g.w[i] > 0.0) {
        covered = true;
        break;
      }
    if (!covered) return capped_report();
  }

  std::vector<const std::vector<double>*> gens;
  gens.reserve(F.generators.size());
  for (const JointDistribution& g : F.generators) gens.push_back(&g.w);

  FwOutcome out = fw_minimize(FwKind::second_arg, P.w, gens);
  DivergenceReport rep;
  rep.value = units_from_nats(out.value_nats);
  rep.residual = units_from_nats(out.gap_nats);
  rep.certificate = std::move(out.z);
  rep.mixture = std::move(out.weights);
  return rep;
}

DivergenceReport min_kl_from_polytope(const Polytope& R, const JointDistribution& Q) {
  if (R.n != Q.n || !(R.generators.front().alphabet == Q.alphabet))
    throw DomainError("polytope level or alphabet does not match the point");

  const std::size_t dim = Q.dim();
  std::vector<int> compliant;
  for (std::size_t j = 0; j < R.generators.size(); ++j) {
    const std::vector<double>& v = R.generators[j].w;
    bool ok = true;
    for (std::size_t i = 0; i < dim; ++i)
      if (v[i] > 0.0 && Q.w[i] <= 0.0) {
        ok = false;
        break;
      }
    if (ok) compliant.push_back(static_cast<int>(j));
  }
  if (compliant.empty()) return capped_report();

  std::vector<const std::vector<double>*> gens;
  gens.reserve(compliant.size());
  for (int j : compliant) gens.push_back(&R.generators[static_cast<std::size_t>(j)].w);

  FwOutcome out = fw_minimize(FwKind::first_arg, Q.w, gens);
  DivergenceReport rep;
  rep.value = units_from_nats(out.value_nats);
  rep.residual = units_from_nats(out.gap_nats);
  rep.certificate = std::move(out.z);
  rep.mixture.assign(R.generators.size(), 0.0);
  for (std::size_t j = 0; j < compliant.size(); ++j)
    rep.mixture[static_cast<std::size_t>(compliant[j])] = out.weights[j];
  return rep;
}

DivergenceReport min_kl_between_polytopes(const Polytope& R, const Polytope& S) {
  if (R.n != S.n || !(R.generators.front().alphabet == S.generators.front().alphabet))
    throw DomainError("polytopes must share level and alphabet");
  const std::size_t dim = R.generators.front().dim();

  std::vector<bool> union_supp(dim, false);
  for (const JointDistribution& g : S.generators)
    for (std::size_t i = 0; i < dim; ++i)
      if (g.w[i] > 0.0) union_supp[i] = true;

  std::vector<int> compliant;
  for (std::size_t j = 0; j < R.generators.size(); ++j) {
    const std::vector<double>& v = R.generators[j].w;
    bool ok = true;
    for (std::size_t i = 0; i < dim; ++i)
      if (v[i] > 0.0 && !union_supp[i]) {
        ok = false;
        break;
      }
    if (ok) compliant.push_back(static_cast<int>(j));
  }
  if (compliant.empty()) return capped_report();

  std::vector<JointDistribution> rf;
  rf.reserve(compliant.size());
  for (int j : compliant) rf.push_back(R.generators[static_cast<std::size_t>(j)]);
  Polytope Rf(rf);

  const Alphabet& alph = R.generators.front().alphabet;
  std::vector<double> pw(dim, 0.0);
  for (const JointDistribution& g : rf)
    for (std::size_t i = 0; i < dim; ++i)
      pw[i] += g.w[i] / static_cast<double>(rf.size());
  JointDistribution Pcur(alph, R.n, pw);

  DivergenceReport qrep, prep;
  double prev = kInfValue;
  for (int it = 0; it < 200; ++it) {
    qrep = min_kl_to_polytope(Pcur, S);
    if (qrep.status != SolverStatus::optimal) return capped_report();
    JointDistribution Qcur(alph, S.n, qrep.certificate);
    prep = min_kl_from_polytope(Rf, Qcur);
    if (prep.status != SolverStatus::optimal) return capped_report();
    Pcur = JointDistribution(alph, R.n, prep.certificate);
    if (it >= 1 && prev - prep.value < 1e-11) break;
    prev = prep.value;
  }

  qrep = min_kl_to_polytope(Pcur, S);
  DivergenceReport rep;
  rep.value = qrep.value;
  rep.status = qrep.status;
  rep.residual = std::max(qrep.residual, prep.residual);
  rep.certificate = qrep.certificate;
  rep.mixture.assign(R.generators.size(), 0.0);
  for (std::size_t j = 0; j < compliant.size(); ++j)
    rep.mixture[static_cast<std::size_t>(compliant[j])] = prep.mixture[static_cast<std::size_t>(compliant[j])];
  return rep;
}

ContinuityCheck relent_continuity_bound_check(const JointDistribution& Pn,
                                              const JointDistribution& Ppn,
                                              const Polytope& F, const Distribution& R,
                                              double c) {
  require_same_space(Pn, Ppn);
  if (F.n != Pn.n || !(F.generators.front().alphabet == Pn.alphabet))
    throw DomainError("polytope level or alphabet does not match the points");
  if (!(R.alphabet == Pn.alphabet)) throw DomainError("reference alphabet mismatch");
  if (!(c > 0.0) || c > 1.0) throw DomainError("scale c must lie in (0,1]");

  const int k = Pn.alphabet.size();
  for (std::size_t idx = 0; idx < Pn.dim(); ++idx) {
    if (Pn.w[idx] <= 0.0) continue;
    for (int d : decode_string(idx, k, Pn.n))
      if (R(d) <= 0.0)
        throw DomainError("point mass outside the reference support power");
  }

  double eps = tv_distance(Pn, Ppn);
  DivergenceReport lhs_rep = min_kl_to_polytope(Pn, F);
  DivergenceReport rhs_rep = min_kl_to_polytope(Ppn, F);

  ContinuityCheck out;
  double nn = static_cast<double>(Pn.n);
  out.lhs = capped(lhs_rep.value);
  out.rhs = capped(rhs_rep.value) + nn * eps * lg(1.0 / c) + nn * g_func(eps) +
            binary_entropy(std::min(1.0, eps));
  bool both_inf = lhs_rep.status == SolverStatus::capped_infinite &&
                  rhs_rep.status == SolverStatus::capped_infinite;
  out.margin = both_inf ? 0.0 : out.rhs - out.lhs;
  out.pass = out.margin >= -kTolMembership;
  return out;
}

double entropy_continuity_margin(const Distribution& p, const Distribution& q) {
  require_same_space(p, q);
  double c = 1.0 / static_cast<double>(p.alphabet.size());
  double bound = f_aux(c, tv_distance(p, q));
  return bound - std::fabs(entropy(p) - entropy(q));
}

}  // namespace steinlab
