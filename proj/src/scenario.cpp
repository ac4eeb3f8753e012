#include "steinlab/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "steinlab/divergences.hpp"
#include "steinlab/engine.hpp"
#include "steinlab/rng.hpp"
#include "steinlab/types.hpp"

namespace steinlab {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

double param_or(const Scenario& sc, const std::string& key, double fallback) {
  auto it = sc.params.find(key);
  return it == sc.params.end() ? fallback : it->second;
}

bool has_param(const Scenario& sc, const std::string& key) {
  return sc.params.count(key) > 0;
}

void note_add(CheckOutcome& out, const std::string& s) {
  if (s.empty()) return;
  if (!out.note.empty()) out.note += "; ";
  out.note += s;
}

void track_min(double& worst, double m) { worst = std::min(worst, m); }

Distribution random_dist(Rng& rng, const Alphabet& a, double floor_mass) {
  return Distribution(a, rng.simplex_point_interior(a.size(), floor_mass));
}

JointDistribution random_joint(Rng& rng, const Alphabet& a, int n, double floor_mass) {
  int dim = static_cast<int>(joint_dim_checked(a.size(), n));
  return JointDistribution(a, n, rng.simplex_point_interior(dim, floor_mass));
}

bool product_structured(FamilyKind k) {
  return k == FamilyKind::simple_iid || k == FamilyKind::composite_iid ||
         k == FamilyKind::arbitrarily_varying;
}

// Product-only checks exercise the alternative when possible, else the null.
const FamilySpec* pick_product_family(const Scenario& sc) {
  if (product_structured(sc.alt_family.kind)) return &sc.alt_family;
  if (product_structured(sc.null_family.kind)) return &sc.null_family;
  return nullptr;
}

double h2_nats(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return -t * std::log(t) - (1.0 - t) * std::log(1.0 - t);
}

// ---------------------------------------------------------------- checks --

void check_stein_rates(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  SteinSequence seq = stein_sequence(sc.null_family, sc.alt_family, sc.eps, sc.n_max);
  Table t;
  t.name = "stein_rates";
  t.columns = {"n", "rate_" + unit_name() + "_per_copy",
               "converse_cap_" + unit_name() + "_per_copy"};
  double worst = kInfValue;
  for (const RatePoint& rp : seq.rates) {
    t.rows.push_back({static_cast<double>(rp.n), rp.rate, rp.converse_cap});
    if (!is_inf_value(rp.converse_cap)) track_min(worst, rp.converse_cap - rp.rate);
  }
  tabs.push_back(std::move(t));
  if (seq.rates.empty()) {
    out.pass = false;
    note_add(out, "no rate levels computed");
  }
  if (seq.has_target) {
    Table s;
    s.name = "stein_single_letter";
    s.columns = {"target_" + unit_name(), "converse_bound_" + unit_name(),
                 "final_rate_" + unit_name()};
    double fin = seq.rates.empty() ? 0.0 : seq.rates.back().rate;
    s.rows.push_back({seq.single_letter_target, seq.converse_bound, fin});
    tabs.push_back(std::move(s));
  }
  out.margin = worst;
  if (worst < -kTolCertificate) out.pass = false;
  if (seq.truncated) {
    out.capacity = true;
    note_add(out, "rate sequence truncated by a capacity cap");
  }
}

void check_duality_sandwich(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  int samples = static_cast<int>(param_or(sc, "samples", 200));
  double eps = param_or(sc, "sandwich_eps", 0.3);
  double mu = param_or(sc, "sandwich_mu", 0.2);
  if (!(eps > 0.0 && mu > 0.0 && eps + mu < 1.0))
    throw DomainError("sandwich needs 0 < mu <= 1-eps < 1");
  Rng rng = Rng::for_task(sc.seed, "duality-sandwich");
  Table t;
  t.name = "duality_sandwich";
  t.columns = {"trial", "dim", "lower_margin_" + unit_name(), "upper_margin_" + unit_name()};
  double worst = kInfValue;
  for (int i = 0; i < samples; ++i) {
    int dim = 2 + i % 5;
    std::vector<double> p = rng.simplex_point_interior(dim, 1e-3);
    std::vector<double> q = rng.simplex_point_interior(dim, 1e-3);
    SandwichResult res = duality_sandwich_check(p, q, eps, mu);
    t.rows.push_back({static_cast<double>(i), static_cast<double>(dim), res.lower_margin,
                      res.upper_margin});
    track_min(worst, std::min(res.lower_margin, res.upper_margin));
    if (!res.pass) {
      out.pass = false;
      if (out.note.empty()) note_add(out, "sandwich violated at trial " + std::to_string(i));
    }
  }
  out.margin = worst;
  tabs.push_back(std::move(t));
}

void check_converse_bound(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  int samples = static_cast<int>(param_or(sc, "samples", 200));
  Rng rng = Rng::for_task(sc.seed, "converse-bound");
  Table t;
  t.name = "converse_bound";
  t.columns = {"trial", "n", "hull_divergence_" + unit_name(), "d_hyp_" + unit_name(),
               "margin_" + unit_name()};
  double worst = kInfValue;
  for (int i = 0; i < samples; ++i) {
    Alphabet a = Alphabet::of_size(2 + i % 2);
    int n = 1 + (i / 2) % 3;
    int nr = 1 + i % 3;
    int ns = 1 + (i / 3) % 3;
    GeneratedSet R, S;
    R.n = n;
    S.n = n;
    R.convex_flag = true;
    S.convex_flag = true;
    for (int g = 0; g < nr; ++g) R.generators.push_back(random_joint(rng, a, n, 1e-3));
    for (int g = 0; g < ns; ++g) S.generators.push_back(random_joint(rng, a, n, 1e-3));
    DivergenceReport dr = min_kl_between_polytopes(R.hull(), S.hull());
    double D = dr.status == SolverStatus::optimal ? dr.value : kInfValue;
    double dh = d_hyp_sets(R, S, sc.eps);
    // hull-to-hull divergence dominates the rearranged type-II exponent; the
    // additive constant 1 is valid in both log bases
    double margin = D - (-1.0 + (1.0 - sc.eps) * dh);
    t.rows.push_back({static_cast<double>(i), static_cast<double>(n), D, dh, margin});
    track_min(worst, margin);
  }
  out.margin = worst;
  if (worst < -kTolCertificate) out.pass = false;
  tabs.push_back(std::move(t));
}

void check_sanov(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  Table t;
  t.name = "sanov_type_bound";
  t.columns = {"n", "type_index", "ln_weight_nats", "exponent_" + unit_name(),
               "margin_" + unit_name()};
  const FamilySpec* fam = pick_product_family(sc);
  if (fam == nullptr) {
    note_add(out, "no product-structured family in this scenario");
    out.margin = 0.0;
    tabs.push_back(std::move(t));
    return;
  }
  int k = fam->alphabet.size();
  int n_hi = std::min(sc.n_max, k <= 2 ? 10 : 8);
  double worst = kInfValue;
  for (int n = 1; n <= n_hi; ++n) {
    std::vector<TypeVector> types = enumerate_types(fam->alphabet, n);
    for (std::size_t ti = 0; ti < types.size(); ++ti) {
      SanovCheck c = sanov_type_bound_check(*fam, n, types[ti]);
      t.rows.push_back({static_cast<double>(n), static_cast<double>(ti), c.ln_weight,
                        c.exponent, c.margin});
      if (!c.pass) out.pass = false;
      if (!is_inf_value(c.margin)) track_min(worst, c.margin);
    }
  }
  out.margin = worst;
  tabs.push_back(std::move(t));
}

BigInt binom_multiplicative(int a, int b) {
  if (b < 0 || b > a) return BigInt(0);
  BigInt r = 1;
  for (int i = 1; i <= b; ++i) {
    r *= (a - b + i);
    r /= i;
  }
  return r;
}

void check_type_counting(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  std::set<int> sizes = {2, 3};
  if (sc.null_family.alphabet.size() <= 4) sizes.insert(sc.null_family.alphabet.size());
  int n_hi = std::min(sc.n_max, 12);
  Table t;
  t.name = "type_counting";
  t.columns = {"alphabet", "n", "num_types", "counts_consistent", "upper_margin_nats",
               "lower_margin_nats"};
  double worst = kInfValue;
  for (int k : sizes) {
    Alphabet a = Alphabet::of_size(k);
    for (int n = 1; n <= n_hi; ++n) {
      std::vector<TypeVector> types = enumerate_types(a, n);
      BigInt ct = count_types(k, n);
      bool consistent = ct == BigInt(static_cast<unsigned long long>(types.size())) &&
                        ct == binom_multiplicative(n + k - 1, k - 1);
      BigInt total = 0;
      double up = kInfValue;
      double lo = kInfValue;
      for (const TypeVector& V : types) {
        BigInt cls = type_class_size(V);
        total += cls;
        double ln_cls = big_log(cls);
        std::vector<double> w(k);
        for (int x = 0; x < k; ++x) w[x] = static_cast<double>(V.counts[x]) / n;
        double H = entropy_nats(w);
        track_min(up, n * H - ln_cls);
        track_min(lo, ln_cls - (n * H - k * std::log(n + 1.0)));
      }
      BigInt strings = 1;
      for (int i = 0; i < n; ++i) strings *= k;
      consistent = consistent && total == strings;
      if (!consistent) out.pass = false;
      t.rows.push_back({static_cast<double>(k), static_cast<double>(n),
                        ct.convert_to<double>(), consistent ? 1.0 : 0.0, up, lo});
      track_min(worst, std::min(up, lo));
    }
  }
  out.margin = worst;
  if (worst < -kTolProperty) out.pass = false;
  tabs.push_back(std::move(t));
}

void check_hamming(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  int n = static_cast<int>(param_or(sc, "hamming_n", 12));
  n = std::max(2, std::min(n, 16));
  Rng rng = Rng::for_task(sc.seed, "hamming-concentration");
  Alphabet a = Alphabet::binary();
  Table t;
  t.name = "hamming_concentration";
  t.columns = {"trial", "n", "set_mass_target", "eta", "radius", "ball_mass", "margin"};
  double worst = kInfValue;
  const double eps_targets[2] = {0.1, 0.3};
  const double etas[2] = {0.1, 0.5};
  int trial = 0;
  for (int rep = 0; rep < 2; ++rep) {
    Distribution P = random_dist(rng, a, 0.25);
    for (double ep : eps_targets) {
      for (double eta : etas) {
        // grow Y from iid draws until its product mass reaches the target
        std::set<std::size_t> seen;
        std::vector<std::size_t> idx;
        double mass = 0.0;
        int guard = 0;
        while (mass < ep && guard++ < 200000) {
          std::vector<int> s(n);
          double pr = 1.0;
          for (int i = 0; i < n; ++i) {
            s[i] = rng.uniform() < P(0) ? 0 : 1;
            pr *= P(s[i]);
          }
          std::size_t code = encode_string(s, 2);
          if (seen.insert(code).second) {
            idx.push_back(code);
            mass += pr;
          }
        }
        std::sort(idx.begin(), idx.end());
        StringSet Y(a, n, idx);
        int K = static_cast<int>(std::ceil(std::sqrt(2.0 * n * std::log(1.0 / ep)) +
                                           std::sqrt(2.0 * n * std::log(1.0 / eta))));
        double ball = hamming_ball_weight(Y, K, P);
        double margin = ball - (1.0 - eta);
        t.rows.push_back({static_cast<double>(trial++), static_cast<double>(n), ep, eta,
                          static_cast<double>(K), ball, margin});
        track_min(worst, margin);
      }
    }
  }
  out.margin = worst;
  if (worst < -1e-12) out.pass = false;
  tabs.push_back(std::move(t));
}

void check_f_aux(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  (void)sc;
  Table t;
  t.name = "f_aux";
  t.columns = {"c", "x", "value_" + unit_name(), "sup_err", "doubling_margin", "infimum_err"};
  double worst = kInfValue;
  const int nc = 24;
  const int nx = 24;
  for (int i = 0; i < nc; ++i) {
    double c = std::pow(10.0, -3.0 + 3.0 * i / (nc - 1));
    double c2 = std::pow(10.0, -3.0 + 3.0 * ((i + 7) % nc) / (nc - 1));
    double prev = -kInfValue;
    for (int j = 0; j < nx; ++j) {
      double x = 3.0 * j / (nx - 1);
      FAuxVariationalResult r = f_aux_variational_check(c, c2, x);
      double v = f_aux(c, x);
      if (!(r.pass_sup && r.pass_doubling && r.pass_inf)) out.pass = false;
      track_min(worst, kTolCertificate - r.sup_form_err);
      track_min(worst, r.doubling_margin + kTolCertificate);
      track_min(worst, kTolCertificate - r.infimum_err);
      if (prev > -kInfValue) track_min(worst, v - prev + 1e-12);  // nondecreasing in x
      if (prev > -kInfValue && v + 1e-12 < prev) out.pass = false;
      prev = v;
      t.rows.push_back({c, x, v, r.sup_form_err, r.doubling_margin, r.infimum_err});
    }
  }
  out.margin = worst;
  tabs.push_back(std::move(t));
}

void check_continuity(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  int samples = static_cast<int>(param_or(sc, "samples", 200));
  Rng rng = Rng::for_task(sc.seed, "continuity-bounds");
  Table t;
  t.name = "relent_continuity";
  t.columns = {"trial", "n", "tv", "lhs_" + unit_name(), "rhs_" + unit_name(),
               "margin_" + unit_name()};
  Table te;
  te.name = "entropy_continuity";
  te.columns = {"trial", "dim", "margin_" + unit_name()};
  double worst = kInfValue;
  const double mixes[4] = {0.0, 0.01, 0.1, 0.4};
  for (int i = 0; i < samples; ++i) {
    Alphabet a = Alphabet::of_size(2 + i % 2);
    int k = a.size();
    int n = 1 + (i / 2) % 3;
    Distribution R = random_dist(rng, a, 0.08);
    double c = R(0);
    for (int x = 1; x < k; ++x) c = std::min(c, R(x));
    // the reference distribution is itself a generator, so the hull is stable
    // under the symbol-wise blur used by the bound
    std::vector<Distribution> base = {R, random_dist(rng, a, 1e-3), random_dist(rng, a, 1e-3)};
    FamilySpec av = FamilySpec::make_arbitrarily_varying(base);
    Polytope F = realize(av, n).hull();
    JointDistribution Pn = random_joint(rng, a, n, 1e-4);
    JointDistribution Z = random_joint(rng, a, n, 1e-4);
    double u = mixes[i % 4];
    std::vector<double> w(Pn.w.size());
    for (std::size_t x = 0; x < w.size(); ++x) w[x] = (1.0 - u) * Pn.w[x] + u * Z.w[x];
    JointDistribution Ppn(a, n, w);
    ContinuityCheck res = relent_continuity_bound_check(Pn, Ppn, F, R, c);
    double tv = tv_distance(Pn, Ppn);
    t.rows.push_back({static_cast<double>(i), static_cast<double>(n), tv, res.lhs, res.rhs,
                      res.margin});
    if (!res.pass) out.pass = false;
    track_min(worst, res.margin);
    Distribution p1(a, rng.simplex_point(k));
    Distribution q1(a, rng.simplex_point(k));
    double em = entropy_continuity_margin(p1, q1);
    te.rows.push_back({static_cast<double>(i), static_cast<double>(k), em});
    track_min(worst, em);
  }
  out.margin = worst;
  if (worst < -kTolCertificate) out.pass = false;
  tabs.push_back(std::move(t));
  tabs.push_back(std::move(te));
}

void check_definetti_type(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  int samples = static_cast<int>(param_or(sc, "definetti_samples", 60));
  Rng rng = Rng::for_task(sc.seed, "definetti-type-bound");
  Table t;
  t.name = "definetti_type_bound";
  t.columns = {"trial", "alphabet", "n", "max_ratio", "allowance"};
  double worst = kInfValue;
  for (int i = 0; i < samples; ++i) {
    Alphabet a = Alphabet::of_size(2 + i % 2);
    int k = a.size();
    int span = (k == 2 ? 6 : 5) - 1;  // n in [2, 6] binary, [2, 5] ternary
    int n = 2 + (i / 2) % span;
    JointDistribution Qn = [&]() {
      std::size_t dim = joint_dim_checked(k, n);
      std::vector<double> acc(dim, 0.0);
      if (i % 2 == 0) {
        int comps = 1 + (i / 4) % 3;
        std::vector<double> wts = rng.simplex_point(comps);
        for (int cI = 0; cI < comps; ++cI) {
          JointDistribution pw = iid_power(random_dist(rng, a, 1e-4), n);
          for (std::size_t x = 0; x < dim; ++x) acc[x] += wts[cI] * pw.w[x];
        }
      } else {
        JointDistribution Z = random_joint(rng, a, n, 1e-6);
        std::vector<int> pi(n);
        for (int j = 0; j < n; ++j) pi[j] = j + 1;
        double cnt = 0.0;
        do {
          JointDistribution Pz = permute(Z, pi);
          for (std::size_t x = 0; x < dim; ++x) acc[x] += Pz.w[x];
          cnt += 1.0;
        } while (std::next_permutation(pi.begin(), pi.end()));
        for (double& v : acc) v /= cnt;
      }
      return JointDistribution(a, n, acc);
    }();
    DeFinettiCertificate cert = definetti_type_bound(Qn);
    t.rows.push_back({static_cast<double>(i), static_cast<double>(k), static_cast<double>(n),
                      cert.max_ratio, cert.allowance});
    if (!cert.pass) out.pass = false;
    track_min(worst, cert.allowance - cert.max_ratio);
  }
  out.margin = worst;
  tabs.push_back(std::move(t));
}

void check_definetti_mc(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  out.hard = false;  // sampled coverage estimate, not a certified bound
  const FamilySpec* fam = pick_product_family(sc);
  if (fam == nullptr) {
    note_add(out, "no product-structured family; diagnostic skipped");
    out.margin = 0.0;
    return;
  }
  int samples = static_cast<int>(param_or(sc, "mc_samples", 50000));
  double allowance = param_or(sc, "mc_delta", 1.0);
  double threshold = param_or(sc, "mc_coverage", 0.9);
  int n = std::min(sc.n_max, 3);
  Rng rng = Rng::for_task(sc.seed, "definetti-constrained-mc");
  GeneratedSet lvl1 = realize(*fam, 1);
  std::vector<double> wts = rng.simplex_point(static_cast<int>(lvl1.generators.size()));
  std::size_t dim = joint_dim_checked(fam->alphabet.size(), n);
  std::vector<double> acc(dim, 0.0);
  for (std::size_t g = 0; g < lvl1.generators.size(); ++g) {
    JointDistribution pw = iid_power(as_single(lvl1.generators[g]), n);
    for (std::size_t x = 0; x < dim; ++x) acc[x] += wts[g] * pw.w[x];
  }
  JointDistribution Qn(fam->alphabet, n, acc);
  DeFinettiMonteCarlo res = definetti_constrained_check(Qn, *fam, allowance, samples, sc.seed);
  Table t;
  t.name = "definetti_mc";
  t.columns = {"n", "samples", "coverage", "worst_ratio"};
  t.rows.push_back({static_cast<double>(n), static_cast<double>(samples), res.coverage,
                    res.worst_ratio});
  out.margin = res.coverage - threshold;
  out.pass = res.coverage >= threshold;
  note_add(out, res.note);
  tabs.push_back(std::move(t));
}

void check_filtered(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  const FamilySpec* fam = nullptr;
  if (sc.alt_family.kind == FamilyKind::werner_gamma) fam = &sc.alt_family;
  else if (sc.null_family.kind == FamilyKind::werner_gamma) fam = &sc.null_family;
  else fam = pick_product_family(sc);
  if (fam == nullptr) {
    note_add(out, "no compatible family; skipped");
    out.margin = 0.0;
    return;
  }
  int samples = static_cast<int>(param_or(sc, "samples", 100));
  Rng rng = Rng::for_task(sc.seed, "filtered-superadditivity");
  StochasticChannel W = [&]() {
    if (fam->kind == FamilyKind::werner_gamma) return werner_channel(fam->gamma);
    std::vector<double> u(fam->alphabet.size(), 1.0 / fam->alphabet.size());
    return depolarizing_channel(0.3, Distribution(fam->alphabet, u));
  }();
  Table t;
  t.name = "filtered_superadditivity";
  t.columns = {"trial", "n", "lhs_" + unit_name(), "rhs_" + unit_name(),
               "margin_" + unit_name()};
  double worst = kInfValue;
  for (int i = 0; i < samples; ++i) {
    int n = 2 + i % 2;
    std::vector<Distribution> Ps;
    for (int j = 0; j < n; ++j) Ps.push_back(random_dist(rng, fam->alphabet, 1e-3));
    BoundCheck res = filtered_superadditivity_check(*fam, Ps, W);
    t.rows.push_back({static_cast<double>(i), static_cast<double>(n), res.lhs, res.rhs,
                      res.margin});
    if (!res.pass) out.pass = false;
    if (!is_inf_value(res.margin)) track_min(worst, res.margin);
  }
  out.margin = worst;
  tabs.push_back(std::move(t));
}

void check_werner_gap(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  double gamma = param_or(sc, "gamma", 2.0);
  if (sc.alt_family.kind == FamilyKind::werner_gamma) gamma = sc.alt_family.gamma;
  else if (sc.null_family.kind == FamilyKind::werner_gamma) gamma = sc.null_family.gamma;
  FamilySpec fam = FamilySpec::make_werner(gamma);
  Alphabet a = Alphabet::binary();
  Distribution P(a, {1.0, 0.0});
  double worst = kInfValue;

  DivergenceReport r1 = min_kl_to_polytope(as_joint(P), realize(fam, 1).hull());
  double v1 = r1.status == SolverStatus::optimal ? r1.value : kInfValue;
  double target1 = units_from_nats(std::log(2.0));
  track_min(worst, 1e-6 - std::abs(v1 - target1));

  // hand-picked two-copy member: mass split between 00 and 11
  std::vector<double> q2 = {1.0 / (gamma + 1.0), 0.0, 0.0, gamma / (gamma + 1.0)};
  JointDistribution Q2(a, 2, q2);
  if (!werner_membership(Q2, gamma)) {
    out.pass = false;
    note_add(out, "two-copy candidate rejected by the membership predicate");
  }
  double ansatz = 0.5 * units_from_nats(std::log(gamma + 1.0));
  double direct = 0.5 * kl(iid_power(P, 2), Q2);
  track_min(worst, 1e-9 - std::abs(direct - ansatz));

  DivergenceReport r2 = min_kl_to_polytope(iid_power(P, 2), realize(fam, 2).hull());
  double v2 = 0.5 * (r2.status == SolverStatus::optimal ? r2.value : kInfValue);
  track_min(worst, ansatz + 1e-6 - v2);  // candidate is feasible, optimum cannot exceed it
  double gap = v1 - v2;
  if (gamma < 3.0) track_min(worst, gap - 1e-9);  // strictly subadditive regime

  Table t;
  t.name = "werner_gap";
  t.columns = {"gamma", "level1_" + unit_name(), "level2_half_" + unit_name(),
               "candidate_half_" + unit_name(), "additivity_gap_" + unit_name()};
  t.rows.push_back({gamma, v1, v2, ansatz, gap});
  out.margin = worst;
  if (worst < 0.0) out.pass = false;
  tabs.push_back(std::move(t));
}

void check_blur(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  int X = std::max(2, sc.null_family.alphabet.size());
  double c = param_or(sc, "blur_c", 0.5);
  double eta = param_or(sc, "blur_eta", 0.5);
  double worst = kInfValue;

  Table tp;
  tp.name = "blur_phi";
  tp.columns = {"xi", "phi_" + unit_name()};
  const double xis[8] = {0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.003, 0.001};
  double prev = kInfValue;
  for (double xi : xis) {
    double ph = blur_phi(xi, c, X);
    tp.rows.push_back({xi, ph});
    track_min(worst, ph + 1e-12);             // nonnegative
    track_min(worst, prev - ph + 1e-9);       // shrinks with the noise width
    prev = ph;
  }
  tabs.push_back(std::move(tp));

  Table to;
  to.name = "blur_o_tilde";
  to.columns = {"n", "value_" + unit_name()};
  const int ns[5] = {10, 100, 1000, 10000, 100000};
  double prevo = kInfValue;
  for (int n : ns) {
    double v = blur_o_tilde(X, eta, n);
    to.rows.push_back({static_cast<double>(n), v});
    track_min(worst, v);
    track_min(worst, prevo - v);
    prevo = v;
  }
  track_min(worst, 0.02 - blur_o_tilde(X, eta, 100000));
  tabs.push_back(std::move(to));

  Table tt;
  tt.name = "blur_theta";
  tt.columns = {"xi", "n", "theta", "theta_ref"};
  for (double xi : {0.2, 0.05, 0.01}) {
    for (int n : {5, 50, 500}) {
      double th = blur_theta(X, eta, xi, n);
      // reference recomputation entirely in natural logs
      double inside = 4.0 * xi * std::log(static_cast<double>(X)) +
                      2.0 * (3.0 * xi * std::log(X / xi) + h2_nats(3.0 * xi)) +
                      2.0 * X * std::log(n + 1.0) / n;
      double ref = std::sqrt(inside) + std::sqrt(2.0 * std::log(1.0 / eta) / n) + 2.0 * xi;
      tt.rows.push_back({xi, static_cast<double>(n), th, ref});
      track_min(worst, 1e-12 - std::abs(th - ref));
    }
  }
  tabs.push_back(std::move(tt));

  MetaLemmaInputs in;
  in.lambda = 0.37;
  in.xi = 0.05;
  in.delta = 0.2;
  in.c = c;
  in.alphabet_size = X;
  double rhs = meta_lemma_rhs(in);
  double ref = in.lambda + blur_phi(in.xi, in.c, X) + in.delta;
  track_min(worst, 1e-12 - std::abs(rhs - ref));

  Table tm;
  tm.name = "blur_meta";
  tm.columns = {"n", "rhs_at_n_" + unit_name()};
  in.o_l = 1.0;
  in.o_r = 1.0;
  double first = 0.0;
  double last = 0.0;
  for (int n : ns) {
    in.n = n;
    double v = meta_lemma_rhs_at_n(in, eta);
    tm.rows.push_back({static_cast<double>(n), v});
    track_min(worst, v - in.lambda);  // additive noise terms stay nonnegative
    if (n == ns[0]) first = v;
    last = v;
  }
  track_min(worst, first - last - 1e-12);  // widths shrink as n grows
  tabs.push_back(std::move(tm));

  out.margin = worst;
  if (worst < 0.0) out.pass = false;
}

void check_axioms(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  int samples = static_cast<int>(param_or(sc, "probe_samples", 12));
  Table t;
  t.name = "axiom_probes";
  t.columns = {"family", "axiom", "n", "trials", "worst_margin", "pass"};
  double worst = kInfValue;
  const FamilySpec* fams[2] = {&sc.null_family, &sc.alt_family};
  for (int fi = 0; fi < 2; ++fi) {
    const FamilySpec& f = *fams[fi];
    int n_probe = std::min(3, std::max(1, sc.n_max));
    if (f.kind == FamilyKind::explicit_levels && !f.levels.empty())
      n_probe = f.levels.begin()->first;
    std::vector<std::pair<std::string, int>> plan = {
        {"I", n_probe}, {"II", n_probe}, {"III", n_probe}};
    if (product_structured(f.kind)) {
      int n_decay = std::min(sc.n_max, 6);
      while (n_decay > 1 &&
             std::pow(static_cast<double>(f.base.size()), n_decay) > 1e5)
        --n_decay;
      plan.emplace_back("IV-sanov-surrogate", n_decay);
    }
    for (const auto& [ax, n] : plan) {
      double axid = ax == "I" ? 1 : ax == "II" ? 2 : ax == "III" ? 3 : 4;
      try {
        AxiomProbeReport rep = axiom_probe(f, ax, n, samples, sc.seed);
        t.rows.push_back({static_cast<double>(fi), axid, static_cast<double>(n),
                          static_cast<double>(rep.trials), rep.worst_margin,
                          rep.pass ? 1.0 : 0.0});
        if (!rep.pass) {
          out.pass = false;
          if (!rep.notes.empty()) note_add(out, rep.notes[0]);
        }
        track_min(worst, rep.worst_margin);
      } catch (const DomainError& e) {
        note_add(out, ax + " skipped: " + e.what());
      }
    }
  }
  out.margin = worst;
  tabs.push_back(std::move(t));
}

void check_single_letter(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  const FamilySpec* fam = pick_product_family(sc);
  if (fam == nullptr) {
    note_add(out, "no product-structured family; skipped");
    out.margin = 0.0;
    return;
  }
  int draws = static_cast<int>(param_or(sc, "sl_draws", 2));
  int n_hi = std::min(sc.n_max, 8);
  double allow = param_or(sc, "sl_gap", 0.5);
  Rng rng = Rng::for_task(sc.seed, "single-letterization");
  Table t;
  t.name = "single_letterization";
  t.columns = {"draw", "n", "value_" + unit_name(), "target_" + unit_name()};
  double worst = kInfValue;
  for (int d = 0; d < draws; ++d) {
    Distribution P = random_dist(rng, fam->alphabet, 1e-3);
    SingleLetterSequence res = single_letterization_check(*fam, P, n_hi, allow);
    for (std::size_t i = 0; i < res.values.size(); ++i)
      t.rows.push_back({static_cast<double>(d), static_cast<double>(i + 1), res.values[i],
                        res.target});
    if (!res.pass) out.pass = false;
    if (res.truncated) {
      out.capacity = true;
      note_add(out, "levels truncated by a capacity cap");
    }
    if (!is_inf_value(res.target)) {
      for (double v : res.values) track_min(worst, res.target + 1e-6 - v);
      if (!res.values.empty() && !is_inf_value(res.values.back()))
        track_min(worst, allow - res.final_gap);
    }
  }
  out.margin = worst;
  tabs.push_back(std::move(t));
}

void check_transition(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  int samples = static_cast<int>(param_or(sc, "samples", 60));
  Rng rng = Rng::for_task(sc.seed, "transition-bound");
  Table t;
  t.name = "transition_bound";
  t.columns = {"trial", "n", "delta", "distance", "margin_" + unit_name()};
  double worst = kInfValue;
  const double fractions[3] = {0.3, 0.7, 1.0};
  for (int i = 0; i < samples; ++i) {
    Alphabet a = Alphabet::of_size(2 + i % 2);
    int k = a.size();
    int n = 1 + i % 10;
    Distribution R = random_dist(rng, a, 0.05);
    double c = R(0);
    for (int x = 1; x < k; ++x) c = std::min(c, R(x));
    double delta = fractions[i % 3] / (c + 1.0);
    std::vector<int> x(n), y(n);
    for (int j = 0; j < n; ++j) {
      x[j] = rng.uniform_int(k);
      y[j] = (i % 5 == 0) ? x[j] : rng.uniform_int(k);
    }
    BoundCheck res = transition_bound_check(x, y, R, c, delta);
    t.rows.push_back({static_cast<double>(i), static_cast<double>(n), delta,
                      static_cast<double>(hamming_distance(x, y)), res.margin});
    if (!res.pass) out.pass = false;
    if (!is_inf_value(res.margin)) track_min(worst, res.margin);
  }
  out.margin = worst;
  tabs.push_back(std::move(t));
}

void check_string_mass(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  int samples = static_cast<int>(param_or(sc, "samples", 60));
  Rng rng = Rng::for_task(sc.seed, "string-mass-nearby-type");
  Table t;
  t.name = "string_mass";
  t.columns = {"trial", "n", "distance", "margin_" + unit_name()};
  double worst = kInfValue;
  for (int i = 0; i < samples; ++i) {
    Alphabet a = Alphabet::of_size(2 + i % 2);
    int k = a.size();
    int n = 1 + i % 12;
    std::vector<double> w = rng.simplex_point(k);
    if (i % 6 == 5) {
      // exercise the zero-mass branch
      double rest = 1.0 - w[0];
      w[0] = 0.0;
      for (int x = 1; x < k; ++x) w[x] /= rest;
    }
    Distribution P(a, w);
    std::vector<int> x(n), y(n);
    for (int j = 0; j < n; ++j) {
      x[j] = rng.uniform_int(k);
      y[j] = (i % 4 == 0) ? x[j] : rng.uniform_int(k);
    }
    BoundCheck res = string_mass_nearby_type_check(x, y, P);
    t.rows.push_back({static_cast<double>(i), static_cast<double>(n),
                      static_cast<double>(hamming_distance(x, y)), res.margin});
    if (!res.pass) out.pass = false;
    if (!is_inf_value(res.margin)) track_min(worst, res.margin);
  }
  out.margin = worst;
  tabs.push_back(std::move(t));
}

void check_type_distance(const Scenario& sc, CheckOutcome& out, std::vector<Table>& tabs) {
  double delta = param_or(sc, "td_delta", 0.1);
  int n_hi = std::min(sc.n_max, 10);
  int k = sc.null_family.alphabet.size();
  GeneratedSet R1 = realize(sc.null_family, 1);
  TypeDistanceTest test;
  for (const JointDistribution& g : R1.generators) test.generators.push_back(as_single(g));
  test.delta = delta;
  bool iid_cap = sc.null_family.kind == FamilyKind::simple_iid ||
                 sc.null_family.kind == FamilyKind::composite_iid;
  Table t;
  t.name = "type_distance";
  t.columns = {"n", "alpha", "alpha_cap", "beta", "beta_exponent_" + unit_name()};
  double worst = kInfValue;
  double last_exp = kInfValue;
  for (int n = 1; n <= n_hi; ++n) {
    GeneratedSet Rn, Sn;
    try {
      Rn = realize(sc.null_family, n);
      Sn = realize(sc.alt_family, n);
    } catch (const CapacityError&) {
      note_add(out, "levels beyond n=" + std::to_string(n - 1) + " skipped (capacity)");
      break;
    }
    double alpha = type_test_alpha(test, Rn);
    double beta = type_test_beta(test, Sn);
    // polynomial count of types times the two-sided concentration exponent
    double cap = iid_cap ? std::pow(n + 1.0, k) * std::exp(-2.0 * n * delta * delta)
                         : kInfValue;
    double bexp = beta > 0.0 ? -lg(beta) / n : kInfValue;
    t.rows.push_back({static_cast<double>(n), alpha, cap, beta, bexp});
    if (iid_cap) {
      track_min(worst, cap - alpha + 1e-12);
      if (alpha > cap + 1e-12) out.pass = false;
    }
    last_exp = bexp;
  }
  if (has_param(sc, "beta_floor")) {
    double fl = param_or(sc, "beta_floor", 0.0);
    track_min(worst, last_exp - fl);
    if (last_exp < fl) out.pass = false;
  }
  out.margin = worst;
  tabs.push_back(std::move(t));
}

// -------------------------------------------------------------- registry --

using CheckFn = void (*)(const Scenario&, CheckOutcome&, std::vector<Table>&);

struct RegistryEntry {
  CheckInfo info;
  CheckFn fn;
};

const std::vector<RegistryEntry>& registry_entries() {
  static const std::vector<RegistryEntry> v = {
      {{"stein-rates",
        "per-copy testing rates of the family pair with converse caps and the "
        "single-letter value when one applies"},
       &check_stein_rates},
      {{"duality-sandwich",
        "two-sided bracketing of the testing divergence by smoothed max-divergences "
        "on random pairs"},
       &check_duality_sandwich},
      {{"converse-bound",
        "hull-to-hull divergence dominates the rearranged type-II exponent on random "
        "generated sets"},
       &check_converse_bound},
      {{"sanov-type-bound",
        "exact family type-class weights decay at the single-copy divergence exponent"},
       &check_sanov},
      {{"type-counting",
        "exact type counts, total class sizes, and the entropy sandwich for class "
        "cardinalities"},
       &check_type_counting},
      {{"hamming-concentration",
        "sets holding a mass target capture most mass after a square-root-radius "
        "Hamming blowup"},
       &check_hamming},
      {{"f-aux-identities",
        "variational form, doubling, infimum form, and monotonicity of the envelope "
        "function"},
       &check_f_aux},
      {{"continuity-bounds",
        "entropy and hull-divergence continuity in total variation with explicit "
        "constants"},
       &check_continuity},
      {{"definetti-type-bound",
        "permutation-symmetric states sit below the polynomial envelope of type "
        "product mixtures"},
       &check_definetti_type},
      {{"definetti-constrained-mc",
        "sampled mixture envelope with divergence-damped weights covers a family "
        "member (diagnostic)"},
       &check_definetti_mc},
      {{"filtered-superadditivity",
        "hull divergence grows by at least the channel-filtered single-copy term per "
        "extra factor"},
       &check_filtered},
      {{"werner-gap",
        "level-1 value log 2 against the strictly smaller two-copy per-copy value of "
        "the constrained set"},
       &check_werner_gap},
      {{"blur-constants",
        "noise-width constants: nonnegative, shrinking, and consistent across "
        "independent evaluations"},
       &check_blur},
      {{"axiom-probes",
        "randomized closure probes: blur stability, tensor powers of generators, "
        "permutation invariance, type decay"},
       &check_axioms},
      {{"single-letterization",
        "per-copy hull projection of product sources approaches the level-1 value "
        "from below"},
       &check_single_letter},
      {{"transition-bound",
        "exact symbol-wise noising probabilities dominate the distance-based floor"},
       &check_transition},
      {{"string-mass-nearby-type",
        "per-string product mass is controlled by nearby type-class size and the "
        "envelope function"},
       &check_string_mass},
      {{"type-distance-test",
        "type-proximity test: exact worst-case errors and exponential type-I decay"},
       &check_type_distance},
  };
  return v;
}

const RegistryEntry* find_check(const std::string& id) {
  for (const RegistryEntry& e : registry_entries())
    if (e.info.id == id) return &e;
  return nullptr;
}

double sanitize(double v) {
  if (std::isnan(v)) return -kInfValue;
  if (std::isinf(v)) return v > 0 ? kInfValue : -kInfValue;
  return v;
}

// ------------------------------------------------------------------ io --

std::string csv_of(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << t.columns[i] << (i + 1 < t.columns.size() ? "," : "\n");
  char buf[40];
  for (const std::vector<double>& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.12g", row[i]);
      os << buf << (i + 1 < row.size() ? "," : "\n");
    }
  }
  return os.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("cannot write " + tmp);
    f << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> infos = []() {
    std::vector<CheckInfo> v;
    for (const RegistryEntry& e : registry_entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

bool Report::all_hard_pass() const {
  for (const CheckOutcome& o : outcomes)
    if (o.hard && !o.pass && !o.capacity) return false;
  return true;
}

bool Report::any_capacity() const {
  for (const CheckOutcome& o : outcomes)
    if (o.capacity) return true;
  return false;
}

Report run_scenario(const Scenario& sc, int jobs) {
  if (sc.has_log_base) set_log_base(sc.log_base);
  struct Slot {
    CheckOutcome out;
    std::vector<Table> tabs;
  };
  std::vector<Slot> slots(sc.checks.size());
  std::atomic<std::size_t> cursor{0};
  auto work = [&]() {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= sc.checks.size()) return;
      Slot& sl = slots[i];
      sl.out.check = sc.checks[i];
      const RegistryEntry* entry = find_check(sc.checks[i]);
      auto t0 = std::chrono::steady_clock::now();
      try {
        if (entry == nullptr) throw DomainError("unknown check: " + sc.checks[i]);
        entry->fn(sc, sl.out, sl.tabs);
      } catch (const CapacityError& e) {
        sl.out.capacity = true;
        sl.out.pass = false;
        sl.out.hard = false;
        note_add(sl.out, std::string("capacity: ") + e.what());
      } catch (const std::exception& e) {
        sl.out.pass = false;
        note_add(sl.out, std::string("error: ") + e.what());
      }
      sl.out.margin = sanitize(sl.out.margin);
      sl.out.runtime_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs <= 0) jobs = std::max(1, hw);
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(sc.checks.size())));
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  Report rep;
  rep.scenario_name = sc.name;
  rep.seed = sc.seed;
  for (Slot& sl : slots) {
    rep.outcomes.push_back(std::move(sl.out));
    for (Table& t : sl.tabs) rep.tables.push_back(std::move(t));
  }
  return rep;
}

// ------------------------------------------------------------- parsing --

namespace {

PhiSpec phi_from_json(const json& j) {
  PhiSpec ph;
  std::string k = j.at("kind").get<std::string>();
  if (k == "constant") {
    ph.kind = PhiSpec::Kind::constant;
    ph.value = j.at("value").get<int>();
  } else if (k == "sqrt_ceil") {
    ph.kind = PhiSpec::Kind::sqrt_ceil;
  } else if (k == "log2_ceil") {
    ph.kind = PhiSpec::Kind::log2_ceil;
  } else {
    throw DomainError("unknown phi kind: " + k);
  }
  return ph;
}

FamilySpec family_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  Alphabet alph = Alphabet::binary();
  if (j.contains("alphabet")) {
    const json& a = j.at("alphabet");
    if (a.is_number_integer()) alph = Alphabet::of_size(a.get<int>());
    else if (a.is_array()) alph = Alphabet(a.get<std::vector<std::string>>());
    else throw DomainError("alphabet must be an integer size or an array of symbols");
  }
  auto dist_of = [&](const json& arr) {
    return Distribution(alph, arr.get<std::vector<double>>());
  };
  auto base_of = [&](const json& arr) {
    std::vector<Distribution> base;
    for (const json& row : arr) base.push_back(dist_of(row));
    return base;
  };
  FamilySpec spec;
  if (kind == "simple_iid") {
    spec = FamilySpec::make_simple_iid(dist_of(j.at("p")));
  } else if (kind == "composite_iid") {
    spec = FamilySpec::make_composite_iid(base_of(j.at("base")));
  } else if (kind == "arbitrarily_varying") {
    spec = FamilySpec::make_arbitrarily_varying(base_of(j.at("base")));
  } else if (kind == "almost_iid") {
    spec = FamilySpec::make_almost_iid(dist_of(j.at("p")), phi_from_json(j.at("phi")));
  } else if (kind == "werner_gamma") {
    spec = FamilySpec::make_werner(j.at("gamma").get<double>());
  } else if (kind == "explicit_levels") {
    if (!j.contains("alphabet")) throw DomainError("explicit_levels needs an alphabet");
    std::map<int, std::vector<JointDistribution>> levels;
    for (const auto& [key, val] : j.at("levels").items()) {
      int lvl = 0;
      try {
        lvl = std::stoi(key);
      } catch (...) {
        throw DomainError("level keys must be integers, got: " + key);
      }
      if (lvl < 1) throw DomainError("level keys must be positive");
      std::vector<JointDistribution> gens;
      for (const json& row : val)
        gens.emplace_back(alph, lvl, row.get<std::vector<double>>());
      levels[lvl] = std::move(gens);
    }
    spec = FamilySpec::make_explicit(alph, std::move(levels));
  } else {
    throw DomainError("unknown family kind: " + kind);
  }
  spec.validate();
  return spec;
}

}  // namespace

Scenario parse_scenario_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  try {
    Scenario sc;
    sc.schema_version = j.at("schema_version").get<int>();
    if (sc.schema_version != 1) throw DomainError("unsupported schema_version");
    sc.name = j.at("name").get<std::string>();
    if (sc.name.empty()) throw DomainError("name must be nonempty");
    for (char c : sc.name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
        throw DomainError("name may contain only letters, digits, '-', '_'");
    sc.seed = j.value("seed", static_cast<std::uint64_t>(1));
    sc.eps = j.value("eps", 0.1);
    if (!(sc.eps > 0.0 && sc.eps < 1.0)) throw DomainError("eps must lie in (0,1)");
    sc.n_max = j.value("n_max", 4);
    if (sc.n_max < 1 || sc.n_max > 32) throw DomainError("n_max must lie in [1,32]");
    if (j.contains("log_base")) {
      const json& lb = j.at("log_base");
      sc.has_log_base = true;
      if (lb.is_string() && lb.get<std::string>() == "2") sc.log_base = LogBase::two;
      else if (lb.is_string() && lb.get<std::string>() == "e") sc.log_base = LogBase::e;
      else if (lb.is_number() && lb.get<double>() == 2.0) sc.log_base = LogBase::two;
      else throw DomainError("log_base must be \"2\", \"e\", or 2");
    }
    sc.null_family = family_from_json(j.at("null_family"));
    sc.alt_family = family_from_json(j.at("alt_family"));
    sc.checks = j.at("checks").get<std::vector<std::string>>();
    if (sc.checks.empty()) throw DomainError("checks must be nonempty");
    std::set<std::string> seen;
    for (const std::string& id : sc.checks) {
      if (find_check(id) == nullptr) throw DomainError("unknown check: " + id);
      if (!seen.insert(id).second) throw DomainError("duplicate check: " + id);
    }
    if (j.contains("params")) {
      for (const auto& [key, val] : j.at("params").items()) {
        if (!val.is_number()) throw DomainError("param " + key + " must be numeric");
        sc.params[key] = val.get<double>();
      }
    }
    return sc;
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_json(ss.str());
}

// ------------------------------------------------------------ cli layer --

namespace {

std::string summary_json(const Scenario& sc, const Report& rep,
                         const std::vector<std::string>& table_files) {
  ojson js;
  js["schema_version"] = 1;
  js["tool"] = "stein-lab";
  js["tool_version"] = "1.0.0";
  js["scenario"] = sc.name;
  js["seed"] = sc.seed;
  js["units"] = unit_name();
  js["eps"] = sc.eps;
  js["n_max"] = sc.n_max;
  js["checks"] = ojson::array();
  for (const CheckOutcome& o : rep.outcomes) {
    ojson c;
    c["check"] = o.check;
    c["pass"] = o.pass;
    c["hard"] = o.hard;
    c["capacity"] = o.capacity;
    c["margin"] = o.margin;
    c["note"] = o.note;
    js["checks"].push_back(c);
  }
  js["all_hard_pass"] = rep.all_hard_pass();
  js["capacity_truncated"] = rep.any_capacity();
  js["tables"] = table_files;
  // volatile timings live under one key so byte-stability checks can drop it
  ojson rt;
  for (const CheckOutcome& o : rep.outcomes) rt[o.check] = o.runtime_seconds;
  js["runtimes_seconds"] = rt;
  return js.dump(2) + "\n";
}

}  // namespace

int run_scenario_files(const std::string& config_path, const std::string& out_dir,
                       int jobs, bool has_seed_override, std::uint64_t seed_override) {
  Scenario sc;
  try {
    sc = parse_scenario_file(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  if (has_seed_override) sc.seed = seed_override;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "cannot create output directory %s: %s\n", out_dir.c_str(),
                 ec.message().c_str());
    return 2;
  }
  Report rep = run_scenario(sc, jobs);
  std::vector<std::string> table_files;
  try {
    for (const Table& t : rep.tables) {
      std::string fname = sc.name + "-" + t.name + ".csv";
      write_text_atomic(out_dir + "/" + fname, csv_of(t));
      table_files.push_back(fname);
    }
    write_text_atomic(out_dir + "/" + sc.name + "-summary.json",
                      summary_json(sc, rep, table_files));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "output error: %s\n", e.what());
    return 2;
  }
  for (const CheckOutcome& o : rep.outcomes) {
    const char* tag = o.capacity ? "CAP " : (o.pass ? "PASS" : "FAIL");
    std::printf("[%s] %-26s margin=%-12.6g %.2fs%s%s\n", tag, o.check.c_str(), o.margin,
                o.runtime_seconds, o.note.empty() ? "" : "  ", o.note.c_str());
  }
  bool hard_ok = rep.all_hard_pass();
  std::printf("scenario %s: %s (units=%s)\n", sc.name.c_str(),
              hard_ok ? (rep.any_capacity() ? "CAPACITY-TRUNCATED" : "PASS") : "FAIL",
              unit_name().c_str());
  if (!hard_ok) return 1;
  if (rep.any_capacity()) return 3;
  return 0;
}

}  // namespace steinlab
