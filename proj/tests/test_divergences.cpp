#include <cmath>
#include <doctest.h>
#include <vector>

#include "oracles.hpp"
#include "steinlab/alphabet.hpp"
#include "steinlab/divergences.hpp"
#include "steinlab/rng.hpp"

using namespace steinlab;

namespace {

Distribution bin(double p0) {
  return Distribution(Alphabet::binary(), {p0, 1.0 - p0});
}

Distribution rand_interior(Rng& rng, int dim) {
  Alphabet a = Alphabet::of_size(dim);
  return Distribution(a, rng.simplex_point_interior(dim, 0.1));
}

}  // namespace

TEST_CASE("relative entropy basics") {
  set_log_base(LogBase::e);
  Distribution p = bin(0.3);
  CHECK(kl(p, p) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kl(bin(1.0), bin(0.5)) == doctest::Approx(std::log(2.0)));

  Distribution u3(Alphabet::ternary(), {1.0 / 3, 1.0 / 3, 1.0 / 3});
  Distribution e3(Alphabet::ternary(), {1.0, 0.0, 0.0});
  CHECK(kl(e3, u3) == doctest::Approx(std::log(3.0)));

  CHECK(is_inf_value(kl(bin(0.5), bin(1.0))));

  set_log_base(LogBase::two);
  CHECK(kl(bin(1.0), bin(0.5)) == doctest::Approx(1.0));
}

TEST_CASE("max divergence dominates relative entropy") {
  set_log_base(LogBase::e);
  Distribution p = bin(0.4);
  CHECK(d_max(p, p) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d_max(bin(1.0), bin(0.5)) == doctest::Approx(std::log(2.0)));

  Rng rng(501);
  for (int t = 0; t < 1000; ++t) {
    int dim = 2 + rng.uniform_int(2);
    Distribution a = rand_interior(rng, dim);
    Distribution b = rand_interior(rng, dim);
    CHECK(d_max(a, b) >= kl(a, b) - 1e-10);
  }
}

TEST_CASE("smoothed max divergence") {
  set_log_base(LogBase::e);
  Distribution p = bin(1.0);
  Distribution q = bin(0.5);

  DivergenceReport r0 = d_max_smooth(p, q, 0.0);
  CHECK(r0.value == doctest::Approx(d_max(p, q)).epsilon(1e-9));

  DivergenceReport r = d_max_smooth(p, q, 0.25);
  CHECK(r.value == doctest::Approx(std::log(1.5)));
  REQUIRE(r.certificate.size() == 2);
  CHECK(r.certificate[0] == doctest::Approx(0.75).epsilon(1e-7));

  // certificate is a distribution inside the smoothing ball achieving the value
  Rng rng(502);
  for (int t = 0; t < 50; ++t) {
    Distribution a = rand_interior(rng, 3);
    Distribution b = rand_interior(rng, 3);
    double eps = rng.uniform_in(0.01, 0.5);
    DivergenceReport rep = d_max_smooth(a, b, eps);
    REQUIRE(rep.status == SolverStatus::optimal);
    REQUIRE(rep.certificate.size() == 3);
    double sum = 0.0;
    for (double w : rep.certificate) {
      CHECK(w >= -1e-9);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    Distribution pp(Alphabet::ternary(), rep.certificate);
    CHECK(tv_distance(a, pp) <= eps + 1e-7);
    CHECK(d_max(pp, b) <= rep.value + 1e-6);

    // smoothing never helps less with a bigger ball
    DivergenceReport wider = d_max_smooth(a, b, eps + 0.1);
    CHECK(wider.value <= rep.value + 1e-9);
  }
}

TEST_CASE("testing divergence against the threshold oracle") {
  set_log_base(LogBase::e);

  Distribution p = bin(0.9);
  Distribution q = bin(0.2);
  DivergenceReport r = d_hyp(p, q, 0.2);
  CHECK(r.value == doctest::Approx(std::log(45.0 / 8.0)));

  // self test: optimal test keeps 1-eps of the mass everywhere
  for (double eps : {0.1, 0.25, 0.6}) {
    DivergenceReport s = d_hyp(p, p, eps);
    CHECK(s.value == doctest::Approx(-std::log(1.0 - eps)).epsilon(1e-9));
  }

  Rng rng(503);
  double prev = -1.0;
  for (int i = 1; i <= 9; ++i) {
    DivergenceReport s = d_hyp(p, q, 0.1 * i);
    CHECK(s.value >= prev - 1e-9);
    prev = s.value;
  }

  for (int t = 0; t < 200; ++t) {
    int dim = 2 + rng.uniform_int(2);
    Distribution a = rand_interior(rng, dim);
    Distribution b = rand_interior(rng, dim);
    double eps = rng.uniform_in(0.05, 0.9);
    DivergenceReport rep = d_hyp(a, b, eps);
    REQUIRE(rep.status == SolverStatus::optimal);

    double beta = testing::np_threshold_beta(a.w, b.w, eps);
    CHECK(rep.value == doctest::Approx(-std::log(beta)).epsilon(1e-7));

    // certificate is a feasible test reproducing the value
    REQUIRE(rep.certificate.size() == a.w.size());
    double alpha = 0.0, beta_cert = 0.0;
    for (std::size_t x = 0; x < a.w.size(); ++x) {
      CHECK(rep.certificate[x] >= -1e-9);
      CHECK(rep.certificate[x] <= 1.0 + 1e-9);
      alpha += rep.certificate[x] * a.w[x];
      beta_cert += rep.certificate[x] * b.w[x];
    }
    CHECK(alpha >= 1.0 - eps - 1e-7);
    CHECK(-std::log(beta_cert) == doctest::Approx(rep.value).epsilon(1e-6));

    // data processing: the binary reduction caps the value
    double d = kl(a, b);
    CHECK(rep.value <= (d + std::log(2.0)) / (1.0 - eps) + 1e-7);
  }
}

TEST_CASE("two-sided pinch of the testing divergence") {
  set_log_base(LogBase::two);

  SandwichResult same = duality_sandwich_check(bin(0.6).w, bin(0.6).w, 0.3, 0.2);
  CHECK(same.pass);

  SandwichResult r = duality_sandwich_check(bin(1.0).w, bin(0.5).w, 0.25, 0.25);
  CHECK(r.pass);
  CHECK(r.lower_margin == doctest::Approx(2.0 - std::log2(3.0)).epsilon(1e-9));
  CHECK(r.upper_margin == doctest::Approx(2.0 - std::log2(8.0 / 3.0)).epsilon(1e-9));

  Rng rng(504);
  for (int t = 0; t < 200; ++t) {
    int dim = 2 + rng.uniform_int(2);
    Distribution a = rand_interior(rng, dim);
    Distribution b = rand_interior(rng, dim);
    SandwichResult s = duality_sandwich_check(a.w, b.w, 0.3, 0.2);
    CHECK(s.lower_margin >= -kTolMembership);
    CHECK(s.upper_margin >= -kTolMembership);
  }

  CHECK_THROWS_AS(duality_sandwich_check(bin(0.5).w, bin(0.5).w, 0.0, 0.2),
                  DomainError);
  CHECK_THROWS_AS(duality_sandwich_check(bin(0.5).w, bin(0.5).w, 0.5, 0.8),
                  DomainError);
}

TEST_CASE("binary divergence and entropy") {
  set_log_base(LogBase::e);
  CHECK(binary_rel_ent(0.9, 0.5) == doctest::Approx(0.3680642071684972));
  CHECK(binary_rel_ent(0.5, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(binary_entropy(0.25) == doctest::Approx(0.5623351446188083));
  CHECK(binary_entropy(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(binary_entropy(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(binary_entropy(-0.1), DomainError);
  CHECK_THROWS_AS(binary_entropy(1.1), DomainError);
  CHECK_THROWS_AS(binary_rel_ent(0.5, -0.2), DomainError);

  set_log_base(LogBase::two);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
}

TEST_CASE("growth function") {
  set_log_base(LogBase::e);
  CHECK(g_func(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g_func(1.0) == doctest::Approx(std::log(4.0)));
  CHECK(g_func(3.0) == doctest::Approx(4.0 * std::log(4.0) - 3.0 * std::log(3.0)));
  double prev = 0.0;
  for (double x = 0.1; x < 3.0; x += 0.1) {
    CHECK(g_func(x) > prev);
    prev = g_func(x);
  }
}

TEST_CASE("auxiliary envelope function") {
  set_log_base(LogBase::e);
  CHECK(f_aux(1.0, 0.25) == doctest::Approx(0.5623351446188083));
  CHECK(f_aux(1.0, 0.5) == doctest::Approx(std::log(2.0)));
  CHECK(f_aux(1.0, 0.9) == doctest::Approx(std::log(2.0)));
  CHECK(f_aux(0.5, 0.7) == doctest::Approx(std::log(3.0)));
  CHECK(f_aux(0.5, 1.0) == doctest::Approx(std::log(3.0)));
  CHECK(f_aux(0.25, 0.0) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(f_aux(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(f_aux(1.5, 0.5), DomainError);

  // continuous and nondecreasing across the knee at 1/(c+1)
  for (double c : {0.3, 0.5, 0.75, 1.0}) {
    double knee = 1.0 / (c + 1.0);
    CHECK(f_aux(c, knee - 1e-9) == doctest::Approx(f_aux(c, knee + 1e-9)).epsilon(1e-6));
    double prev = -1.0;
    for (double x = 0.0; x <= 1.0; x += 0.02) {
      double v = f_aux(c, x);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("auxiliary function variational identities") {
  set_log_base(LogBase::e);
  for (double c1 : {0.25, 0.5, 1.0})
    for (double c2 : {0.4, 0.8, 1.0})
      for (double x : {0.1, 0.3, 0.5, 0.9}) {
        FAuxVariationalResult r = f_aux_variational_check(c1, c2, x);
        CHECK(r.pass_sup);
        CHECK(r.pass_doubling);
        CHECK(r.pass_inf);
      }
}

TEST_CASE("channel filtering contracts relative entropy") {
  set_log_base(LogBase::e);
  Alphabet b = Alphabet::binary();
  Distribution p = bin(0.8);
  Distribution q = bin(0.4);

  CHECK(filtered_kl(p, q, StochasticChannel::identity(b)) ==
        doctest::Approx(kl(p, q)).epsilon(1e-12));

  Rng rng(505);
  for (int t = 0; t < 200; ++t) {
    Distribution a = rand_interior(rng, 2);
    Distribution c = rand_interior(rng, 2);
    std::vector<double> col0 = rng.simplex_point(2);
    std::vector<double> col1 = rng.simplex_point(2);
    StochasticChannel w(b, b, {col0[0], col1[0], col0[1], col1[1]});
    CHECK(filtered_kl(a, c, w) <= kl(a, c) + 1e-9);

    JointDistribution a2 = iid_power(a, 2);
    JointDistribution c2 = iid_power(c, 2);
    CHECK(filtered_kl(a2, c2, w) <= kl(a2, c2) + 1e-9);
  }
}

TEST_CASE("order one half divergence") {
  set_log_base(LogBase::e);
  Distribution p = bin(0.3);
  CHECK(renyi_half(p, p) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(renyi_half(bin(1.0), bin(0.5)) == doctest::Approx(std::log(2.0)));

  Rng rng(506);
  for (int t = 0; t < 500; ++t) {
    Distribution a = rand_interior(rng, 3);
    Distribution b3 = rand_interior(rng, 3);
    CHECK(renyi_half(a, b3) <= kl(a, b3) + 1e-10);
    CHECK(renyi_half(a, b3) >= -1e-10);
  }
}

TEST_CASE("projection onto a hull") {
  set_log_base(LogBase::e);
  JointDistribution p = as_joint(bin(1.0));
  Polytope f({as_joint(bin(0.5)), as_joint(bin(0.25))});

  DivergenceReport r = min_kl_to_polytope(p, f);
  CHECK(r.status == SolverStatus::optimal);
  CHECK(r.value == doctest::Approx(std::log(2.0)).epsilon(1e-7));

  // member of the hull projects to zero
  JointDistribution mid = as_joint(bin(0.375));
  CHECK(min_kl_to_polytope(mid, f).value == doctest::Approx(0.0).epsilon(1e-7));

  // support escaping every generator is reported as capped
  Polytope point({as_joint(bin(0.0))});
  DivergenceReport inf = min_kl_to_polytope(as_joint(bin(0.5)), point);
  CHECK(inf.status == SolverStatus::capped_infinite);
  CHECK(is_inf_value(inf.value));

  Rng rng(507);
  for (int t = 0; t < 20; ++t) {
    int k = 2 + rng.uniform_int(2);
    std::vector<JointDistribution> gens;
    for (int i = 0; i < k; ++i)
      gens.push_back(as_joint(Distribution(
          Alphabet::ternary(), rng.simplex_point_interior(3, 0.2))));
    JointDistribution target = as_joint(Distribution(
        Alphabet::ternary(), rng.simplex_point_interior(3, 0.1)));
    DivergenceReport fw = min_kl_to_polytope(target, Polytope(gens));
    int steps = k == 2 ? 4000 : 400;
    double grid = testing::grid_min_kl(target, gens, steps);
    CHECK(fw.value <= grid + 1e-6);
    CHECK(grid <= fw.value + (k == 2 ? 2e-3 : 2e-2));
  }
}

TEST_CASE("projection from a hull and between hulls") {
  set_log_base(LogBase::e);
  Distribution p = bin(0.8);
  Distribution q = bin(0.3);
  Polytope rp({as_joint(p)});
  Polytope qp({as_joint(q)});

  CHECK(min_kl_from_polytope(rp, as_joint(q)).value ==
        doctest::Approx(kl(p, q)).epsilon(1e-7));
  CHECK(min_kl_between_polytopes(rp, qp).value ==
        doctest::Approx(kl(p, q)).epsilon(1e-7));

  // shared generator makes the hulls intersect
  Polytope r2({as_joint(p), as_joint(bin(0.6))});
  Polytope s2({as_joint(bin(0.6)), as_joint(q)});
  CHECK(min_kl_between_polytopes(r2, s2).value ==
        doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("relative entropy continuity bound") {
  set_log_base(LogBase::e);
  Distribution b1 = bin(0.7);
  Distribution b2 = bin(0.55);
  std::vector<JointDistribution> words;
  for (const Distribution& x : {b1, b2})
    for (const Distribution& y : {b1, b2}) words.push_back(tensor_product({x, y}));
  Polytope f(words);  // closed under symbol-wise blurring toward base mixtures
  Distribution ref = bin(0.625);
  double c = 0.375;

  JointDistribution p2 = iid_power(bin(0.6), 2);
  ContinuityCheck eq = relent_continuity_bound_check(p2, p2, f, ref, c);
  CHECK(eq.pass);
  CHECK(eq.margin == doctest::Approx(0.0).epsilon(1e-9));

  Rng rng(508);
  for (int t = 0; t < 50; ++t) {
    double w = rng.uniform();
    Distribution p = bin(0.7 * w + 0.55 * (1.0 - w));
    JointDistribution ppn = iid_power(p, 2);
    double mix = rng.uniform_in(0.0, 0.4);
    JointDistribution z(Alphabet::binary(), 2, rng.simplex_point_interior(4, 0.05));
    std::vector<double> wts(4);
    for (int i = 0; i < 4; ++i)
      wts[static_cast<std::size_t>(i)] =
          (1.0 - mix) * ppn(static_cast<std::size_t>(i)) +
          mix * z(static_cast<std::size_t>(i));
    JointDistribution pn(Alphabet::binary(), 2, wts);
    ContinuityCheck ck = relent_continuity_bound_check(pn, ppn, f, ref, c);
    CHECK(ck.margin >= -kTolMembership);
  }

  // far apart pair still satisfies the bound
  JointDistribution far(Alphabet::binary(), 2, {0.9, 0.04, 0.04, 0.02});
  ContinuityCheck fc = relent_continuity_bound_check(far, p2, f, ref, c);
  CHECK(fc.margin >= -kTolMembership);
}

TEST_CASE("entropy continuity margin") {
  set_log_base(LogBase::e);
  Distribution p = bin(0.35);
  CHECK(entropy_continuity_margin(p, p) == doctest::Approx(0.0).epsilon(1e-12));

  Rng rng(509);
  for (int t = 0; t < 1000; ++t) {
    int dim = 2 + rng.uniform_int(2);
    Distribution a = rand_interior(rng, dim);
    Distribution b = rand_interior(rng, dim);
    CHECK(entropy_continuity_margin(a, b) >= -1e-9);
  }
}
