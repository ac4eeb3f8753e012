#include <cmath>
#include <doctest.h>
#include <vector>

#include "steinlab/engine.hpp"
#include "steinlab/rng.hpp"

using namespace steinlab;

namespace {

Distribution ebin(double p0) {
  return Distribution(Alphabet::binary(), {p0, 1.0 - p0});
}

GeneratedSet level1_set(const std::vector<Distribution>& gens) {
  GeneratedSet s;
  s.n = 1;
  for (const Distribution& g : gens) s.generators.push_back(as_joint(g));
  return s;
}

double h2_nats(double y) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  return -y * std::log(y) - (1.0 - y) * std::log(1.0 - y);
}

}  // namespace

TEST_CASE("optimal set test error") {
  set_log_base(LogBase::e);
  GeneratedSet p = level1_set({ebin(0.7)});
  DivergenceReport self = beta_eps(p, p, 0.3);
  CHECK(self.value == doctest::Approx(0.7).epsilon(1e-9));

  GeneratedSet point = level1_set({ebin(1.0)});
  GeneratedSet unif = level1_set({ebin(0.5)});
  DivergenceReport r = beta_eps(point, unif, 0.5);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(r.residual <= kTolCertificate);

  // duplicated and convex-redundant generators change nothing
  GeneratedSet r1 = level1_set({ebin(0.9), ebin(0.6)});
  GeneratedSet r2 = level1_set({ebin(0.9), ebin(0.6), ebin(0.6), ebin(0.75)});
  GeneratedSet s1 = level1_set({ebin(0.2), ebin(0.35)});
  double a = beta_eps(r1, s1, 0.25).value;
  double b = beta_eps(r2, s1, 0.25).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-9));

  CHECK_THROWS_AS(beta_eps(r1, s1, 0.0), DomainError);
  CHECK_THROWS_AS(beta_eps(r1, s1, 1.0), DomainError);
  GeneratedSet lvl2;
  lvl2.n = 2;
  lvl2.generators = {iid_power(ebin(0.5), 2)};
  CHECK_THROWS_AS(beta_eps(r1, lvl2, 0.25), DomainError);
}

TEST_CASE("set testing divergence") {
  set_log_base(LogBase::e);
  Distribution p = ebin(0.85);
  Distribution q = ebin(0.25);
  for (double eps : {0.1, 0.3, 0.6}) {
    double sets = d_hyp_sets(level1_set({p}), level1_set({q}), eps);
    double single = d_hyp(p, q, eps).value;
    CHECK(sets == doctest::Approx(single).epsilon(1e-7));
  }

  // growing the null set can only shrink the divergence
  GeneratedSet narrow = level1_set({ebin(0.9)});
  GeneratedSet wide = level1_set({ebin(0.9), ebin(0.7)});
  GeneratedSet alt = level1_set({ebin(0.3)});
  CHECK(d_hyp_sets(wide, alt, 0.2) <= d_hyp_sets(narrow, alt, 0.2) + 1e-9);

  // disjoint supports give a perfect test
  CHECK(is_inf_value(d_hyp_sets(level1_set({ebin(1.0)}), level1_set({ebin(0.0)}), 0.2)));
}

TEST_CASE("per-level rate sequence") {
  set_log_base(LogBase::e);
  Distribution p = ebin(0.8);
  Distribution q = ebin(0.3);
  SteinSequence simple =
      stein_sequence(FamilySpec::make_simple_iid(p), FamilySpec::make_simple_iid(q), 0.2, 3);
  CHECK(simple.has_target);
  CHECK(simple.single_letter_target == doctest::Approx(kl(p, q)).epsilon(1e-12));
  REQUIRE(simple.rates.size() == 3);
  for (std::size_t i = 0; i < simple.rates.size(); ++i) {
    CHECK(simple.rates[i].n == static_cast<int>(i) + 1);
    CHECK(simple.rates[i].rate <= simple.rates[i].converse_cap + 1e-5);
  }
  CHECK(simple.rates[0].rate == doctest::Approx(d_hyp(p, q, 0.2).value).epsilon(1e-9));
  CHECK(simple.converse_bound == doctest::Approx(simple.rates.back().converse_cap));
  CHECK_FALSE(simple.truncated);

  FamilySpec comp = FamilySpec::make_composite_iid({ebin(0.9), ebin(0.8)});
  FamilySpec av = FamilySpec::make_arbitrarily_varying({ebin(0.5)});
  SteinSequence mixed = stein_sequence(comp, av, 0.2, 3);
  CHECK(mixed.has_target);
  CHECK(mixed.single_letter_target == doctest::Approx(0.1927447570217575).epsilon(1e-9));
  for (const RatePoint& rp : mixed.rates)
    CHECK(rp.rate <= rp.converse_cap + 1e-5);

  // levels past a realization cap are dropped and flagged
  SteinSequence cut =
      stein_sequence(FamilySpec::make_simple_iid(ebin(1.0)), FamilySpec::make_werner(2.0),
                     0.25, 5);
  CHECK(cut.truncated);
  CHECK(cut.rates.size() == 3);
  CHECK_FALSE(cut.has_target);

  CHECK_THROWS_AS(stein_sequence(comp, av, 0.2, 0), DomainError);
}

TEST_CASE("regularized divergence proxy dominates the type-II exponent") {
  set_log_base(LogBase::e);
  GeneratedSet p = level1_set({ebin(0.7)});
  CHECK(converse_regularized(p, p, 0.3) == doctest::Approx(0.0).epsilon(1e-9));

  Rng rng(701);
  for (int t = 0; t < 30; ++t) {
    Distribution a(Alphabet::binary(), rng.simplex_point_interior(2, 0.1));
    Distribution b(Alphabet::binary(), rng.simplex_point_interior(2, 0.1));
    Distribution c(Alphabet::binary(), rng.simplex_point_interior(2, 0.1));
    GeneratedSet r = level1_set({a});
    GeneratedSet s = level1_set({b, c});
    double eps = rng.uniform_in(0.1, 0.6);
    double v = converse_regularized(r, s, eps);
    double dh = d_hyp_sets(r, s, eps);
    CHECK(v >= (-1.0 + (1.0 - eps) * dh) / r.n - 1e-7);
  }
}

TEST_CASE("blur width evaluators") {
  for (LogBase base : {LogBase::e, LogBase::two}) {
    set_log_base(base);

    // the finite-n width against a direct transcription of its formula
    for (int X : {2, 3})
      for (double xi : {0.01, 0.05, 0.1})
        for (double eta : {0.3, 0.5})
          for (int n : {5, 50}) {
            double inside = 4.0 * xi * std::log(static_cast<double>(X)) +
                            2.0 * (3.0 * xi * std::log(X / xi) + h2_nats(3.0 * xi)) +
                            2.0 * X * std::log(n + 1.0) / n;
            double ref = std::sqrt(inside) + std::sqrt(2.0 / n * std::log(1.0 / eta)) +
                         2.0 * xi;
            CHECK(blur_theta(X, eta, xi, n) == doctest::Approx(ref).epsilon(1e-12));
          }

    // exact sublinear offset, vanishing in n
    CHECK(blur_o_tilde(2, 0.5, 9) ==
          doctest::Approx((2.0 * lg(10.0) + lg(2.0)) / 9.0).epsilon(1e-12));
    CHECK(blur_o_tilde(2, 0.5, 1000000) < 1e-4);
  }

  set_log_base(LogBase::e);
  CHECK(blur_phi(0.01, 0.5, 2) > blur_phi(0.0001, 0.5, 2));
  CHECK(blur_phi(0.0001, 0.5, 2) > blur_phi(0.000000001, 0.5, 2));
  CHECK(blur_phi(0.000000001, 0.5, 2) < 1e-2);

  CHECK_THROWS_AS(blur_phi(0.4, 0.5, 2), DomainError);
  CHECK_THROWS_AS(blur_phi(0.1, 1.5, 2), DomainError);
  CHECK_THROWS_AS(blur_theta(2, 1.2, 0.1, 5), DomainError);
  CHECK_THROWS_AS(blur_o_tilde(2, 0.5, 0), DomainError);
}

TEST_CASE("meta bound evaluators") {
  set_log_base(LogBase::e);
  MetaLemmaInputs inp;
  inp.lambda = 1.1;
  inp.xi = 0.001;
  inp.delta = 0.07;
  inp.c = 0.5;
  inp.alphabet_size = 2;
  inp.o_l = 0.3;
  inp.o_r = 0.2;

  CHECK(meta_lemma_rhs(inp) ==
        doctest::Approx(1.1 + blur_phi(0.001, 0.5, 2) + 0.07).epsilon(1e-12));

  // the finite-n value sits above the asymptote and approaches it
  double asym = 1.1 + blur_phi(0.001, 0.5, 2);
  for (int n : {5, 50, 500}) {
    inp.n = n;
    CHECK(meta_lemma_rhs_at_n(inp) >= asym - 1e-12);
  }
  inp.n = 100000000;
  CHECK(std::fabs(meta_lemma_rhs_at_n(inp) - asym) < 2e-3);

  MetaLemmaInputs bad = inp;
  bad.lambda = -0.1;
  CHECK_THROWS_AS(meta_lemma_rhs(bad), DomainError);
  CHECK_THROWS_AS(meta_lemma_rhs_at_n(bad), DomainError);
  bad = inp;
  bad.delta = 0.0;
  CHECK_THROWS_AS(meta_lemma_rhs(bad), DomainError);
  bad = inp;
  bad.o_r = -1.0;
  CHECK_THROWS_AS(meta_lemma_rhs_at_n(bad), DomainError);
  bad = inp;
  bad.n = 0;
  CHECK_THROWS_AS(meta_lemma_rhs_at_n(bad), DomainError);
}

TEST_CASE("exact type-class decay floor") {
  set_log_base(LogBase::e);
  Alphabet ab = Alphabet::binary();
  FamilySpec half = FamilySpec::make_composite_iid({ebin(0.5)});

  SanovCheck inside = sanov_type_bound_check(half, 6, TypeVector(ab, 6, {3, 3}));
  CHECK(inside.pass);
  CHECK(inside.exponent == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(inside.ln_weight == doctest::Approx(std::log(20.0 / 64.0)).epsilon(1e-12));

  SanovCheck skew = sanov_type_bound_check(half, 6, TypeVector(ab, 6, {2, 4}));
  CHECK(skew.pass);
  double expo = 2.0 / 6 * std::log((2.0 / 6) / 0.5) + 4.0 / 6 * std::log((4.0 / 6) / 0.5);
  CHECK(skew.margin ==
        doctest::Approx(-6.0 * expo - std::log(15.0 / 64.0)).epsilon(1e-9));

  FamilySpec comp = FamilySpec::make_composite_iid({ebin(0.6), ebin(0.3)});
  FamilySpec av = FamilySpec::make_arbitrarily_varying({ebin(0.6), ebin(0.3)});
  for (const TypeVector& v : enumerate_types(ab, 8)) {
    SanovCheck c = sanov_type_bound_check(comp, 8, v);
    CHECK(c.pass);
    CHECK(c.margin >= -1e-12);
    SanovCheck va = sanov_type_bound_check(av, 8, v);
    CHECK(va.pass);
    CHECK(va.margin >= -1e-6);
  }
}

TEST_CASE("blur transition floor") {
  set_log_base(LogBase::e);
  Distribution u = ebin(0.5);

  // single flip at the tight corner: delta R(y) meets (1-delta) c delta/(1-delta)
  BoundCheck tight = transition_bound_check({0}, {1}, u, 0.5, 1.0 / 3.0);
  CHECK(tight.pass);
  CHECK(tight.margin == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tight.lhs == doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-12));

  BoundCheck stay = transition_bound_check({0, 1, 0}, {0, 1, 0}, u, 0.5, 0.25);
  CHECK(stay.pass);
  CHECK(stay.margin > 0.0);

  Rng rng(702);
  for (int t = 0; t < 200; ++t) {
    int k = 2 + rng.uniform_int(2);
    Distribution r(Alphabet::of_size(k), rng.simplex_point_interior(k, 0.15));
    double cmin = 1.0;
    for (int s = 0; s < k; ++s) cmin = std::min(cmin, r(s));
    double c = cmin * rng.uniform_in(0.5, 1.0);
    double delta = rng.uniform_in(0.01, 1.0 / (c + 1.0));
    int n = 1 + rng.uniform_int(6);
    std::vector<int> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = rng.uniform_int(k);
      y[static_cast<std::size_t>(i)] = rng.uniform_int(k);
    }
    BoundCheck ck = transition_bound_check(x, y, r, c, delta);
    CHECK(ck.pass);
    CHECK(ck.margin >= -1e-9);
  }

  CHECK_THROWS_AS(transition_bound_check({0}, {1}, u, 0.5, 0.7), DomainError);
  CHECK_THROWS_AS(transition_bound_check({0}, {1}, u, 0.6, 0.3), DomainError);
  CHECK_THROWS_AS(transition_bound_check({0}, {1}, ebin(1.0), 0.5, 0.3), DomainError);
  CHECK_THROWS_AS(transition_bound_check({0}, {0, 1}, u, 0.5, 0.3), DomainError);
}

TEST_CASE("string mass against the nearby type envelope") {
  set_log_base(LogBase::e);
  Distribution p = ebin(0.7);

  // every binary pair at length 4
  for (std::size_t xi = 0; xi < 16; ++xi)
    for (std::size_t yi = 0; yi < 16; ++yi) {
      BoundCheck ck = string_mass_nearby_type_check(decode_string(xi, 2, 4),
                                                    decode_string(yi, 2, 4), p);
      CHECK(ck.pass);
      CHECK(ck.margin >= -1e-9);
    }

  Rng rng(703);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + rng.uniform_int(11);
    std::vector<int> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = rng.uniform_int(2);
      y[static_cast<std::size_t>(i)] = rng.uniform_int(2);
    }
    BoundCheck ck = string_mass_nearby_type_check(x, y, p);
    CHECK(ck.pass);
  }

  // zero-mass strings pass vacuously
  BoundCheck z = string_mass_nearby_type_check({1, 1}, {0, 1}, ebin(1.0));
  CHECK(z.pass);
  CHECK(is_inf_value(z.margin));
}

TEST_CASE("type distance test") {
  Alphabet ab = Alphabet::binary();
  TypeDistanceTest one{{ebin(0.8)}, 0.1};
  CHECK(one.accepts(TypeVector(ab, 10, {8, 2})));
  CHECK(one.accepts(TypeVector(ab, 10, {9, 1})));
  CHECK_FALSE(one.accepts(TypeVector(ab, 10, {5, 5})));

  TypeDistanceTest two{{ebin(0.6), ebin(0.8)}, 0.05};
  CHECK(two.tv_to_hull(ebin(0.7)) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(two.tv_to_hull(ebin(0.9)) == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(two.accepts(TypeVector(ab, 10, {7, 3})));
  CHECK_FALSE(two.accepts(TypeVector(ab, 10, {10, 0})));

  // exact error masses agree with direct summation over types
  TypeDistanceTest test{{ebin(0.8)}, 0.15};
  Distribution pr = ebin(0.8);
  Distribution ps = ebin(0.5);
  double prev_alpha = 1.0;
  for (int n : {4, 16}) {
    GeneratedSet r = realize(FamilySpec::make_simple_iid(pr), n);
    GeneratedSet s = realize(FamilySpec::make_simple_iid(ps), n);
    double alpha = type_test_alpha(test, r);
    double beta = type_test_beta(test, s);
    double alpha_direct = 0.0, beta_direct = 0.0;
    for (const TypeVector& v : enumerate_types(ab, n)) {
      if (test.accepts(v))
        beta_direct += iid_weight_of_type_class(ps, v);
      else
        alpha_direct += iid_weight_of_type_class(pr, v);
    }
    CHECK(alpha == doctest::Approx(alpha_direct).epsilon(1e-12));
    CHECK(beta == doctest::Approx(beta_direct).epsilon(1e-12));
    CHECK(alpha < prev_alpha);  // null error shrinks with the block length
    prev_alpha = alpha;
  }
}

TEST_CASE("permutation symmetry detector") {
  CHECK(permutation_symmetric(iid_power(ebin(0.3), 3)));
  CHECK(permutation_symmetric(as_joint(ebin(0.9))));
  JointDistribution skew(Alphabet::binary(), 2, {0.5, 0.3, 0.1, 0.1});
  CHECK_FALSE(permutation_symmetric(skew));
  JointDistribution balanced(Alphabet::binary(), 2, {0.5, 0.2, 0.2, 0.1});
  CHECK(permutation_symmetric(balanced));
}

TEST_CASE("symmetric envelope bound") {
  DeFinettiCertificate iid = definetti_type_bound(iid_power(ebin(0.7), 4));
  CHECK(iid.pass);
  CHECK(iid.allowance == doctest::Approx(25.0));
  CHECK(iid.max_ratio <= iid.allowance);

  // uniform mass on one type class
  Alphabet ab = Alphabet::binary();
  StringSet cls = enumerate_type_class(TypeVector(ab, 4, {2, 2}));
  std::vector<double> w(16, 0.0);
  for (std::size_t idx : cls.indices) w[idx] = 1.0 / 6.0;
  DeFinettiCertificate flat = definetti_type_bound(JointDistribution(ab, 4, w));
  CHECK(flat.pass);
  CHECK(flat.max_ratio == doctest::Approx(1.0 / (6.0 * 0.1328125)).epsilon(1e-9));

  JointDistribution mix(Alphabet::binary(), 4, [] {
    JointDistribution a = iid_power(Distribution(Alphabet::binary(), {0.7, 0.3}), 4);
    JointDistribution b = iid_power(Distribution(Alphabet::binary(), {0.3, 0.7}), 4);
    std::vector<double> m(16);
    for (std::size_t i = 0; i < 16; ++i) m[i] = 0.5 * a.w[i] + 0.5 * b.w[i];
    return m;
  }());
  CHECK(definetti_type_bound(mix).pass);

  JointDistribution skew(Alphabet::binary(), 2, {0.5, 0.3, 0.1, 0.1});
  CHECK_THROWS_AS(definetti_type_bound(skew), DomainError);
}

TEST_CASE("sampled mixture envelope diagnostic") {
  set_log_base(LogBase::e);
  Distribution b1 = ebin(0.7);
  Distribution b2 = ebin(0.55);
  FamilySpec comp = FamilySpec::make_composite_iid({b1, b2});

  JointDistribution q3(Alphabet::binary(), 3, [&] {
    JointDistribution a = iid_power(b1, 3);
    JointDistribution b = iid_power(b2, 3);
    std::vector<double> m(8);
    for (std::size_t i = 0; i < 8; ++i) m[i] = 0.5 * a.w[i] + 0.5 * b.w[i];
    return m;
  }());
  DeFinettiMonteCarlo mc = definetti_constrained_check(q3, comp, 5.0, 3000, 42);
  CHECK(mc.samples == 3000);
  CHECK(mc.coverage == doctest::Approx(1.0));
  CHECK_FALSE(mc.note.empty());

  DeFinettiMonteCarlo tiny = definetti_constrained_check(as_joint(b1), comp, 1.0, 500, 7);
  CHECK(tiny.coverage >= 0.0);
  CHECK(tiny.coverage <= 1.0);
  CHECK(tiny.worst_ratio >= 0.0);

  CHECK_THROWS_AS(definetti_constrained_check(q3, comp, 0.0, 100, 1), DomainError);
  CHECK_THROWS_AS(definetti_constrained_check(q3, comp, 1.0, 0, 1), DomainError);
  JointDistribution outside = iid_power(ebin(0.2), 3);
  CHECK_THROWS_AS(definetti_constrained_check(outside, comp, 1.0, 100, 1), DomainError);
  JointDistribution skew(Alphabet::binary(), 2, {0.5, 0.3, 0.1, 0.1});
  CHECK_THROWS_AS(definetti_constrained_check(skew, comp, 1.0, 100, 1), DomainError);
}

TEST_CASE("collapse channel and filtered superadditivity") {
  set_log_base(LogBase::e);
  StochasticChannel w2 = werner_channel(2.0);
  CHECK(w2.w(0, 0) == doctest::Approx(1.0));
  CHECK(w2.w(1, 0) == doctest::Approx(0.0));
  CHECK(w2.w(0, 1) == doctest::Approx(0.5));
  CHECK(w2.w(1, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(werner_channel(0.9), DomainError);

  FamilySpec werner = FamilySpec::make_werner(2.0);
  Distribution point = ebin(1.0);

  BoundCheck one = filtered_superadditivity_check(werner, {point}, w2);
  CHECK(one.pass);
  CHECK(one.lhs == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  CHECK(one.margin == doctest::Approx(std::log(1.5)).epsilon(1e-6));

  BoundCheck two = filtered_superadditivity_check(werner, {point, point}, w2);
  CHECK(two.pass);
  CHECK(two.lhs == doctest::Approx(std::log(3.0)).epsilon(1e-6));
  CHECK(two.margin == doctest::Approx(std::log(9.0 / 8.0)).epsilon(1e-6));

  // product-family decomposition through the identity filter
  FamilySpec comp = FamilySpec::make_composite_iid({ebin(0.7), ebin(0.55)});
  StochasticChannel id = StochasticChannel::identity(Alphabet::binary());
  Rng rng(704);
  for (int t = 0; t < 25; ++t) {
    std::vector<Distribution> ps;
    int n = 2 + t % 2;
    for (int i = 0; i < n; ++i)
      ps.emplace_back(Alphabet::binary(), rng.simplex_point_interior(2, 0.1));
    BoundCheck ck = filtered_superadditivity_check(comp, ps, id);
    CHECK(ck.pass);
    CHECK(ck.margin >= -1e-5);
  }
  CHECK_THROWS_AS(filtered_superadditivity_check(comp, {}, id), DomainError);
}

TEST_CASE("per-copy projection sequence") {
  set_log_base(LogBase::e);
  Distribution b1 = ebin(0.5);
  Distribution b2 = ebin(0.9);

  // member of the base: flat zero sequence
  SingleLetterSequence flat =
      single_letterization_check(FamilySpec::make_composite_iid({b1, b2}), b2, 3);
  CHECK(flat.pass);
  CHECK(flat.target == doctest::Approx(0.0).epsilon(1e-9));
  for (double v : flat.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-7));

  // point mass against the varying family: constant per-copy value
  SingleLetterSequence av = single_letterization_check(
      FamilySpec::make_arbitrarily_varying({b1, b2}), ebin(1.0), 3);
  CHECK(av.pass);
  CHECK(av.target == doctest::Approx(std::log(10.0 / 9.0)).epsilon(1e-6));
  REQUIRE(av.values.size() == 3);
  for (double v : av.values)
    CHECK(v == doctest::Approx(std::log(10.0 / 9.0)).epsilon(1e-5));
  CHECK(std::fabs(av.final_gap) < 1e-5);

  // interior point against the two-element base: values stay under the target
  SingleLetterSequence comp = single_letterization_check(
      FamilySpec::make_composite_iid({b1, b2}), ebin(0.75), 4);
  CHECK(comp.pass);
  double target = std::min(kl(ebin(0.75), b1), kl(ebin(0.75), b2));
  CHECK(comp.target == doctest::Approx(target).epsilon(1e-12));
  CHECK(comp.values[0] == doctest::Approx(0.0).epsilon(1e-7));
  for (double v : comp.values) CHECK(v <= comp.target + 1e-6);

  CHECK_THROWS_AS(single_letterization_check(FamilySpec::make_werner(2.0), b1, 2),
                  DomainError);
  CHECK_THROWS_AS(
      single_letterization_check(
          FamilySpec::make_almost_iid(b1, PhiSpec{PhiSpec::Kind::constant, 1}), b1, 2),
      DomainError);
  CHECK_THROWS_AS(
      single_letterization_check(FamilySpec::make_composite_iid({b1}), b1, 0), DomainError);
}
