#include <cmath>
#include <doctest.h>
#include <vector>

#include "steinlab/alphabet.hpp"
#include "steinlab/rng.hpp"

using namespace steinlab;

namespace {
Distribution bin(double p0) { return Distribution(Alphabet::binary(), {p0, 1.0 - p0}); }
}  // namespace

TEST_CASE("tensor product weights") {
  JointDistribution single = tensor_product({bin(1.0)});
  REQUIRE(single.dim() == 2);
  CHECK(single(0) == doctest::Approx(1.0));

  JointDistribution unif = tensor_product({bin(0.5), bin(0.5)});
  for (std::size_t i = 0; i < 4; ++i) CHECK(unif(i) == doctest::Approx(0.25));

  JointDistribution prod = tensor_product({bin(1.0), bin(0.25)});
  CHECK(prod(0) == doctest::Approx(0.25));
  CHECK(prod(1) == doctest::Approx(0.75));
  CHECK(prod(2) == doctest::Approx(0.0));
  CHECK(prod(3) == doctest::Approx(0.0));
}

TEST_CASE("marginalize") {
  Distribution p = bin(0.3), q = bin(0.8);
  JointDistribution pq = tensor_product({p, q});
  JointDistribution m1 = marginalize(pq, {1});
  CHECK(std::fabs(m1(0) - 0.3) < 1e-12);

  JointDistribution prod = tensor_product({bin(1.0), bin(0.25)});
  JointDistribution m2 = marginalize(prod, {2});
  CHECK(std::fabs(m2(0) - 0.25) < 1e-12);
  CHECK(std::fabs(m2(1) - 0.75) < 1e-12);

  // position independence on a symmetric joint
  JointDistribution sym(Alphabet::binary(), 2, {0.4, 0.15, 0.15, 0.3});
  JointDistribution a = marginalize(sym, {1}), b = marginalize(sym, {2});
  CHECK(std::fabs(a(0) - b(0)) < 1e-12);

  CHECK_THROWS_AS(marginalize(pq, {}), DomainError);
}

TEST_CASE("permute") {
  JointDistribution j(Alphabet::binary(), 2, {0.1, 0.2, 0.3, 0.4});
  JointDistribution id = permute(j, {1, 2});
  for (std::size_t i = 0; i < 4; ++i) CHECK(id(i) == doctest::Approx(j(i)));

  JointDistribution sw = permute(j, {2, 1});
  CHECK(sw(0) == doctest::Approx(0.1));
  CHECK(sw(1) == doctest::Approx(0.3));
  CHECK(sw(2) == doctest::Approx(0.2));
  CHECK(sw(3) == doctest::Approx(0.4));

  Distribution p = bin(0.3), q = bin(0.8);
  JointDistribution qp = permute(tensor_product({p, q}), {2, 1});
  JointDistribution ref = tensor_product({q, p});
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::fabs(qp(i) - ref(i)) < 1e-12);

  // applying pi then its inverse is the identity
  JointDistribution j3(Alphabet::binary(), 3,
                       {0.05, 0.1, 0.15, 0.2, 0.03, 0.07, 0.18, 0.22});
  JointDistribution round = permute(permute(j3, {2, 3, 1}), {3, 1, 2});
  for (std::size_t i = 0; i < 8; ++i) CHECK(std::fabs(round(i) - j3(i)) < 1e-12);
}

TEST_CASE("depolarizing channel") {
  Distribution r = bin(0.5);
  StochasticChannel id = depolarizing_channel(0.0, r);
  Distribution p = bin(0.3);
  Distribution out = apply_channel(id, p);
  CHECK(std::fabs(out(0) - 0.3) < 1e-12);

  StochasticChannel full = depolarizing_channel(1.0, bin(0.7));
  out = apply_channel(full, bin(0.05));
  CHECK(std::fabs(out(0) - 0.7) < 1e-12);

  out = apply_channel(depolarizing_channel(0.5, r), bin(1.0));
  CHECK(std::fabs(out(0) - 0.75) < 1e-12);
  CHECK(std::fabs(out(1) - 0.25) < 1e-12);

  CHECK_THROWS_AS(depolarizing_channel(-0.1, r), DomainError);
  CHECK_THROWS_AS(depolarizing_channel(1.1, r), DomainError);
}

TEST_CASE("channel per symbol") {
  Distribution p = bin(0.3), q = bin(0.8), r = bin(0.4);
  StochasticChannel w = depolarizing_channel(0.35, r);

  JointDistribution pq = tensor_product({p, q});
  JointDistribution through = apply_channel_per_symbol(pq, w);
  JointDistribution ref = tensor_product({apply_channel(w, p), apply_channel(w, q)});
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::fabs(through(i) - ref(i)) < 1e-12);

  JointDistribution same =
      apply_channel_per_symbol(pq, StochasticChannel::identity(Alphabet::binary()));
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::fabs(same(i) - pq(i)) < 1e-12);

  // full noise erases the input
  JointDistribution j(Alphabet::binary(), 2, {0.4, 0.15, 0.15, 0.3});
  JointDistribution erased = apply_channel_per_symbol(j, depolarizing_channel(1.0, r));
  JointDistribution rr = iid_power(r, 2);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::fabs(erased(i) - rr(i)) < 1e-12);
}

TEST_CASE("channel commutes with permutation") {
  Rng rng(404);
  StochasticChannel w = depolarizing_channel(0.3, bin(0.6));
  for (int t = 0; t < 20; ++t) {
    JointDistribution j(Alphabet::binary(), 3, rng.simplex_point(8));
    JointDistribution a = apply_channel_per_symbol(permute(j, {3, 1, 2}), w);
    JointDistribution b = permute(apply_channel_per_symbol(j, w), {3, 1, 2});
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::fabs(a(i) - b(i)) < 1e-12);
  }
}

TEST_CASE("blur contracts total variation by at most delta") {
  Rng rng(405);
  for (int t = 0; t < 50; ++t) {
    Distribution p(Alphabet::ternary(), rng.simplex_point(3));
    Distribution r(Alphabet::ternary(), rng.simplex_point(3));
    double delta = rng.uniform();
    Distribution out = apply_channel(depolarizing_channel(delta, r), p);
    CHECK(tv_distance(out, p) <= delta + 1e-12);
  }
}

TEST_CASE("tv distance") {
  Distribution p = bin(0.5);
  CHECK(tv_distance(p, p) == doctest::Approx(0.0));
  CHECK(tv_distance(bin(1.0), bin(0.0)) == doctest::Approx(1.0));
  CHECK(tv_distance(bin(0.5), bin(0.25)) == doctest::Approx(0.25));
}

TEST_CASE("entropy") {
  CHECK(entropy(bin(1.0)) == doctest::Approx(0.0));
  CHECK(std::fabs(entropy(bin(0.5)) - lg(2.0)) < 1e-12);
  Distribution u3(Alphabet::ternary(), {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(std::fabs(entropy(u3) - lg(3.0)) < 1e-12);
  // h2(1/4) = (1/4) ln 4 + (3/4) ln(4/3) nats
  CHECK(std::fabs(entropy(bin(0.25)) - units_from_nats(0.5623351446188083)) < 1e-12);
}

TEST_CASE("string codec roundtrip") {
  for (std::size_t idx = 0; idx < 27; ++idx) {
    std::vector<int> digits = decode_string(idx, 3, 3);
    CHECK(encode_string(digits, 3) == idx);
  }
  // position 1 is the most significant digit
  std::vector<int> d = decode_string(5, 2, 3);  // 101
  CHECK(d[0] == 1);
  CHECK(d[1] == 0);
  CHECK(d[2] == 1);
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(Distribution(Alphabet::binary(), {0.6, 0.6}), DomainError);
  CHECK_THROWS_AS(Distribution(Alphabet::binary(), {-0.1, 1.1}), DomainError);
  CHECK_THROWS_AS(JointDistribution(Alphabet::binary(), 2, {1.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(tensor_product({}), DomainError);
  CHECK_THROWS_AS(joint_dim_checked(2, 30), CapacityError);
}
