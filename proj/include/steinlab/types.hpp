#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "steinlab/alphabet.hpp"

namespace steinlab {

using BigInt = boost::multiprecision::cpp_int;

// Empirical distribution with denominator n: V(x) = counts[x] / n.
struct TypeVector {
  Alphabet alphabet;
  int n = 0;
  std::vector<std::int64_t> counts;

  TypeVector() = default;
  TypeVector(Alphabet a, int n_, std::vector<std::int64_t> counts_);
  double v(int x) const {
    return static_cast<double>(counts[static_cast<std::size_t>(x)]) / n;
  }
  Distribution as_distribution() const;
};

// Explicit string set at level n, held as sorted lexicographic indices.
struct StringSet {
  Alphabet alphabet;
  int n = 0;
  std::vector<std::size_t> indices;  // sorted, unique

  StringSet() = default;
  StringSet(Alphabet a, int n_, std::vector<std::size_t> idx);
};

// All n-types in lexicographically increasing count order; the count equals
// binomial(n+|X|-1, |X|-1).
std::vector<TypeVector> enumerate_types(const Alphabet& a, int n);

BigInt count_types(int alphabet_size, int n);  // binomial(n+|X|-1, |X|-1)

TypeVector type_of_string(const Alphabet& a, const std::vector<int>& s);

// Multinomial n! / prod counts!, exact.
BigInt type_class_size(const TypeVector& V);

// Guard: refuses classes above 10^7 strings.
StringSet enumerate_type_class(const TypeVector& V);

// P^{tensor n}(T_{n,V}) = |T_{n,V}| * prod_x P(x)^{counts[x]}.
double iid_weight_of_type_class(const Distribution& P, const TypeVector& V);

int hamming_distance(const std::vector<int>& x, const std::vector<int>& y);

// P^{tensor n}(B_d(Y,K)) computed exactly by BFS over the Hamming graph.
double hamming_ball_weight(const StringSet& Y, int K, const Distribution& P);

// (1/2)||V - P||_1.
double type_tv_distance(const TypeVector& V, const Distribution& P);
double type_tv_distance(const TypeVector& V, const TypeVector& W);

double big_log(const BigInt& v);  // natural log of a positive big integer

}  // namespace steinlab
