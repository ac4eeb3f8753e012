#include "steinlab/types.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace steinlab {

TypeVector::TypeVector(Alphabet a, int n_, std::vector<std::int64_t> counts_)
    : alphabet(std::move(a)), n(n_), counts(std::move(counts_)) {
  if (n < 1) throw DomainError("type: n must be positive");
  if (counts.size() != static_cast<std::size_t>(alphabet.size()))
    throw DomainError("type: count vector mismatches alphabet");
  std::int64_t sum = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw DomainError("type: negative count");
    sum += c;
  }
  if (sum != n) throw DomainError("type: counts do not sum to n");
}

Distribution TypeVector::as_distribution() const {
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    w[i] = static_cast<double>(counts[i]) / n;
  return Distribution(alphabet, std::move(w));
}

StringSet::StringSet(Alphabet a, int n_, std::vector<std::size_t> idx)
    : alphabet(std::move(a)), n(n_), indices(std::move(idx)) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::size_t dim = joint_dim_checked(alphabet.size(), n);
  if (!indices.empty() && indices.back() >= dim)
    throw DomainError("string set: index out of range");
}

std::vector<TypeVector> enumerate_types(const Alphabet& a, int n) {
  if (n < 1) throw DomainError("enumerate_types: n must be positive");
  int k = a.size();
  std::vector<TypeVector> out;
  std::vector<std::int64_t> cur(static_cast<std::size_t>(k), 0);
  // Depth-first over count vectors emits lexicographically increasing order.
  auto rec = [&](auto&& self, int pos, std::int64_t remaining) -> void {
    if (pos == k - 1) {
      cur[static_cast<std::size_t>(pos)] = remaining;
      out.emplace_back(a, n, cur);
      return;
    }
    for (std::int64_t c = 0; c <= remaining; ++c) {
      cur[static_cast<std::size_t>(pos)] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  rec(rec, 0, n);
  return out;
}

BigInt count_types(int alphabet_size, int n) {
  // binomial(n + k - 1, k - 1)
  BigInt num = 1;
  BigInt den = 1;
  for (int i = 1; i <= alphabet_size - 1; ++i) {
    num *= n + i;
    den *= i;
  }
  return num / den;
}

TypeVector type_of_string(const Alphabet& a, const std::vector<int>& s) {
  if (s.empty()) throw DomainError("type_of_string: empty string");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(a.size()), 0);
  for (int x : s) {
    if (x < 0 || x >= a.size()) throw DomainError("type_of_string: foreign symbol");
    counts[static_cast<std::size_t>(x)] += 1;
  }
  return TypeVector(a, static_cast<int>(s.size()), std::move(counts));
}

BigInt type_class_size(const TypeVector& V) {
  BigInt num = 1;
  for (int i = 2; i <= V.n; ++i) num *= i;
  for (std::int64_t c : V.counts) {
    BigInt fact = 1;
    for (std::int64_t i = 2; i <= c; ++i) fact *= i;
    num /= fact;
  }
  return num;
}

StringSet enumerate_type_class(const TypeVector& V) {
  if (type_class_size(V) > 10000000) throw CapacityError("type class above 10^7 strings");
  int radix = V.alphabet.size();
  std::size_t dim = joint_dim_checked(radix, V.n);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<int> digits = decode_string(i, radix, V.n);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(radix), 0);
    for (int d : digits) counts[static_cast<std::size_t>(d)] += 1;
    if (counts == V.counts) idx.push_back(i);
  }
  return StringSet(V.alphabet, V.n, std::move(idx));
}

double iid_weight_of_type_class(const Distribution& P, const TypeVector& V) {
  if (!(P.alphabet == V.alphabet)) throw DomainError("iid weight: alphabet mismatch");
  double log_mass = 0.0;
  for (int x = 0; x < P.dim(); ++x) {
    std::int64_t c = V.counts[static_cast<std::size_t>(x)];
    if (c == 0) continue;
    if (P(x) <= 0.0) return 0.0;
    log_mass += static_cast<double>(c) * std::log(P(x));
  }
  return std::exp(big_log(type_class_size(V)) + log_mass);
}

int hamming_distance(const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) throw DomainError("hamming: length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) ++d;
  return d;
}

double hamming_ball_weight(const StringSet& Y, int K, const Distribution& P) {
  if (Y.indices.empty()) throw DomainError("hamming ball: empty string set");
  if (!(P.alphabet == Y.alphabet)) throw DomainError("hamming ball: alphabet mismatch");
  if (K < 0) throw DomainError("hamming ball: negative radius");
  int radix = Y.alphabet.size();
  std::size_t dim = joint_dim_checked(radix, Y.n);
  // BFS distance transform from Y over the Hamming graph.
  std::vector<int> dist(dim, -1);
  std::deque<std::size_t> queue;
  for (std::size_t i : Y.indices) {
    dist[i] = 0;
    queue.push_back(i);
  }
  // Position strides for single-symbol edits.
  std::vector<std::size_t> stride(static_cast<std::size_t>(Y.n));
  stride[static_cast<std::size_t>(Y.n) - 1] = 1;
  for (int i = Y.n - 2; i >= 0; --i)
    stride[static_cast<std::size_t>(i)] =
        stride[static_cast<std::size_t>(i) + 1] * static_cast<std::size_t>(radix);
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    if (dist[u] >= K) continue;  // no need to expand past the radius
    for (int pos = 0; pos < Y.n; ++pos) {
      std::size_t s = stride[static_cast<std::size_t>(pos)];
      int digit = static_cast<int>((u / s) % static_cast<std::size_t>(radix));
      std::size_t base = u - static_cast<std::size_t>(digit) * s;
      for (int d = 0; d < radix; ++d) {
        if (d == digit) continue;
        std::size_t v = base + static_cast<std::size_t>(d) * s;
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (dist[i] < 0 || dist[i] > K) continue;
    std::vector<int> digits = decode_string(i, radix, Y.n);
    double p = 1.0;
    for (int d : digits) p *= P(d);
    mass += p;
  }
  return mass;
}

double type_tv_distance(const TypeVector& V, const Distribution& P) {
  if (!(V.alphabet == P.alphabet)) throw DomainError("type tv: alphabet mismatch");
  double s = 0.0;
  for (int x = 0; x < P.dim(); ++x) s += std::abs(V.v(x) - P(x));
  return 0.5 * s;
}

double type_tv_distance(const TypeVector& V, const TypeVector& W) {
  if (!(V.alphabet == W.alphabet)) throw DomainError("type tv: alphabet mismatch");
  double s = 0.0;
  for (std::size_t x = 0; x < V.counts.size(); ++x) s += std::abs(V.v(static_cast<int>(x)) - W.v(static_cast<int>(x)));
  return 0.5 * s;
}

double big_log(const BigInt& v) {
  if (v <= 0) throw DomainError("big_log: nonpositive input");
  // Split into a double mantissa and a power of two to stay exact for huge values.
  unsigned bits = boost::multiprecision::msb(v);
  if (bits <= 52) return std::log(v.convert_to<double>());
  BigInt shifted = v >> (bits - 52);
  return std::log(shifted.convert_to<double>()) +
         static_cast<double>(bits - 52) * 0.6931471805599453094172321214581766;
}

}  // namespace steinlab
